#include "aascan/analytics.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace aascan {
namespace {

using nlohmann::json;

constexpr int64_t kSecondsPerDay = 86400;

json optional_rational_to_json(const std::optional<Rational>& r) {
    return r ? json(rational_to_string(*r)) : json(nullptr);
}

std::string csv_cell(const Rational& r) { return rational_to_decimal(r, 18); }

std::string csv_cell(const std::optional<Rational>& r) {
    return r ? csv_cell(*r) : std::string();
}

}  // namespace

uint64_t bucketize(int64_t timestamp, int64_t epoch_start, uint32_t bucket_days) {
    if (bucket_days == 0) throw std::invalid_argument("bucket_days must be positive");
    if (timestamp < epoch_start) {
        throw BeforeEpochError("timestamp " + std::to_string(timestamp) +
                               " precedes epoch start " + std::to_string(epoch_start));
    }
    return static_cast<uint64_t>((timestamp - epoch_start) /
                                 (int64_t(bucket_days) * kSecondsPerDay));
}

ExclusionList ExclusionList::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open exclusion list: " + path);
    json j = json::parse(in);

    ExclusionList list;
    for (const json& e : j.at("entries")) {
        list.entries[Hash32::from_hex(e.at("tx_hash").get<std::string>())] =
            e.value("reason", std::string());
    }
    return list;
}

void ExclusionList::save_file(const std::string& path) const {
    json entries_json = json::array();
    for (const auto& [hash, reason] : entries) {
        entries_json.push_back({{"tx_hash", hash.to_hex()}, {"reason", reason}});
    }
    json j{{"entries", std::move(entries_json)}};

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write exclusion list: " + path);
    out << j.dump(2) << '\n';
}

void UsdRateSeries::validate() const {
    for (size_t i = 0; i < rates.size(); ++i) {
        if (rates[i].second <= 0) {
            throw std::invalid_argument("USD rate must be positive at timestamp " +
                                        std::to_string(rates[i].first));
        }
        if (i > 0) {
            const int64_t gap = rates[i].first - rates[i - 1].first;
            if (gap <= 0) {
                throw std::invalid_argument("USD rate timestamps must be strictly increasing");
            }
            if (gap > kSecondsPerDay) {
                throw std::invalid_argument("USD rate series has a gap over one day at " +
                                            std::to_string(rates[i].first));
            }
        }
    }
}

std::optional<Rational> UsdRateSeries::rate_at(int64_t timestamp) const {
    auto it = std::upper_bound(
        rates.begin(), rates.end(), timestamp,
        [](int64_t t, const std::pair<int64_t, Rational>& r) { return t < r.first; });
    if (it == rates.begin()) return std::nullopt;
    return std::prev(it)->second;
}

UsdRateSeries UsdRateSeries::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open USD rate series: " + path);
    json j = json::parse(in);

    UsdRateSeries series;
    for (const json& r : j.at("rates")) {
        series.rates.emplace_back(r.at("timestamp").get<int64_t>(),
                                  rational_from_string(r.at("rate").get<std::string>()));
    }
    series.validate();
    return series;
}

Aggregator::Aggregator(AggregateOptions opts, ExclusionList exclusions, UsdRateSeries usd_rates)
    : opts_(opts), exclusions_(std::move(exclusions)), usd_rates_(std::move(usd_rates)) {
    if (opts_.bucket_days == 0) throw std::invalid_argument("bucket_days must be positive");
    usd_rates_.validate();
}

void Aggregator::add(const Classification& c) {
    if (exclusions_.contains(c.tx_hash)) return;

    uint64_t index;
    try {
        index = bucketize(c.timestamp, opts_.epoch_start, opts_.bucket_days);
    } catch (const BeforeEpochError&) {
        ++skipped_;
        return;
    }

    Bucket& b = buckets_[index];
    b.bids += c.beta;

    if (!c.is_aa) return;

    std::optional<Rational> usd_rate;
    if (!usd_rates_.rates.empty()) {
        usd_rate = usd_rates_.rate_at(c.timestamp);
        if (!usd_rate) b.usd_complete = false;
    }
    if (c.strategy == Strategy::FastLaneBased) {
        b.fastlane_count += 1;
        b.fastlane_mev += c.profit;
        if (usd_rate) b.fastlane_mev_usd += c.profit * *usd_rate;
        b.fastlane_bids += c.beta;
        b.fastlane_searchers.insert(c.searcher);
    } else {
        b.spam_count += 1;
        b.spam_mev += c.profit;
        if (usd_rate) b.spam_mev_usd += c.profit * *usd_rate;
        b.spam_searchers.insert(c.searcher);
    }
}

void Aggregator::merge(const Aggregator& other) {
    if (other.opts_.epoch_start != opts_.epoch_start ||
        other.opts_.bucket_days != opts_.bucket_days) {
        throw std::invalid_argument("cannot merge aggregators with different bucket grids");
    }
    skipped_ += other.skipped_;
    for (const auto& [index, ob] : other.buckets_) {
        Bucket& b = buckets_[index];
        b.spam_count += ob.spam_count;
        b.fastlane_count += ob.fastlane_count;
        b.spam_mev += ob.spam_mev;
        b.fastlane_mev += ob.fastlane_mev;
        b.spam_mev_usd += ob.spam_mev_usd;
        b.fastlane_mev_usd += ob.fastlane_mev_usd;
        b.usd_complete = b.usd_complete && ob.usd_complete;
        b.bids += ob.bids;
        b.fastlane_bids += ob.fastlane_bids;
        b.spam_searchers.insert(ob.spam_searchers.begin(), ob.spam_searchers.end());
        b.fastlane_searchers.insert(ob.fastlane_searchers.begin(), ob.fastlane_searchers.end());
    }
}

std::vector<AggregateRow> Aggregator::rows() const {
    std::vector<AggregateRow> out;
    out.reserve(buckets_.size());
    const bool usd_enabled = !usd_rates_.rates.empty();
    for (const auto& [index, b] : buckets_) {
        AggregateRow row;
        row.bucket_index = index;
        row.bucket_start =
            opts_.epoch_start + int64_t(index) * int64_t(opts_.bucket_days) * kSecondsPerDay;
        row.aa_tx_count_spam = b.spam_count;
        row.aa_tx_count_fastlane = b.fastlane_count;
        row.mev_volume_spam = b.spam_mev;
        row.mev_volume_fastlane = b.fastlane_mev;
        if (usd_enabled && b.usd_complete) {
            row.mev_usd_spam = b.spam_mev_usd;
            row.mev_usd_fastlane = b.fastlane_mev_usd;
        }
        row.bids_total = b.bids;
        row.unique_searchers_spam = b.spam_searchers.size();
        row.unique_searchers_fastlane = b.fastlane_searchers.size();
        const uint64_t aa_total = b.spam_count + b.fastlane_count;
        if (aa_total > 0) {
            row.fastlane_tx_share = Rational(b.fastlane_count, aa_total);
        }
        const Rational mev_total = b.spam_mev + b.fastlane_mev;
        if (mev_total != 0) {
            row.fastlane_mev_share = b.fastlane_mev / mev_total;
        }
        if (b.fastlane_mev != 0) {
            row.bid_to_mev_ratio = b.fastlane_bids / b.fastlane_mev;
        }
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<AggregateRow> aggregate(const std::vector<Classification>& stream,
                                    const ExclusionList& exclusions,
                                    const UsdRateSeries& usd_rates,
                                    const AggregateOptions& opts) {
    Aggregator agg(opts, exclusions, usd_rates);
    for (const Classification& c : stream) agg.add(c);
    return agg.rows();
}

std::string export_rows(const std::vector<AggregateRow>& rows, ExportFormat format) {
    if (format == ExportFormat::Csv) {
        std::ostringstream out;
        out << "bucket_index,bucket_start_iso,spam_tx_count,fl_tx_count,spam_mev_native,"
               "fl_mev_native,spam_mev_usd,fl_mev_usd,bids_native,uniq_searchers_spam,"
               "uniq_searchers_fl,fl_tx_share,fl_mev_share,bid_to_mev_ratio\n";
        for (const AggregateRow& r : rows) {
            out << r.bucket_index << ',' << iso8601_utc(r.bucket_start) << ','
                << r.aa_tx_count_spam << ',' << r.aa_tx_count_fastlane << ','
                << csv_cell(r.mev_volume_spam) << ',' << csv_cell(r.mev_volume_fastlane) << ','
                << csv_cell(r.mev_usd_spam) << ',' << csv_cell(r.mev_usd_fastlane) << ','
                << csv_cell(r.bids_total) << ',' << r.unique_searchers_spam << ','
                << r.unique_searchers_fastlane << ',' << csv_cell(r.fastlane_tx_share) << ','
                << csv_cell(r.fastlane_mev_share) << ',' << csv_cell(r.bid_to_mev_ratio)
                << '\n';
        }
        return out.str();
    }

    json arr = json::array();
    for (const AggregateRow& r : rows) {
        arr.push_back({
            {"bucket_index", r.bucket_index},
            {"bucket_start", r.bucket_start},
            {"bucket_start_iso", iso8601_utc(r.bucket_start)},
            {"spam_tx_count", r.aa_tx_count_spam},
            {"fl_tx_count", r.aa_tx_count_fastlane},
            {"spam_mev_native", rational_to_string(r.mev_volume_spam)},
            {"fl_mev_native", rational_to_string(r.mev_volume_fastlane)},
            {"spam_mev_usd", optional_rational_to_json(r.mev_usd_spam)},
            {"fl_mev_usd", optional_rational_to_json(r.mev_usd_fastlane)},
            {"bids_native", rational_to_string(r.bids_total)},
            {"uniq_searchers_spam", r.unique_searchers_spam},
            {"uniq_searchers_fl", r.unique_searchers_fastlane},
            {"fl_tx_share", optional_rational_to_json(r.fastlane_tx_share)},
            {"fl_mev_share", optional_rational_to_json(r.fastlane_mev_share)},
            {"bid_to_mev_ratio", optional_rational_to_json(r.bid_to_mev_ratio)},
        });
    }
    return arr.dump(2) + "\n";
}

void export_rows_file(const std::vector<AggregateRow>& rows, ExportFormat format,
                      const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << export_rows(rows, format);
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string iso8601_utc(int64_t timestamp) {
    std::time_t t = timestamp;
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int64_t parse_iso8601_utc(const std::string& text) {
    std::tm tm{};
    int consumed = 0;
    if (std::sscanf(text.c_str(), "%d-%d-%dT%d:%d:%dZ%n", &tm.tm_year, &tm.tm_mon, &tm.tm_mday,
                    &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &consumed) == 6 &&
        consumed == int(text.size())) {
        // full timestamp
    } else if (std::sscanf(text.c_str(), "%d-%d-%d%n", &tm.tm_year, &tm.tm_mon, &tm.tm_mday,
                           &consumed) == 3 &&
               consumed == int(text.size())) {
        tm.tm_hour = tm.tm_min = tm.tm_sec = 0;
    } else {
        throw std::invalid_argument("not an ISO-8601 UTC timestamp: " + text);
    }
    tm.tm_year -= 1900;
    tm.tm_mon -= 1;
    return timegm(&tm);
}

}  // namespace aascan
