#pragma once

#include "aascan/classification.hpp"
#include "aascan/types.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace aascan {

class BeforeEpochError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Zero-based index of the fixed-length bucket containing `timestamp`.
/// Throws BeforeEpochError when timestamp < epoch_start.
uint64_t bucketize(int64_t timestamp, int64_t epoch_start, uint32_t bucket_days = 28);

/// Transaction hashes excluded from every aggregate, each with a recorded
/// reason. JSON file: {"entries": [{"tx_hash": "0x..", "reason": ".."}]}.
struct ExclusionList {
    std::map<Hash32, std::string> entries;

    bool contains(const Hash32& h) const { return entries.count(h) != 0; }

    static ExclusionList load_file(const std::string& path);
    void save_file(const std::string& path) const;
};

/// Step function from time to the USD rate of the common currency.
/// JSON file: {"rates": [{"timestamp": 1700000000, "rate": "0.52"}, ...]},
/// timestamps strictly increasing, rates positive, spacing at most one day.
struct UsdRateSeries {
    std::vector<std::pair<int64_t, Rational>> rates;  // sorted by timestamp

    void validate() const;  // throws std::invalid_argument
    /// Nearest-preceding rate; nullopt before the first sample.
    std::optional<Rational> rate_at(int64_t timestamp) const;

    static UsdRateSeries load_file(const std::string& path);
};

struct AggregateOptions {
    int64_t epoch_start = 0;
    uint32_t bucket_days = 28;
};

/// Streaming aggregation of classifications into per-bucket rows.
/// Thread-agnostic: feed one instance from a single thread, or merge
/// independently filled instances (merge is associative and order-free).
class Aggregator {
public:
    Aggregator(AggregateOptions opts, ExclusionList exclusions = {},
               UsdRateSeries usd_rates = {});

    /// Folds one classification in. Excluded hashes and non-AA records
    /// contribute nothing (bids of non-AA transactions are still counted
    /// into bids_total: spam that lost the race still paid).
    /// Records before the epoch are skipped and counted in skipped_count().
    void add(const Classification& c);

    void merge(const Aggregator& other);

    std::vector<AggregateRow> rows() const;
    size_t skipped_count() const { return skipped_; }

private:
    struct Bucket {
        uint64_t spam_count = 0;
        uint64_t fastlane_count = 0;
        Rational spam_mev;
        Rational fastlane_mev;
        Rational spam_mev_usd;      // per-record conversion at record time
        Rational fastlane_mev_usd;
        bool usd_complete = true;   // false once any record predates the rates
        Rational bids;
        Rational fastlane_bids;  // bids of FastLaneBased records only
        std::set<Address> spam_searchers;
        std::set<Address> fastlane_searchers;
    };

    AggregateOptions opts_;
    ExclusionList exclusions_;
    UsdRateSeries usd_rates_;
    std::map<uint64_t, Bucket> buckets_;
    size_t skipped_ = 0;
};

std::vector<AggregateRow> aggregate(const std::vector<Classification>& stream,
                                    const ExclusionList& exclusions,
                                    const UsdRateSeries& usd_rates,
                                    const AggregateOptions& opts);

enum class ExportFormat { Csv, Json };

// Fixed CSV column order:
//   bucket_index, bucket_start_iso, spam_tx_count, fl_tx_count,
//   spam_mev_native, fl_mev_native, spam_mev_usd, fl_mev_usd, bids_native,
//   uniq_searchers_spam, uniq_searchers_fl, fl_tx_share, fl_mev_share,
//   bid_to_mev_ratio.
// Unavailable optionals render as empty CSV cells / JSON nulls. Byte output
// is deterministic for identical rows.
std::string export_rows(const std::vector<AggregateRow>& rows, ExportFormat format);
void export_rows_file(const std::vector<AggregateRow>& rows, ExportFormat format,
                      const std::string& path);

std::string iso8601_utc(int64_t timestamp);
int64_t parse_iso8601_utc(const std::string& text);  // throws std::invalid_argument

}  // namespace aascan
