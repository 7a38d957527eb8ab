#include "aascan/analytics.hpp"
#include "aascan/classify.hpp"
#include "aascan/decode.hpp"
#include "aascan/fixture.hpp"
#include "aascan/pipeline.hpp"
#include "aascan/rpc.hpp"
#include "aascan/scan.hpp"
#include "aascan/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace {

using aascan::Address;
using aascan::Hash32;
using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitPartial = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitTransport = 69;

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop.store(true); }

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class DataError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Layered settings resolution: built-in default < config file < environment
// variable < flag. CLI11 resolves env-vs-flag; the config file fills any
// option the parse left untouched.
json load_config_file(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw UsageError("config file unreadable: " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        throw UsageError("config file " + path + ": " + e.what());
    }
    if (!cfg.is_object()) throw UsageError("config file " + path + ": top level must be an object");
    return cfg;
}

template <typename T>
void fill(const CLI::Option* opt, T& var, const json& cfg, const char* key) {
    if (opt != nullptr && opt->count() > 0) return;
    auto it = cfg.find(key);
    if (it == cfg.end()) return;
    try {
        var = it->get<T>();
    } catch (const json::exception&) {
        throw UsageError(std::string("config key \"") + key + "\" has the wrong type");
    }
}

template <typename T>
void fill(const CLI::Option* opt, std::optional<T>& var, const json& cfg, const char* key) {
    T value{};
    bool had_value = var.has_value();
    if (had_value) value = *var;
    fill(opt, value, cfg, key);
    if (!had_value && cfg.contains(key) && (opt == nullptr || opt->count() == 0)) var = value;
}

std::string redact(const std::string& secret) { return secret.empty() ? "" : "<redacted>"; }

void print_config_and_exit(const ordered_json& resolved) {
    std::cout << resolved.dump(2) << "\n";
}

// ---------------------------------------------------------------- scan ----

struct ScanArgs {
    std::string config_path;
    std::string rpc_url;
    std::string rpc_auth_header;
    int rpc_timeout = 30;
    int rpc_attempts = 5;
    std::string fixture;
    std::optional<uint64_t> from_block;
    std::optional<uint64_t> to_block;
    std::string direction = "forward";
    std::string out;
    std::string checkpoint;
    bool reset_checkpoint = false;
    std::optional<uint64_t> stop_after_blocks;
    std::string classifier;
    std::string pools;
    std::string fastlane_addresses;
    std::string searcher_identity;
    uint32_t parallelism = 8;
    bool show_config = false;

    std::map<std::string, CLI::Option*> opts;
};

void merge_fastlane_file(aascan::ClassifierConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("auction address file unreadable: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw DataError("auction address file " + path + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("addresses") || !doc["addresses"].is_array())
        throw DataError("auction address file " + path + ": expected {\"addresses\": [..]}");
    for (const auto& entry : doc["addresses"]) {
        if (!entry.is_string())
            throw DataError("auction address file " + path + ": addresses must be hex strings");
        cfg.fastlane_addresses.insert(Address::from_hex(entry.get<std::string>()));
    }
}

int cmd_scan(ScanArgs& a) {
    const json cfg = load_config_file(a.config_path);
    fill(a.opts["rpc-url"], a.rpc_url, cfg, "rpc_url");
    fill(a.opts["rpc-auth-header"], a.rpc_auth_header, cfg, "rpc_auth_header");
    fill(a.opts["rpc-timeout"], a.rpc_timeout, cfg, "rpc_timeout");
    fill(a.opts["rpc-attempts"], a.rpc_attempts, cfg, "rpc_attempts");
    fill(a.opts["fixture"], a.fixture, cfg, "fixture");
    fill(a.opts["from-block"], a.from_block, cfg, "from_block");
    fill(a.opts["to-block"], a.to_block, cfg, "to_block");
    fill(a.opts["direction"], a.direction, cfg, "direction");
    fill(a.opts["out"], a.out, cfg, "out");
    fill(a.opts["checkpoint"], a.checkpoint, cfg, "checkpoint");
    fill(a.opts["classifier"], a.classifier, cfg, "classifier");
    fill(a.opts["pools"], a.pools, cfg, "pools");
    fill(a.opts["fastlane-addresses"], a.fastlane_addresses, cfg, "fastlane_addresses");
    fill(a.opts["searcher-identity"], a.searcher_identity, cfg, "searcher_identity");
    fill(a.opts["parallelism"], a.parallelism, cfg, "parallelism");

    const bool have_rpc = !a.rpc_url.empty();
    const bool have_fixture = !a.fixture.empty();
    if (have_rpc == have_fixture)
        throw UsageError("scan needs exactly one block source: --rpc-url or --fixture");
    if (a.classifier.empty()) throw UsageError("scan needs --classifier");
    if (a.parallelism == 0) throw UsageError("--parallelism must be positive");

    const aascan::Direction dir = aascan::direction_from_string(a.direction);

    std::optional<aascan::JsonRpcClient> client;
    std::optional<aascan::FixtureSource> fixture_source;
    std::optional<aascan::RpcSource> rpc_source;
    if (have_fixture) {
        fixture_source.emplace(a.fixture);
        if (!a.from_block) a.from_block = fixture_source->index().min_block();
        if (!a.to_block) a.to_block = fixture_source->index().max_block();
    } else {
        aascan::EndpointConfig ep;
        ep.url = a.rpc_url;
        ep.auth_header = a.rpc_auth_header;
        ep.timeout_seconds = a.rpc_timeout;
        ep.max_attempts = a.rpc_attempts;
        ep.validate();
        client.emplace(ep);
        if (!a.from_block || !a.to_block)
            throw UsageError("scan over rpc needs --from-block and --to-block");
    }

    aascan::ClassifierConfig classifier = aascan::ClassifierConfig::load_file(a.classifier);
    if (!a.fastlane_addresses.empty()) merge_fastlane_file(classifier, a.fastlane_addresses);
    if (!a.searcher_identity.empty())
        classifier.searcher_identity = aascan::searcher_identity_from_string(a.searcher_identity);
    classifier.validate();

    aascan::PoolRegistry registry =
        a.pools.empty() ? aascan::PoolRegistry{} : aascan::PoolRegistry::load_file(a.pools);

    if (a.show_config) {
        ordered_json resolved{
            {"command", "scan"},
            {"rpc_url", a.rpc_url},
            {"rpc_auth_header", redact(a.rpc_auth_header)},
            {"rpc_timeout", a.rpc_timeout},
            {"rpc_attempts", a.rpc_attempts},
            {"fixture", a.fixture},
            {"from_block", a.from_block ? json(*a.from_block) : json()},
            {"to_block", a.to_block ? json(*a.to_block) : json()},
            {"direction", aascan::direction_to_string(dir)},
            {"out", a.out.empty() ? "<stdout>" : a.out},
            {"checkpoint", a.checkpoint},
            {"reset_checkpoint", a.reset_checkpoint},
            {"stop_after_blocks", a.stop_after_blocks ? json(*a.stop_after_blocks) : json()},
            {"classifier", a.classifier},
            {"pools", a.pools},
            {"fastlane_addresses", a.fastlane_addresses},
            {"searcher_identity",
             aascan::searcher_identity_to_string(classifier.searcher_identity)},
            {"parallelism", a.parallelism},
        };
        print_config_and_exit(resolved);
        return kExitOk;
    }

    // A genuine resume appends to the partial output; everything else starts
    // the file over.
    const bool resuming = !a.checkpoint.empty() && !a.reset_checkpoint &&
                          std::filesystem::exists(a.checkpoint);
    std::ofstream file_out;
    if (!a.out.empty()) {
        file_out.open(a.out, resuming ? std::ios::app : std::ios::trunc);
        if (!file_out) throw DataError("output file unwritable: " + a.out);
    }
    std::ostream& out = a.out.empty() ? std::cout : file_out;

    if (*a.from_block > *a.to_block) {
        std::cerr << "scan: empty range (--from-block " << *a.from_block << " > --to-block "
                  << *a.to_block << "), 0 block(s), 0 classification line(s), complete\n";
        return kExitOk;
    }

    aascan::BlockSource& source =
        have_fixture ? static_cast<aascan::BlockSource&>(*fixture_source)
                     : static_cast<aascan::BlockSource&>(rpc_source.emplace(*client));

    aascan::PoolRegistry::Resolver resolver;
    if (have_rpc)
        resolver = aascan::make_chain_resolver(*client, std::max(*a.from_block, *a.to_block));

    aascan::ScanOptions opts;
    opts.from_block = *a.from_block;
    opts.to_block = *a.to_block;
    opts.direction = dir;
    opts.checkpoint_path = a.checkpoint;
    opts.prefetch = a.parallelism;
    opts.reset_checkpoint = a.reset_checkpoint;
    opts.stop_after_blocks = a.stop_after_blocks;

    const aascan::ScanResult result =
        aascan::run_scan(source, registry, resolver, classifier, opts, out, &g_stop);

    std::cerr << "scan: " << result.blocks_processed << " block(s), " << result.lines_written
              << " classification line(s), " << (result.complete ? "complete" : "partial")
              << "\n";
    return result.complete ? kExitOk : kExitPartial;
}

// -------------------------------------------------------------- report ----

struct ReportArgs {
    std::string config_path;
    std::string input;
    std::string out;
    std::string format = "csv";
    std::string epoch_start;
    uint32_t bucket_days = 28;
    std::string exclusions;
    std::string usd_rates;
    bool show_config = false;

    std::map<std::string, CLI::Option*> opts;
};

int cmd_report(ReportArgs& a) {
    const json cfg = load_config_file(a.config_path);
    fill(a.opts["out"], a.out, cfg, "out");
    fill(a.opts["format"], a.format, cfg, "format");
    fill(a.opts["epoch-start"], a.epoch_start, cfg, "epoch_start");
    fill(a.opts["bucket-days"], a.bucket_days, cfg, "bucket_days");
    fill(a.opts["exclusions"], a.exclusions, cfg, "exclusions");
    fill(a.opts["usd-rates"], a.usd_rates, cfg, "usd_rates");

    if (a.format != "csv" && a.format != "json")
        throw UsageError("--format must be csv or json");
    if (a.bucket_days == 0) throw UsageError("--bucket-days must be positive");

    std::optional<int64_t> epoch;
    if (!a.epoch_start.empty()) {
        try {
            epoch = aascan::parse_iso8601_utc(a.epoch_start);
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("--epoch-start: ") + e.what());
        }
    }

    if (a.show_config) {
        ordered_json resolved{
            {"command", "report"},
            {"input", a.input},
            {"out", a.out.empty() ? "<stdout>" : a.out},
            {"format", a.format},
            {"epoch_start", a.epoch_start.empty() ? json() : json(a.epoch_start)},
            {"bucket_days", a.bucket_days},
            {"exclusions", a.exclusions},
            {"usd_rates", a.usd_rates},
        };
        print_config_and_exit(resolved);
        return kExitOk;
    }

    const std::vector<aascan::Classification> stream = aascan::load_classifications(a.input);

    aascan::ExclusionList exclusions;
    if (!a.exclusions.empty()) exclusions = aascan::ExclusionList::load_file(a.exclusions);
    aascan::UsdRateSeries rates;
    if (!a.usd_rates.empty()) rates = aascan::UsdRateSeries::load_file(a.usd_rates);

    if (!epoch) {
        // Default epoch: the earliest record, so bucket 0 starts where the
        // data does regardless of scan direction.
        int64_t min_ts = 0;
        bool first = true;
        for (const auto& c : stream) {
            if (first || c.timestamp < min_ts) min_ts = c.timestamp;
            first = false;
        }
        epoch = min_ts;
    }

    aascan::AggregateOptions opts;
    opts.epoch_start = *epoch;
    opts.bucket_days = a.bucket_days;

    const auto rows = aascan::aggregate(stream, exclusions, rates, opts);
    const auto format =
        a.format == "csv" ? aascan::ExportFormat::Csv : aascan::ExportFormat::Json;
    if (a.out.empty())
        std::cout << aascan::export_rows(rows, format);
    else
        aascan::export_rows_file(rows, format, a.out);

    std::cerr << "report: " << stream.size() << " record(s) into " << rows.size()
              << " bucket row(s)\n";
    return kExitOk;
}

// --------------------------------------------------------------- synth ----

struct SynthArgs {
    std::string config_path;
    std::string plan;
    std::string out_dir;
    bool show_config = false;

    std::map<std::string, CLI::Option*> opts;
};

int cmd_synth(SynthArgs& a) {
    const json cfg = load_config_file(a.config_path);
    fill(a.opts["plan"], a.plan, cfg, "plan");
    fill(a.opts["out-dir"], a.out_dir, cfg, "out_dir");
    if (a.out_dir.empty()) throw UsageError("synth needs --out-dir");

    aascan::synth::SynthPlan plan;
    if (!a.plan.empty()) plan = aascan::synth::SynthPlan::load_file(a.plan);
    plan.validate();

    if (a.show_config) {
        ordered_json resolved{
            {"command", "synth"},
            {"plan", a.plan.empty() ? "<built-in defaults>" : a.plan},
            {"out_dir", a.out_dir},
            {"seed", plan.seed},
            {"block_count", plan.block_count},
        };
        print_config_and_exit(resolved);
        return kExitOk;
    }

    std::filesystem::create_directories(a.out_dir);
    const auto out = aascan::synth::generate(plan);

    const std::filesystem::path dir(a.out_dir);
    plan.save_file((dir / "plan.json").string());
    aascan::store_fixture(out.blocks, (dir / "fixture.jsonl").string());
    out.truth.save_file((dir / "truth.json").string());
    out.pools.save_file((dir / "pools.json").string());
    out.classifier.save_file((dir / "classifier.json").string());

    size_t tx_count = 0;
    for (const auto& b : out.blocks) tx_count += b.transactions.size();
    std::cerr << "synth: " << out.blocks.size() << " block(s), " << tx_count
              << " transaction(s), " << out.pools.size() << " pool(s) -> " << a.out_dir << "\n";
    return kExitOk;
}

// -------------------------------------------------------------- verify ----

struct VerifyArgs {
    std::string config_path;
    std::string dir;
    std::string fixture;
    std::string truth;
    std::string pools;
    std::string classifier;
    bool show_config = false;

    std::map<std::string, CLI::Option*> opts;
};

int cmd_verify(VerifyArgs& a) {
    const json cfg = load_config_file(a.config_path);
    fill(a.opts["dir"], a.dir, cfg, "dir");
    fill(a.opts["fixture"], a.fixture, cfg, "fixture");
    fill(a.opts["truth"], a.truth, cfg, "truth");
    fill(a.opts["pools"], a.pools, cfg, "pools");
    fill(a.opts["classifier"], a.classifier, cfg, "classifier");

    if (!a.dir.empty()) {
        const std::filesystem::path dir(a.dir);
        if (a.fixture.empty()) a.fixture = (dir / "fixture.jsonl").string();
        if (a.truth.empty()) a.truth = (dir / "truth.json").string();
        if (a.pools.empty()) a.pools = (dir / "pools.json").string();
        if (a.classifier.empty()) a.classifier = (dir / "classifier.json").string();
    }
    if (a.fixture.empty() || a.truth.empty() || a.pools.empty() || a.classifier.empty())
        throw UsageError("verify needs --dir or all of --fixture/--truth/--pools/--classifier");

    if (a.show_config) {
        ordered_json resolved{
            {"command", "verify"}, {"fixture", a.fixture},       {"truth", a.truth},
            {"pools", a.pools},    {"classifier", a.classifier},
        };
        print_config_and_exit(resolved);
        return kExitOk;
    }

    aascan::PoolRegistry registry = aascan::PoolRegistry::load_file(a.pools);
    const aascan::ClassifierConfig classifier = aascan::ClassifierConfig::load_file(a.classifier);
    classifier.validate();
    const auto truth = aascan::synth::GroundTruth::load_file(a.truth);
    const auto env = aascan::synth::oracle_env_from(registry, classifier);

    const std::vector<aascan::RawBlock> blocks = aascan::load_fixture(a.fixture);

    size_t checked = 0;
    size_t mismatches = 0;
    std::set<Hash32> seen;
    auto complain = [&](const Hash32& hash, const std::string& what) {
        ++mismatches;
        if (mismatches <= 20)
            std::cout << "mismatch " << hash.to_hex() << ": " << what << "\n";
        else if (mismatches == 21)
            std::cout << "... further mismatches suppressed\n";
    };

    for (const auto& block : blocks) {
        const auto classifications =
            aascan::classify_block(block, registry, aascan::PoolRegistry::Resolver{}, classifier);
        for (size_t i = 0; i < block.transactions.size(); ++i) {
            const auto& tx = block.transactions[i];
            const auto& c = classifications[i];
            ++checked;
            seen.insert(tx.hash);

            auto it = truth.entries.find(tx.hash);
            if (it == truth.entries.end()) {
                complain(tx.hash, "no ground-truth entry");
                continue;
            }
            const auto& t = it->second;
            if (c.is_aa != t.is_aa)
                complain(tx.hash, "pipeline is_aa=" + std::to_string(c.is_aa) +
                                      " truth=" + std::to_string(t.is_aa) + " (" + t.kind + ")");
            else if (c.strategy != t.strategy)
                complain(tx.hash, "pipeline strategy=" + aascan::strategy_to_string(c.strategy) +
                                      " truth=" + aascan::strategy_to_string(t.strategy) + " (" +
                                      t.kind + ")");
            if (c.swap_count != t.swap_count)
                complain(tx.hash, "pipeline swap_count=" + std::to_string(c.swap_count) +
                                      " truth=" + std::to_string(t.swap_count) + " (" + t.kind +
                                      ")");
            if (t.is_aa && c.profit != t.profit)
                complain(tx.hash,
                         "pipeline profit=" + aascan::rational_to_string(c.profit) +
                             " truth=" + aascan::rational_to_string(t.profit) + " (" + t.kind +
                             ")");

            const auto oracle = aascan::synth::oracle_classify(tx, env);
            if (oracle.is_aa != c.is_aa || oracle.strategy != c.strategy)
                complain(tx.hash,
                         "reference classifier disagrees: is_aa=" + std::to_string(oracle.is_aa) +
                             " strategy=" + aascan::strategy_to_string(oracle.strategy) +
                             " vs pipeline " + aascan::strategy_to_string(c.strategy));
        }
    }
    for (const auto& [hash, entry] : truth.entries)
        if (seen.count(hash) == 0) complain(hash, "ground-truth entry missing from fixture");

    if (mismatches == 0) {
        std::cout << "verify: " << checked
                  << " transaction(s), all verdicts match ground truth and the reference "
                     "classifier\n";
        return kExitOk;
    }
    std::cout << "verify: " << checked << " transaction(s), " << mismatches << " mismatch(es)\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);

    CLI::App app{"Atomic-arbitrage detection over EVM block data"};
    app.require_subcommand(1);
    app.footer(
        "Exit codes: 0 success, 2 partial scan (checkpoint saved), 64 usage or\n"
        "configuration error, 65 malformed input data, 69 endpoint unreachable.\n"
        "Every flag can come from a JSON config file (--config) or an AASCAN_*\n"
        "environment variable; flags beat environment, environment beats file.");

    ScanArgs scan;
    ReportArgs report;
    SynthArgs synth;
    VerifyArgs verify;

    auto* scan_cmd = app.add_subcommand("scan", "Classify every transaction in a block range");
    scan.opts["config"] = scan_cmd->add_option("--config", scan.config_path, "JSON config file")
                              ->envname("AASCAN_CONFIG");
    scan.opts["rpc-url"] = scan_cmd->add_option("--rpc-url", scan.rpc_url, "JSON-RPC endpoint")
                               ->envname("AASCAN_RPC_URL");
    scan.opts["rpc-auth-header"] =
        scan_cmd->add_option("--rpc-auth-header", scan.rpc_auth_header, "Authorization header")
            ->envname("AASCAN_RPC_AUTH_HEADER");
    scan.opts["rpc-timeout"] =
        scan_cmd->add_option("--rpc-timeout", scan.rpc_timeout, "per-request seconds")
            ->envname("AASCAN_RPC_TIMEOUT");
    scan.opts["rpc-attempts"] =
        scan_cmd->add_option("--rpc-attempts", scan.rpc_attempts, "transport retries")
            ->envname("AASCAN_RPC_ATTEMPTS");
    scan.opts["fixture"] =
        scan_cmd->add_option("--fixture", scan.fixture, "JSON-lines block fixture instead of rpc")
            ->envname("AASCAN_FIXTURE");
    scan.opts["from-block"] = scan_cmd->add_option("--from-block", scan.from_block, "range start")
                                  ->envname("AASCAN_FROM_BLOCK");
    scan.opts["to-block"] = scan_cmd->add_option("--to-block", scan.to_block, "range end")
                                ->envname("AASCAN_TO_BLOCK");
    scan.opts["direction"] =
        scan_cmd->add_option("--direction", scan.direction, "forward|backward")
            ->check(CLI::IsMember({"forward", "backward"}))
            ->envname("AASCAN_DIRECTION");
    scan.opts["out"] =
        scan_cmd->add_option("--out", scan.out, "classification JSON-lines file (default stdout)")
            ->envname("AASCAN_OUT");
    scan.opts["checkpoint"] =
        scan_cmd->add_option("--checkpoint", scan.checkpoint, "durable scan cursor file")
            ->envname("AASCAN_CHECKPOINT");
    scan_cmd->add_flag("--reset-checkpoint", scan.reset_checkpoint,
                       "discard any existing checkpoint");
    scan_cmd->add_option("--stop-after-blocks", scan.stop_after_blocks,
                         "deliberately stop after N blocks (exit 2)");
    scan.opts["classifier"] =
        scan_cmd
            ->add_option("--classifier", scan.classifier,
                         "classifier config JSON (prices, auction addresses, dust)")
            ->envname("AASCAN_CLASSIFIER");
    scan.opts["pools"] = scan_cmd->add_option("--pools", scan.pools, "pool registry JSON")
                             ->envname("AASCAN_POOLS");
    scan.opts["fastlane-addresses"] =
        scan_cmd
            ->add_option("--fastlane-addresses", scan.fastlane_addresses,
                         "extra auction addresses, JSON {\"addresses\": [..]}")
            ->envname("AASCAN_FASTLANE_ADDRESSES");
    scan.opts["searcher-identity"] =
        scan_cmd
            ->add_option("--searcher-identity", scan.searcher_identity,
                         "attribute arbitrages to tx sender (from) or callee (to)")
            ->check(CLI::IsMember({"from", "to", "tx_from", "tx_to"}))
            ->envname("AASCAN_SEARCHER_IDENTITY");
    scan.opts["parallelism"] =
        scan_cmd->add_option("--parallelism", scan.parallelism, "block prefetch window")
            ->envname("AASCAN_PARALLELISM");
    scan_cmd->add_flag("--show-config", scan.show_config, "print resolved config and exit");

    auto* report_cmd =
        app.add_subcommand("report", "Aggregate scan output into time-bucket rows");
    report.opts["config"] =
        report_cmd->add_option("--config", report.config_path, "JSON config file")
            ->envname("AASCAN_CONFIG");
    report_cmd->add_option("input", report.input, "classification JSON-lines file")->required();
    report.opts["out"] =
        report_cmd->add_option("--out", report.out, "output file (default stdout)")
            ->envname("AASCAN_OUT");
    report.opts["format"] = report_cmd->add_option("--format", report.format, "csv|json")
                                ->check(CLI::IsMember({"csv", "json"}))
                                ->envname("AASCAN_FORMAT");
    report.opts["epoch-start"] =
        report_cmd
            ->add_option("--epoch-start", report.epoch_start,
                         "ISO8601 bucket origin (default: earliest record)")
            ->envname("AASCAN_EPOCH_START");
    report.opts["bucket-days"] =
        report_cmd->add_option("--bucket-days", report.bucket_days, "bucket length in days")
            ->envname("AASCAN_BUCKET_DAYS");
    report.opts["exclusions"] =
        report_cmd->add_option("--exclusions", report.exclusions, "excluded tx hashes JSON")
            ->envname("AASCAN_EXCLUSIONS");
    report.opts["usd-rates"] =
        report_cmd->add_option("--usd-rates", report.usd_rates, "USD rate series JSON")
            ->envname("AASCAN_USD_RATES");
    report_cmd->add_flag("--show-config", report.show_config, "print resolved config and exit");

    auto* synth_cmd =
        app.add_subcommand("synth", "Generate a labeled synthetic block fixture");
    synth.opts["config"] = synth_cmd->add_option("--config", synth.config_path, "JSON config file")
                               ->envname("AASCAN_CONFIG");
    synth.opts["plan"] =
        synth_cmd->add_option("--plan", synth.plan, "generation plan JSON (default: built-ins)")
            ->envname("AASCAN_PLAN");
    synth.opts["out-dir"] =
        synth_cmd->add_option("--out-dir", synth.out_dir, "directory for the generated artifacts")
            ->envname("AASCAN_OUT_DIR");
    synth_cmd->add_flag("--show-config", synth.show_config, "print resolved config and exit");

    auto* verify_cmd = app.add_subcommand(
        "verify", "Run the pipeline over a labeled fixture and diff against ground truth");
    verify.opts["config"] =
        verify_cmd->add_option("--config", verify.config_path, "JSON config file")
            ->envname("AASCAN_CONFIG");
    verify.opts["dir"] =
        verify_cmd->add_option("--dir", verify.dir, "synth output directory (sets the defaults)")
            ->envname("AASCAN_DIR");
    verify.opts["fixture"] = verify_cmd->add_option("--fixture", verify.fixture, "block fixture")
                                 ->envname("AASCAN_FIXTURE");
    verify.opts["truth"] = verify_cmd->add_option("--truth", verify.truth, "ground truth JSON")
                               ->envname("AASCAN_TRUTH");
    verify.opts["pools"] = verify_cmd->add_option("--pools", verify.pools, "pool registry JSON")
                               ->envname("AASCAN_POOLS");
    verify.opts["classifier"] =
        verify_cmd->add_option("--classifier", verify.classifier, "classifier config JSON")
            ->envname("AASCAN_CLASSIFIER");
    verify_cmd->add_flag("--show-config", verify.show_config, "print resolved config and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (scan_cmd->parsed()) return cmd_scan(scan);
        if (report_cmd->parsed()) return cmd_report(report);
        if (synth_cmd->parsed()) return cmd_synth(synth);
        return cmd_verify(verify);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const aascan::TransportError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitTransport;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
