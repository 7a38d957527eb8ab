#include "aascan/classification.hpp"
#include "aascan/fixture.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

using namespace aascan;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string output;  // stdout and stderr, merged
};

// Runs the installed binary through the shell; `env` is a space-separated
// list of VAR=value assignments prepended to the command.
Run run_cli(const std::string& args, const std::string& env = "") {
    const std::string cmd =
        env + (env.empty() ? "" : " ") + AASCAN_BIN " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    char buf[4096];
    size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
    const int status = pclose(pipe);
    Run r;
    r.output = std::move(output);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << body;
    REQUIRE(out.good());
}

// One generated fixture set shared by every test, produced by the binary
// itself so `synth` is exercised along the way.
struct Workspace {
    fs::path root;
    fs::path art;
    size_t tx_count = 0;

    Workspace() {
        root = fs::temp_directory_path() / ("aascan_cli_" + std::to_string(::getpid()));
        fs::remove_all(root);
        fs::create_directories(root);
        spit(root / "plan.json", R"({"seed": 5, "block_count": 8, "start_block": 100})");
        const Run r = run_cli("synth --plan " + (root / "plan.json").string() + " --out-dir " +
                              (root / "art").string());
        REQUIRE(r.code == 0);
        art = root / "art";
        for (const RawBlock& b : load_fixture((art / "fixture.jsonl").string()))
            tx_count += b.transactions.size();
    }
    ~Workspace() { fs::remove_all(root); }

    std::string scan_args() const {
        return "scan --fixture " + (art / "fixture.jsonl").string() + " --classifier " +
               (art / "classifier.json").string() + " --pools " + (art / "pools.json").string();
    }
    fs::path fresh(const std::string& name) const {
        fs::path dir = root / name;
        fs::create_directories(dir);
        return dir;
    }
};

Workspace& ws() {
    static Workspace w;
    return w;
}

}  // namespace

TEST_CASE("cli: synth writes the full artifact set") {
    const Workspace& w = ws();
    for (const char* name :
         {"plan.json", "fixture.jsonl", "truth.json", "pools.json", "classifier.json"}) {
        CAPTURE(name);
        CHECK(fs::exists(w.art / name));
    }
    CHECK(w.tx_count > 0);
}

TEST_CASE("cli: verify accepts a freshly generated fixture") {
    const Run r = run_cli("verify --dir " + ws().art.string());
    CHECK(r.code == 0);
    CHECK(r.output.find("all verdicts match") != std::string::npos);
}

TEST_CASE("cli: scan emits one classification line per transaction in block order") {
    const Workspace& w = ws();
    const fs::path out = w.fresh("scan_lines") / "lines.jsonl";
    const Run r = run_cli(w.scan_args() + " --out " + out.string());
    CHECK(r.code == 0);

    std::istringstream in(slurp(out));
    std::string line;
    size_t lines = 0;
    uint64_t last_block = 0;
    uint32_t last_index = 0;
    while (std::getline(in, line)) {
        const Classification c = classification_from_json_line(line);
        if (lines > 0) {
            CHECK(c.block_number >= last_block);
            if (c.block_number == last_block) CHECK(c.tx_index > last_index);
        }
        last_block = c.block_number;
        last_index = c.tx_index;
        ++lines;
    }
    CHECK(lines == w.tx_count);
}

TEST_CASE("cli: scan over an empty range writes nothing and succeeds") {
    const Workspace& w = ws();
    const fs::path out = w.fresh("empty_range") / "empty.jsonl";
    const Run r =
        run_cli(w.scan_args() + " --from-block 107 --to-block 100 --out " + out.string());
    CHECK(r.code == 0);
    CHECK(r.output.find("empty range") != std::string::npos);
    REQUIRE(fs::exists(out));
    CHECK(fs::file_size(out) == 0);
}

TEST_CASE("cli: an interrupted scan resumes and reproduces the uninterrupted output") {
    const Workspace& w = ws();
    const fs::path dir = w.fresh("resume");
    const fs::path whole = dir / "whole.jsonl";
    REQUIRE(run_cli(w.scan_args() + " --out " + whole.string()).code == 0);

    const fs::path part = dir / "part.jsonl";
    const std::string cp = (dir / "cursor.json").string();
    const Run first = run_cli(w.scan_args() + " --out " + part.string() + " --checkpoint " + cp +
                              " --stop-after-blocks 3");
    CHECK(first.code == 2);
    CHECK(fs::exists(cp));
    const Run second = run_cli(w.scan_args() + " --out " + part.string() + " --checkpoint " + cp);
    CHECK(second.code == 0);
    CHECK(slurp(part) == slurp(whole));
}

TEST_CASE("cli: report is deterministic and the format flag beats the environment") {
    const Workspace& w = ws();
    const fs::path dir = w.fresh("report");
    const fs::path lines = dir / "lines.jsonl";
    REQUIRE(run_cli(w.scan_args() + " --out " + lines.string()).code == 0);

    const std::string epoch = " --epoch-start 2023-11-14T00:00:00Z";
    const fs::path a = dir / "a.csv";
    const fs::path b = dir / "b.csv";
    CHECK(run_cli("report " + lines.string() + epoch + " --out " + a.string()).code == 0);
    CHECK(run_cli("report " + lines.string() + epoch + " --out " + b.string()).code == 0);
    const std::string csv = slurp(a);
    CHECK(csv == slurp(b));
    CHECK(csv.starts_with("bucket_index,bucket_start_iso,"));

    const fs::path via_env = dir / "via_env.json";
    CHECK(run_cli("report " + lines.string() + epoch + " --out " + via_env.string(),
                  "AASCAN_FORMAT=json")
              .code == 0);
    const json rows = json::parse(slurp(via_env));
    REQUIRE(rows.is_array());
    REQUIRE(!rows.empty());
    CHECK(rows[0].contains("bucket_start_iso"));
    CHECK(rows[0].contains("bid_to_mev_ratio"));

    const fs::path flagged = dir / "flag_beats_env.csv";
    CHECK(run_cli("report " + lines.string() + epoch + " --format csv --out " + flagged.string(),
                  "AASCAN_FORMAT=json")
              .code == 0);
    CHECK(slurp(flagged) == csv);
}

TEST_CASE("cli: usage errors exit with the configuration code") {
    const Workspace& w = ws();
    CHECK(run_cli(w.scan_args() + " --rpc-url http://localhost:1").code == 64);
    CHECK(run_cli("scan --fixture " + (w.art / "fixture.jsonl").string()).code == 64);
    CHECK(run_cli("report nowhere.jsonl --format yaml").code == 64);
    CHECK(run_cli("report nowhere.jsonl --epoch-start yesterday").code == 64);
    CHECK(run_cli("frobnicate").code == 64);
}

TEST_CASE("cli: report names the malformed input line and exits with the data code") {
    const Workspace& w = ws();
    const fs::path dir = w.fresh("malformed");
    const fs::path lines = dir / "lines.jsonl";
    REQUIRE(run_cli(w.scan_args() + " --out " + lines.string()).code == 0);
    std::istringstream in(slurp(lines));
    std::string first;
    REQUIRE(std::getline(in, first));
    spit(dir / "broken.jsonl", first + "\n{not json\n");

    const Run r = run_cli("report " + (dir / "broken.jsonl").string());
    CHECK(r.code == 65);
    CHECK(r.output.find("line 2") != std::string::npos);
}

TEST_CASE("cli: a missing fixture exits with the data code") {
    const Run r = run_cli("scan --fixture /nonexistent.jsonl --classifier also_missing.json");
    CHECK(r.code == 65);
}

TEST_CASE("cli: an unreachable endpoint exits with the transport code") {
    const Workspace& w = ws();
    const Run r = run_cli("scan --rpc-url http://127.0.0.1:9 --rpc-attempts 1 --rpc-timeout 2"
                          " --from-block 1 --to-block 1 --classifier " +
                          (w.art / "classifier.json").string());
    CHECK(r.code == 69);
}

TEST_CASE("cli: show-config prints resolved values and redacts the auth header") {
    const Workspace& w = ws();
    const Run r = run_cli("scan --rpc-url http://unreachable.invalid --from-block 1 --to-block 2"
                          " --classifier " +
                              (w.art / "classifier.json").string() + " --show-config",
                          "AASCAN_RPC_AUTH_HEADER='Bearer sesame'");
    CHECK(r.code == 0);
    CHECK(r.output.find("\"rpc_auth_header\": \"<redacted>\"") != std::string::npos);
    CHECK(r.output.find("sesame") == std::string::npos);
    CHECK(r.output.find("\"from_block\": 1") != std::string::npos);
}

TEST_CASE("cli: environment and config file fill in missing flags identically") {
    const Workspace& w = ws();
    const fs::path dir = w.fresh("layering");

    const fs::path out_env = dir / "env.jsonl";
    const std::string env = "AASCAN_FIXTURE=" + (w.art / "fixture.jsonl").string() +
                            " AASCAN_CLASSIFIER=" + (w.art / "classifier.json").string() +
                            " AASCAN_POOLS=" + (w.art / "pools.json").string();
    CHECK(run_cli("scan --out " + out_env.string(), env).code == 0);

    const fs::path cfg = dir / "cfg.json";
    spit(cfg, json{{"fixture", (w.art / "fixture.jsonl").string()},
                   {"classifier", (w.art / "classifier.json").string()},
                   {"pools", (w.art / "pools.json").string()}}
                  .dump());
    const fs::path out_cfg = dir / "cfg.jsonl";
    CHECK(run_cli("scan --config " + cfg.string() + " --out " + out_cfg.string()).code == 0);

    CHECK(slurp(out_env) == slurp(out_cfg));
}
