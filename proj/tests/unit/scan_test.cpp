#include "aascan/scan.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <vector>

using namespace aascan;

namespace {

std::vector<RawBlock> make_blocks(uint64_t first, uint64_t count) {
    std::vector<RawBlock> blocks;
    for (uint64_t n = first; n < first + count; ++n) {
        RawBlock b;
        b.number = n;
        b.timestamp = 1700000000 + int64_t(n) * 2;
        blocks.push_back(std::move(b));
    }
    return blocks;
}

FixtureSource memory_source(uint64_t first, uint64_t count) {
    return FixtureSource{FixtureIndex{make_blocks(first, count)}};
}

struct TempFile {
    std::string path;
    explicit TempFile(const char* name)
        : path((std::filesystem::temp_directory_path() / name).string()) {
        std::filesystem::remove(path);
    }
    ~TempFile() { std::filesystem::remove(path); }
};

std::vector<uint64_t> drain(Traversal& t) {
    std::vector<uint64_t> seen;
    while (auto block = t.next()) {
        seen.push_back(block->number);
        t.commit();
    }
    return seen;
}

}  // namespace

TEST_CASE("direction strings") {
    CHECK(direction_to_string(Direction::Forward) == "forward");
    CHECK(direction_from_string("backward") == Direction::Backward);
    CHECK_THROWS_AS(direction_from_string("sideways"), std::invalid_argument);
}

TEST_CASE("fresh checkpoints start at the near edge") {
    const auto fwd = ScanCheckpoint::fresh(10, 20, Direction::Forward, true);
    CHECK(fwd.next_block == 10);
    CHECK(fwd.current() == 10);
    CHECK_FALSE(fwd.completed);

    const auto bwd = ScanCheckpoint::fresh(10, 20, Direction::Backward, false);
    CHECK(bwd.next_block == 20);
    CHECK(bwd.current() == 20);

    CHECK_THROWS_AS(ScanCheckpoint::fresh(21, 20, Direction::Forward, true), CheckpointError);
}

TEST_CASE("checkpoint advance walks the range once and clamps") {
    auto cp = ScanCheckpoint::fresh(5, 7, Direction::Forward, true);
    std::vector<uint64_t> visited;
    while (auto cur = cp.current()) {
        visited.push_back(*cur);
        cp.advance();
    }
    CHECK(visited == std::vector<uint64_t>{5, 6, 7});
    CHECK(cp.completed);
    CHECK(cp.next_block == 8);
    CHECK_NOTHROW(cp.validate());  // clamped inside [start, end+1]
    cp.advance();                  // idempotent once complete
    CHECK(cp.next_block == 8);

    cp = ScanCheckpoint::fresh(5, 7, Direction::Backward, true);
    visited.clear();
    while (auto cur = cp.current()) {
        visited.push_back(*cur);
        cp.advance();
    }
    CHECK(visited == std::vector<uint64_t>{7, 6, 5});
    CHECK(cp.completed);
    CHECK(cp.next_block == 5);
    CHECK_NOTHROW(cp.validate());
}

TEST_CASE("single-block range completes in one step") {
    for (auto dir : {Direction::Forward, Direction::Backward}) {
        auto cp = ScanCheckpoint::fresh(9, 9, dir, true);
        CHECK(cp.current() == 9);
        cp.advance();
        CHECK(cp.completed);
        CHECK_FALSE(cp.current().has_value());
    }
}

TEST_CASE("checkpoint file round trip and corruption handling") {
    TempFile file("scan_cp_rt.json");
    auto cp = ScanCheckpoint::fresh(100, 200, Direction::Backward, true);
    cp.advance();
    cp.save_file(file.path);
    CHECK(ScanCheckpoint::load_file(file.path) == cp);

    CHECK_THROWS_AS(ScanCheckpoint::load_file(file.path + ".nope"), CheckpointError);

    std::ofstream(file.path, std::ios::trunc) << "{broken";
    CHECK_THROWS_AS(ScanCheckpoint::load_file(file.path), CheckpointError);

    std::ofstream(file.path, std::ios::trunc) << R"({"range_start":10,"range_end":20,)"
        << R"("direction":"forward","fixture_mode":true,"next_block":99,"completed":false})";
    CHECK_THROWS_AS(ScanCheckpoint::load_file(file.path), CheckpointError);

    std::ofstream(file.path, std::ios::trunc) << R"({"range_start":10,"range_end":20,)"
        << R"("direction":"diagonal","fixture_mode":true,"next_block":10,"completed":false})";
    CHECK_THROWS_AS(ScanCheckpoint::load_file(file.path), CheckpointError);
}

TEST_CASE("traversal delivers the whole range in order") {
    auto source = memory_source(100, 10);

    Traversal fwd(source, 100, 109, Direction::Forward, "");
    CHECK(drain(fwd) == std::vector<uint64_t>{100, 101, 102, 103, 104, 105, 106, 107, 108, 109});
    CHECK_FALSE(fwd.next().has_value());

    Traversal bwd(source, 100, 109, Direction::Backward, "");
    CHECK(drain(bwd) == std::vector<uint64_t>{109, 108, 107, 106, 105, 104, 103, 102, 101, 100});

    Traversal wide(source, 102, 104, Direction::Forward, "", TraversalOptions{64, false});
    CHECK(drain(wide) == std::vector<uint64_t>{102, 103, 104});
}

TEST_CASE("traversal without commit refuses a second next") {
    auto source = memory_source(0, 3);
    Traversal t(source, 0, 2, Direction::Forward, "");
    CHECK(t.next().has_value());
    CHECK_THROWS_AS(t.next(), std::logic_error);
    t.commit();
    CHECK_THROWS_AS(t.commit(), std::logic_error);
}

TEST_CASE("traversal resumes at the first uncommitted block") {
    auto source = memory_source(50, 8);
    TempFile cp("scan_resume.json");

    std::vector<uint64_t> seen;
    {
        Traversal t(source, 50, 57, Direction::Forward, cp.path);
        for (int i = 0; i < 3; ++i) {
            seen.push_back(t.next()->number);
            t.commit();
        }
    }
    {
        Traversal t(source, 50, 57, Direction::Forward, cp.path);
        CHECK(t.checkpoint().next_block == 53);
        for (auto n : drain(t)) seen.push_back(n);
    }
    CHECK(seen == std::vector<uint64_t>{50, 51, 52, 53, 54, 55, 56, 57});

    // completed checkpoint: nothing more comes out
    Traversal done(source, 50, 57, Direction::Forward, cp.path);
    CHECK_FALSE(done.next().has_value());
}

TEST_CASE("a block dropped before commit is delivered again") {
    auto source = memory_source(7, 3);
    TempFile cp("scan_redeliver.json");
    {
        Traversal t(source, 7, 9, Direction::Forward, cp.path);
        CHECK(t.next()->number == 7);
        t.commit();
        CHECK(t.next()->number == 8);
        // crash here: block 8 was handed out but never committed
    }
    Traversal t(source, 7, 9, Direction::Forward, cp.path);
    CHECK(drain(t) == std::vector<uint64_t>{8, 9});
}

TEST_CASE("traversal refuses a checkpoint from a different scan") {
    auto source = memory_source(0, 30);
    TempFile cp("scan_mismatch.json");
    {
        Traversal t(source, 0, 9, Direction::Forward, cp.path);
        t.next();
        t.commit();
    }
    CHECK_THROWS_AS(Traversal(source, 0, 10, Direction::Forward, cp.path), CheckpointError);
    CHECK_THROWS_AS(Traversal(source, 1, 9, Direction::Forward, cp.path), CheckpointError);
    CHECK_THROWS_AS(Traversal(source, 0, 9, Direction::Backward, cp.path), CheckpointError);

    // reset discards the old cursor and starts over
    Traversal fresh(source, 0, 9, Direction::Forward, cp.path, TraversalOptions{8, true});
    CHECK(fresh.next()->number == 0);
}

TEST_CASE("traversal surfaces source failures") {
    std::vector<RawBlock> blocks = make_blocks(10, 5);
    blocks.erase(blocks.begin() + 2);  // hole at 12
    FixtureSource source{FixtureIndex{std::move(blocks)}};

    Traversal t(source, 10, 14, Direction::Forward, "");
    CHECK(t.next()->number == 10);
    t.commit();
    CHECK(t.next()->number == 11);
    t.commit();
    CHECK_THROWS_AS(t.next(), NotFoundError);
}

TEST_CASE("fixture source reports the missing block number") {
    auto source = memory_source(10, 2);
    CHECK(source.fetch(11).number == 11);
    try {
        source.fetch(12);
        FAIL("expected NotFoundError");
    } catch (const NotFoundError& e) {
        CHECK(std::string(e.what()).find("12") != std::string::npos);
    }
}
