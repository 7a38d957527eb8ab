#pragma once

#include "aascan/fixture.hpp"
#include "aascan/rpc.hpp"
#include "aascan/types.hpp"

#include <deque>
#include <future>
#include <optional>
#include <stdexcept>
#include <string>

namespace aascan {

enum class Direction { Forward, Backward };

std::string direction_to_string(Direction d);
Direction direction_from_string(std::string_view s);

class CheckpointError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Durable cursor of a range scan. `next_block` is the first block not yet
/// committed; when the scan is complete it stays clamped inside
/// [range_start, range_end+1] and `completed` is set.
struct ScanCheckpoint {
    uint64_t range_start = 0;
    uint64_t range_end = 0;
    Direction direction = Direction::Forward;
    bool fixture_mode = false;
    uint64_t next_block = 0;
    bool completed = false;

    static ScanCheckpoint fresh(uint64_t range_start, uint64_t range_end, Direction direction,
                                bool fixture_mode);

    // Atomic write-temp-then-rename. load_file throws CheckpointError on
    // unreadable, unparseable, or invariant-violating content.
    static ScanCheckpoint load_file(const std::string& path);
    void save_file(const std::string& path) const;

    void validate() const;  // throws CheckpointError

    /// Block to process next; nullopt once the range is exhausted.
    std::optional<uint64_t> current() const;
    /// Step one block in the scan direction, clamping at the range edge.
    void advance();

    bool operator==(const ScanCheckpoint&) const = default;
};

/// Where blocks come from: an RPC endpoint or a loaded fixture file.
class BlockSource {
public:
    virtual ~BlockSource() = default;
    virtual RawBlock fetch(uint64_t number) = 0;
    virtual std::string describe() const = 0;
};

class FixtureSource : public BlockSource {
public:
    explicit FixtureSource(const std::string& path) : index_(path), path_(path) {}
    explicit FixtureSource(FixtureIndex index) : index_(std::move(index)), path_("<memory>") {}

    RawBlock fetch(uint64_t number) override;
    std::string describe() const override { return "fixture " + path_; }
    const FixtureIndex& index() const { return index_; }

private:
    FixtureIndex index_;
    std::string path_;
};

class RpcSource : public BlockSource {
public:
    explicit RpcSource(const JsonRpcClient& client) : client_(client) {}

    RawBlock fetch(uint64_t number) override { return client_.fetch_block(number); }
    std::string describe() const override { return "rpc " + client_.config().url; }

private:
    const JsonRpcClient& client_;
};

struct TraversalOptions {
    size_t prefetch = 8;  // bounded in-flight fetches
    bool reset = false;   // discard any existing checkpoint
};

/// Emits every block of [range_start, range_end] exactly once in the given
/// direction, resuming from the checkpoint file when one exists. Fetches run
/// ahead in a bounded window; delivery order is strict.
///
/// next() hands out the next block without touching the checkpoint; commit()
/// marks it processed and persists the cursor, so a consumer that stores its
/// own output before calling commit() never loses or repeats a block.
class Traversal {
public:
    Traversal(BlockSource& source, uint64_t range_start, uint64_t range_end,
              Direction direction, std::string checkpoint_path, TraversalOptions opts = {});

    std::optional<RawBlock> next();
    void commit();

    const ScanCheckpoint& checkpoint() const { return checkpoint_; }

private:
    void fill_window();

    BlockSource& source_;
    ScanCheckpoint checkpoint_;
    std::string checkpoint_path_;
    TraversalOptions opts_;
    ScanCheckpoint fetch_cursor_;  // in-memory cursor ahead of the durable one
    std::deque<std::pair<uint64_t, std::future<RawBlock>>> window_;
    bool delivered_uncommitted_ = false;
};

}  // namespace aascan
