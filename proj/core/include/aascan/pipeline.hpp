#pragma once

#include "aascan/classify.hpp"
#include "aascan/decode.hpp"
#include "aascan/rpc.hpp"
#include "aascan/scan.hpp"

#include <atomic>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace aascan {

/// Decode + classify every transaction of one block, in transaction order.
std::vector<Classification> classify_block(const RawBlock& block, PoolRegistry& registry,
                                           const PoolRegistry::Resolver& resolver,
                                           const ClassifierConfig& cfg);

/// Pool-metadata resolver backed by eth_call: token0()/token1()/decimals()
/// for pair pools at the given block height. Balancer pools are not
/// resolvable this way (their metadata must be preloaded) and yield nullopt,
/// as does any pool whose probe calls revert.
PoolRegistry::Resolver make_chain_resolver(const JsonRpcClient& client, uint64_t block);

struct ScanOptions {
    uint64_t from_block = 0;
    uint64_t to_block = 0;
    Direction direction = Direction::Forward;
    std::string checkpoint_path;  // empty disables checkpointing
    size_t prefetch = 8;
    bool reset_checkpoint = false;
    std::optional<uint64_t> stop_after_blocks;  // deliberate partial run
};

struct ScanResult {
    uint64_t blocks_processed = 0;
    uint64_t lines_written = 0;
    bool complete = false;  // range fully traversed
};

/// Range scan: traverse -> decode -> classify -> one JSON line per
/// transaction on `out`. Each block's lines are flushed before its
/// checkpoint commits, so a resumed scan continues exactly after the last
/// fully written block. `stop` is checked between blocks (signal handlers
/// set it); a stopped scan returns complete=false with the checkpoint
/// pointing at the next unprocessed block.
ScanResult run_scan(BlockSource& source, PoolRegistry& registry,
                    const PoolRegistry::Resolver& resolver, const ClassifierConfig& cfg,
                    const ScanOptions& opts, std::ostream& out,
                    const std::atomic<bool>* stop = nullptr);

/// Classifications from a JSON-lines file; errors name the offending line.
std::vector<Classification> load_classifications(const std::string& path);

}  // namespace aascan
