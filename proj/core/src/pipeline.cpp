#include "aascan/pipeline.hpp"

#include "aascan/abi.hpp"

#include <fstream>

namespace aascan {
namespace {

std::optional<Address> call_for_address(const JsonRpcClient& client, const Address& pool,
                                        const char* signature, uint64_t block) {
    try {
        const auto ret = client.call_contract(pool, abi::selector(signature), block);
        if (ret.size() != abi::kWord) return std::nullopt;
        return abi::read_address(ret, 0);
    } catch (const RevertError&) {
        return std::nullopt;
    }
}

std::optional<uint32_t> call_for_decimals(const JsonRpcClient& client, const Address& token,
                                          uint64_t block) {
    try {
        const auto ret = client.call_contract(token, abi::selector("decimals()"), block);
        if (ret.size() != abi::kWord) return std::nullopt;
        const BigInt v = abi::read_uint(ret, 0);
        if (v > 255) return std::nullopt;
        return uint32_t(v);
    } catch (const RevertError&) {
        return std::nullopt;
    }
}

}  // namespace

std::vector<Classification> classify_block(const RawBlock& block, PoolRegistry& registry,
                                           const PoolRegistry::Resolver& resolver,
                                           const ClassifierConfig& cfg) {
    std::vector<Classification> out;
    out.reserve(block.transactions.size());
    for (const RawTransaction& tx : block.transactions) {
        const DecodedTx decoded = decode_transaction(tx, registry, resolver);
        Classification c = evaluate(tx, block, decoded.swaps, cfg);
        if (!decoded.skipped.empty() && !c.diagnostic) {
            c.diagnostic = "skipped " + std::to_string(decoded.skipped.size()) +
                           " undecodable swap candidate(s): " + decoded.skipped.front().reason;
        }
        out.push_back(std::move(c));
    }
    return out;
}

PoolRegistry::Resolver make_chain_resolver(const JsonRpcClient& client, uint64_t block) {
    return [&client, block](const Address& pool, Protocol hint) -> std::optional<PoolMeta> {
        if (hint == Protocol::BalancerV2) return std::nullopt;

        const auto token0 = call_for_address(client, pool, "token0()", block);
        const auto token1 = call_for_address(client, pool, "token1()", block);
        if (!token0 || !token1 || *token0 == *token1) return std::nullopt;

        PoolMeta meta;
        meta.pool = pool;
        meta.protocol = hint;
        meta.tokens = {*token0, *token1};
        meta.decimals = {call_for_decimals(client, *token0, block).value_or(18),
                         call_for_decimals(client, *token1, block).value_or(18)};
        return meta;
    };
}

ScanResult run_scan(BlockSource& source, PoolRegistry& registry,
                    const PoolRegistry::Resolver& resolver, const ClassifierConfig& cfg,
                    const ScanOptions& opts, std::ostream& out,
                    const std::atomic<bool>* stop) {
    Traversal traversal(source, opts.from_block, opts.to_block, opts.direction,
                        opts.checkpoint_path,
                        TraversalOptions{opts.prefetch, opts.reset_checkpoint});

    ScanResult result;
    for (;;) {
        if (stop && stop->load()) return result;
        if (opts.stop_after_blocks && result.blocks_processed >= *opts.stop_after_blocks) {
            return result;
        }

        const auto block = traversal.next();
        if (!block) break;

        std::string buffer;
        for (Classification& c : classify_block(*block, registry, resolver, cfg)) {
            buffer += classification_to_json_line(c);
            buffer += '\n';
            ++result.lines_written;
        }
        out << buffer;
        out.flush();
        if (!out) throw std::runtime_error("classification output write failed");

        traversal.commit();
        ++result.blocks_processed;
    }
    result.complete = true;
    return result;
}

std::vector<Classification> load_classifications(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open classifications: " + path);

    std::vector<Classification> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(classification_from_json_line(line));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + " line " + std::to_string(line_no) + ": " +
                                     e.what());
        }
    }
    return out;
}

}  // namespace aascan
