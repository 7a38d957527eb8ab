#include "aascan/fixture.hpp"

#include "aascan/hex.hpp"

#include <json.hpp>

#include <fstream>

namespace aascan {
namespace {

using nlohmann::json;

json log_to_json(const RawLog& log) {
    json topics = json::array();
    for (const Hash32& t : log.topics) topics.push_back(t.to_hex());
    return json{
        {"address", log.emitter.to_hex()},
        {"topics", std::move(topics)},
        {"data", bytes_to_hex(log.data)},
        {"logIndex", quantity_to_hex(uint64_t(log.log_index))},
    };
}

RawLog log_from_json(const json& l) {
    RawLog log;
    log.emitter = Address::from_hex(l.at("address").get<std::string>());
    for (const json& t : l.at("topics")) {
        log.topics.push_back(Hash32::from_hex(t.get<std::string>()));
    }
    log.data = hex_to_bytes(l.at("data").get<std::string>());
    log.log_index = static_cast<uint32_t>(hex_to_u64(l.at("logIndex").get<std::string>()));
    return log;
}

json tx_to_json(const RawTransaction& tx) {
    json logs = json::array();
    for (const RawLog& log : tx.logs) logs.push_back(log_to_json(log));
    return json{
        {"hash", tx.hash.to_hex()},
        {"transactionIndex", quantity_to_hex(uint64_t(tx.index))},
        {"from", tx.from.to_hex()},
        {"to", tx.to ? json(tx.to->to_hex()) : json(nullptr)},
        {"value", quantity_to_hex(tx.value.raw)},
        {"gasUsed", quantity_to_hex(tx.gas_used)},
        {"effectiveGasPrice", quantity_to_hex(tx.effective_gas_price)},
        {"status", quantity_to_hex(uint64_t(tx.status == TxStatus::Success ? 1 : 0))},
        {"logs", std::move(logs)},
    };
}

RawTransaction tx_from_json(const json& t) {
    RawTransaction tx;
    tx.hash = Hash32::from_hex(t.at("hash").get<std::string>());
    tx.index = static_cast<uint32_t>(hex_to_u64(t.at("transactionIndex").get<std::string>()));
    tx.from = Address::from_hex(t.at("from").get<std::string>());
    if (!t.at("to").is_null()) tx.to = Address::from_hex(t.at("to").get<std::string>());
    tx.value = TokenAmount{hex_to_quantity(t.at("value").get<std::string>()), 18};
    tx.gas_used = hex_to_u64(t.at("gasUsed").get<std::string>());
    tx.effective_gas_price = hex_to_quantity(t.at("effectiveGasPrice").get<std::string>());
    tx.status = hex_to_u64(t.at("status").get<std::string>()) == 0 ? TxStatus::Failure
                                                                   : TxStatus::Success;
    for (const json& l : t.at("logs")) tx.logs.push_back(log_from_json(l));
    return tx;
}

json block_to_json(const RawBlock& block) {
    json txs = json::array();
    for (const RawTransaction& tx : block.transactions) txs.push_back(tx_to_json(tx));
    return json{
        {"number", quantity_to_hex(block.number)},
        {"timestamp", quantity_to_hex(uint64_t(block.timestamp))},
        {"miner", block.coinbase.to_hex()},
        {"transactions", std::move(txs)},
    };
}

RawBlock block_from_json(const json& b) {
    RawBlock block;
    block.number = hex_to_u64(b.at("number").get<std::string>());
    block.timestamp = static_cast<int64_t>(hex_to_u64(b.at("timestamp").get<std::string>()));
    block.coinbase = Address::from_hex(b.at("miner").get<std::string>());
    for (const json& t : b.at("transactions")) {
        block.transactions.push_back(tx_from_json(t));
    }
    return block;
}

}  // namespace

std::string block_to_line(const RawBlock& block) {
    return block_to_json(block).dump();
}

RawBlock block_from_line(const std::string& line, size_t line_no) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw FixtureError(std::string("unparseable block record: ") + e.what(), line_no);
    }
    try {
        return block_from_json(j);
    } catch (const json::exception& e) {
        throw FixtureError(std::string("bad block record: ") + e.what(), line_no);
    } catch (const std::invalid_argument& e) {
        throw FixtureError(std::string("bad block record: ") + e.what(), line_no);
    }
}

void store_fixture(const std::vector<RawBlock>& blocks, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw FixtureError("cannot open for writing: " + path);
    for (const RawBlock& block : blocks) {
        out << block_to_line(block) << '\n';
    }
    out.flush();
    if (!out) throw FixtureError("write failed: " + path);
}

std::vector<RawBlock> load_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FixtureError("cannot open: " + path);

    std::vector<RawBlock> blocks;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        blocks.push_back(block_from_line(line, line_no));
        const size_t n = blocks.size();
        if (n >= 2) {
            const uint64_t prev = blocks[n - 2].number;
            const uint64_t cur = blocks[n - 1].number;
            const bool ascending = blocks[1].number > blocks[0].number;
            if (cur == prev || (cur > prev) != ascending) {
                throw FixtureError("block numbers not strictly monotone (" +
                                       std::to_string(prev) + " then " + std::to_string(cur) +
                                       ")",
                                   line_no);
            }
        }
    }
    return blocks;
}

FixtureIndex::FixtureIndex(const std::string& path) : FixtureIndex(load_fixture(path)) {}

FixtureIndex::FixtureIndex(std::vector<RawBlock> blocks) {
    for (RawBlock& b : blocks) {
        const uint64_t number = b.number;
        blocks_[number] = std::move(b);
    }
}

std::optional<RawBlock> FixtureIndex::get(uint64_t number) const {
    auto it = blocks_.find(number);
    if (it == blocks_.end()) return std::nullopt;
    return it->second;
}

uint64_t FixtureIndex::min_block() const {
    if (blocks_.empty()) throw FixtureError("fixture is empty");
    return blocks_.begin()->first;
}

uint64_t FixtureIndex::max_block() const {
    if (blocks_.empty()) throw FixtureError("fixture is empty");
    return blocks_.rbegin()->first;
}

}  // namespace aascan
