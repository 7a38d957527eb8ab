#include "aascan/rpc.hpp"

#include "aascan/hex.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <map>
#include <thread>

namespace aascan {
namespace {

using nlohmann::json;

// Thrown internally when the endpoint lacks a method; drives the batch-vs-
// per-transaction receipts fallback and never leaves this translation unit.
struct MethodNotSupported {
    std::string method;
};

json make_request(const std::string& method, json params) {
    return json{
        {"jsonrpc", "2.0"},
        {"id", 1},
        {"method", method},
        {"params", std::move(params)},
    };
}

json parse_response(const std::string& body, const std::string& method) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::exception& e) {
        throw RpcDecodeError("malformed JSON-RPC response for " + method + ": " + e.what());
    }
    if (j.contains("error") && !j["error"].is_null()) {
        const json& err = j["error"];
        const int64_t code = err.value("code", int64_t(0));
        const std::string message = err.value("message", std::string("unknown error"));
        if (code == -32601 || code == -32602) throw MethodNotSupported{method};
        if (method == "eth_call") throw RevertError(method + " reverted: " + message);
        if (message.find("not found") != std::string::npos) {
            throw NotFoundError(method + ": " + message);
        }
        throw RpcDecodeError(method + " failed: endpoint error " + std::to_string(code) +
                             " " + message);
    }
    if (!j.contains("result")) {
        throw RpcDecodeError(method + ": response has no result");
    }
    return j["result"];
}

Hash32 hash_field(const json& obj, const char* key) {
    return Hash32::from_hex(obj.at(key).get<std::string>());
}

Address address_field(const json& obj, const char* key) {
    return Address::from_hex(obj.at(key).get<std::string>());
}

uint64_t u64_field(const json& obj, const char* key) {
    return hex_to_u64(obj.at(key).get<std::string>());
}

RawLog parse_log(const json& l) {
    RawLog log;
    log.emitter = address_field(l, "address");
    for (const json& t : l.at("topics")) {
        log.topics.push_back(Hash32::from_hex(t.get<std::string>()));
    }
    log.data = hex_to_bytes(l.at("data").get<std::string>());
    log.log_index = static_cast<uint32_t>(u64_field(l, "logIndex"));
    return log;
}

void merge_receipt(RawTransaction& tx, const json& r) {
    tx.gas_used = u64_field(r, "gasUsed");
    tx.effective_gas_price = hex_to_quantity(r.at("effectiveGasPrice").get<std::string>());
    tx.status = u64_field(r, "status") == 0 ? TxStatus::Failure : TxStatus::Success;
    for (const json& l : r.at("logs")) tx.logs.push_back(parse_log(l));
}

RawBlock parse_block_header(const json& b) {
    RawBlock block;
    block.number = u64_field(b, "number");
    block.timestamp = static_cast<int64_t>(u64_field(b, "timestamp"));
    block.coinbase = address_field(b, "miner");
    for (const json& t : b.at("transactions")) {
        if (!t.is_object()) {
            throw RpcDecodeError("block " + std::to_string(block.number) +
                                 " came without full transaction objects");
        }
        RawTransaction tx;
        tx.hash = hash_field(t, "hash");
        tx.index = static_cast<uint32_t>(u64_field(t, "transactionIndex"));
        tx.from = address_field(t, "from");
        if (t.contains("to") && !t["to"].is_null()) {
            tx.to = Address::from_hex(t["to"].get<std::string>());
        }
        tx.value = TokenAmount{hex_to_quantity(t.at("value").get<std::string>()), 18};
        block.transactions.push_back(std::move(tx));
    }
    return block;
}

}  // namespace

void EndpointConfig::validate() const {
    if (url.empty()) throw std::invalid_argument("endpoint url is empty");
    if (!url.starts_with("http://") && !url.starts_with("https://")) {
        throw std::invalid_argument("endpoint url must be http(s): " + url);
    }
    if (timeout_seconds <= 0) throw std::invalid_argument("timeout must be positive");
    if (max_attempts <= 0) throw std::invalid_argument("max_attempts must be positive");
    if (confirmation_depth < 0) throw std::invalid_argument("confirmation_depth must be >= 0");
}

JsonRpcClient::JsonRpcClient(EndpointConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    const size_t scheme_end = cfg_.url.find("://") + 3;
    const size_t path_start = cfg_.url.find('/', scheme_end);
    if (path_start == std::string::npos) {
        host_ = cfg_.url;
        path_ = "/";
    } else {
        host_ = cfg_.url.substr(0, path_start);
        path_ = cfg_.url.substr(path_start);
    }
}

std::string JsonRpcClient::rpc_raw(const std::string& body) const {
    std::string last_error;
    for (int attempt = 0; attempt < cfg_.max_attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(100) * (1 << (attempt - 1)));
        }
        httplib::Client client(host_);
        client.set_connection_timeout(cfg_.timeout_seconds);
        client.set_read_timeout(cfg_.timeout_seconds);
        httplib::Headers headers;
        if (!cfg_.auth_header.empty()) headers.emplace("Authorization", cfg_.auth_header);

        auto res = client.Post(path_, headers, body, "application/json");
        if (!res) {
            last_error = "connection failed: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP status " + std::to_string(res->status);
            continue;
        }
        return res->body;
    }
    throw TransportError("endpoint " + host_ + " unreachable after " +
                         std::to_string(cfg_.max_attempts) + " attempts: " + last_error);
}

uint64_t JsonRpcClient::head() const {
    const json req = make_request("eth_blockNumber", json::array());
    try {
        const json result = parse_response(rpc_raw(req.dump()), "eth_blockNumber");
        return hex_to_u64(result.get<std::string>());
    } catch (const MethodNotSupported& m) {
        throw RpcDecodeError("endpoint does not support " + m.method);
    }
}

RawBlock JsonRpcClient::fetch_block(uint64_t number) const {
    const std::string tag = quantity_to_hex(number);

    const json block_req = make_request("eth_getBlockByNumber", json::array({tag, true}));
    json block_json;
    try {
        block_json = parse_response(rpc_raw(block_req.dump()), "eth_getBlockByNumber");
    } catch (const MethodNotSupported& m) {
        throw RpcDecodeError("endpoint does not support " + m.method);
    }
    if (block_json.is_null()) {
        throw NotFoundError("block " + std::to_string(number) + " not found");
    }
    RawBlock block;
    try {
        block = parse_block_header(block_json);
    } catch (const json::exception& e) {
        throw RpcDecodeError("malformed block " + std::to_string(number) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw RpcDecodeError("malformed block " + std::to_string(number) + ": " + e.what());
    }
    if (block.transactions.empty()) return block;

    std::map<Hash32, json> receipts;
    ReceiptsSupport support = receipts_support_.load();
    if (support != ReceiptsSupport::PerTx) {
        const json req = make_request("eth_getBlockReceipts", json::array({tag}));
        try {
            const json result = parse_response(rpc_raw(req.dump()), "eth_getBlockReceipts");
            if (result.is_null()) {
                throw NotFoundError("receipts for block " + std::to_string(number) +
                                    " not found");
            }
            for (const json& r : result) {
                receipts[hash_field(r, "transactionHash")] = r;
            }
            receipts_support_.store(ReceiptsSupport::Batch);
            support = ReceiptsSupport::Batch;
        } catch (const MethodNotSupported&) {
            receipts_support_.store(ReceiptsSupport::PerTx);
            support = ReceiptsSupport::PerTx;
        }
    }
    if (support == ReceiptsSupport::PerTx) {
        for (const RawTransaction& tx : block.transactions) {
            const json req =
                make_request("eth_getTransactionReceipt", json::array({tx.hash.to_hex()}));
            json r;
            try {
                r = parse_response(rpc_raw(req.dump()), "eth_getTransactionReceipt");
            } catch (const MethodNotSupported& m) {
                throw RpcDecodeError("endpoint does not support " + m.method);
            }
            if (r.is_null()) {
                throw NotFoundError("receipt for " + tx.hash.to_hex() + " not found");
            }
            const Hash32 receipt_hash = hash_field(r, "transactionHash");
            receipts[receipt_hash] = std::move(r);
        }
    }

    try {
        for (RawTransaction& tx : block.transactions) {
            auto it = receipts.find(tx.hash);
            if (it == receipts.end()) {
                throw RpcDecodeError("no receipt for transaction " + tx.hash.to_hex() +
                                     " in block " + std::to_string(number));
            }
            merge_receipt(tx, it->second);
        }
    } catch (const json::exception& e) {
        throw RpcDecodeError("malformed receipt in block " + std::to_string(number) + ": " +
                             e.what());
    } catch (const std::invalid_argument& e) {
        throw RpcDecodeError("malformed receipt in block " + std::to_string(number) + ": " +
                             e.what());
    }
    return block;
}

std::vector<uint8_t> JsonRpcClient::call_contract(const Address& to,
                                                  std::span<const uint8_t> calldata,
                                                  uint64_t block) const {
    const json req = make_request(
        "eth_call", json::array({json{{"to", to.to_hex()}, {"data", bytes_to_hex(calldata)}},
                                 quantity_to_hex(block)}));
    try {
        const json result = parse_response(rpc_raw(req.dump()), "eth_call");
        return hex_to_bytes(result.get<std::string>());
    } catch (const MethodNotSupported& m) {
        throw RpcDecodeError("endpoint does not support " + m.method);
    }
}

}  // namespace aascan
