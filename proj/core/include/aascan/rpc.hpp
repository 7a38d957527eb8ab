#pragma once

#include "aascan/types.hpp"

#include <atomic>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aascan {

struct EndpointConfig {
    std::string url;          // http(s)://host[:port][/path]
    std::string auth_header;  // optional Authorization value, redacted in dumps
    int timeout_seconds = 30;
    int max_attempts = 5;  // transport retries, exponential backoff
    int confirmation_depth = 256;

    void validate() const;  // throws std::invalid_argument
};

class RpcError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// Network-level failure (connect, timeout, HTTP error). Retryable.
class TransportError : public RpcError {
    using RpcError::RpcError;
};
/// Structurally malformed response. Never retried.
class RpcDecodeError : public RpcError {
    using RpcError::RpcError;
};
/// Block beyond head or otherwise absent.
class NotFoundError : public RpcError {
    using RpcError::RpcError;
};
/// eth_call reverted; carries the endpoint's message.
class RevertError : public RpcError {
    using RpcError::RpcError;
};

/// Blocking JSON-RPC client over HTTP. Each call opens its own connection,
/// so one client may be shared across threads. Transport errors are retried
/// with exponential backoff up to cfg.max_attempts; decode errors never are.
class JsonRpcClient {
public:
    explicit JsonRpcClient(EndpointConfig cfg);

    uint64_t head() const;  // eth_blockNumber

    /// Block with full transactions, merged with receipt data (status,
    /// gas_used, effective_gas_price, logs) for every transaction. Uses the
    /// batch receipts method when the endpoint supports it (probed on first
    /// use), else one receipt call per transaction.
    RawBlock fetch_block(uint64_t number) const;

    /// Read-only eth_call at a block height; returns raw return data.
    std::vector<uint8_t> call_contract(const Address& to, std::span<const uint8_t> calldata,
                                       uint64_t block) const;

    const EndpointConfig& config() const { return cfg_; }

private:
    enum class ReceiptsSupport { Unknown, Batch, PerTx };

    std::string rpc_raw(const std::string& body) const;

    EndpointConfig cfg_;
    std::string host_;  // scheme://host:port
    std::string path_;  // request path, default "/"
    mutable std::atomic<ReceiptsSupport> receipts_support_{ReceiptsSupport::Unknown};
};

}  // namespace aascan
