#pragma once

#include "aascan/types.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace aascan {

class FixtureError : public std::runtime_error {
public:
    FixtureError(const std::string& what, size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    size_t line() const { return line_; }

private:
    size_t line_;
};

/// Canonical single-line JSON for one block: RPC-style field names, all
/// quantities 0x-hex, object keys sorted. Identical blocks always serialize
/// to identical bytes.
std::string block_to_line(const RawBlock& block);
RawBlock block_from_line(const std::string& line, size_t line_no = 0);

/// JSON-lines fixture: one block per line, numbers strictly monotone.
void store_fixture(const std::vector<RawBlock>& blocks, const std::string& path);
std::vector<RawBlock> load_fixture(const std::string& path);

/// Random access over a loaded fixture, keyed by block number.
class FixtureIndex {
public:
    explicit FixtureIndex(const std::string& path);
    explicit FixtureIndex(std::vector<RawBlock> blocks);

    std::optional<RawBlock> get(uint64_t number) const;
    size_t size() const { return blocks_.size(); }
    uint64_t min_block() const;  // throws FixtureError when empty
    uint64_t max_block() const;

private:
    std::map<uint64_t, RawBlock> blocks_;
};

}  // namespace aascan
