#pragma once

#include "aascan/bigint.hpp"
#include "aascan/types.hpp"

#include <map>

namespace aascan {

/// Signed net token flows of one transaction, token -> raw units.
/// Canonical form: zero-valued entries are never stored, so equality is
/// structural.
class DeltaVector {
public:
    DeltaVector() = default;

    void add(const Address& token, const BigInt& amount) {
        if (amount == 0) return;
        auto [it, inserted] = entries_.try_emplace(token, amount);
        if (!inserted) {
            it->second += amount;
            if (it->second == 0) entries_.erase(it);
        }
    }

    DeltaVector& operator+=(const DeltaVector& other) {
        for (const auto& [token, amount] : other.entries_) add(token, amount);
        return *this;
    }

    const std::map<Address, BigInt>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    size_t size() const { return entries_.size(); }

    bool operator==(const DeltaVector&) const = default;

private:
    std::map<Address, BigInt> entries_;
};

inline DeltaVector delta_add(const DeltaVector& a, const DeltaVector& b) {
    DeltaVector out = a;
    out += b;
    return out;
}

}  // namespace aascan
