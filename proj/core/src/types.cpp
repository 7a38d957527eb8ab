#include "aascan/types.hpp"

#include "aascan/hex.hpp"

#include <algorithm>
#include <stdexcept>

namespace aascan {

namespace {

template <size_t N>
std::array<uint8_t, N> fixed_from_hex(std::string_view hex, const char* what) {
    auto bytes = hex_to_bytes(hex);
    if (bytes.size() != N)
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(N) +
                                    " bytes, got " + std::to_string(bytes.size()));
    std::array<uint8_t, N> out{};
    std::copy(bytes.begin(), bytes.end(), out.begin());
    return out;
}

}  // namespace

Address Address::from_hex(std::string_view hex) {
    return Address{fixed_from_hex<20>(hex, "address")};
}

std::string Address::to_hex() const { return bytes_to_hex(bytes); }

bool Address::is_zero() const {
    return std::all_of(bytes.begin(), bytes.end(), [](uint8_t b) { return b == 0; });
}

Hash32 Hash32::from_hex(std::string_view hex) {
    return Hash32{fixed_from_hex<32>(hex, "hash")};
}

std::string Hash32::to_hex() const { return bytes_to_hex(bytes); }

std::string render_amount(const TokenAmount& t) {
    if (t.decimals > 36) throw std::invalid_argument("decimals > 36");
    BigInt v = t.raw;
    bool neg = v < 0;
    if (neg) v = -v;
    BigInt scale = pow10(t.decimals);
    BigInt whole = v / scale;
    BigInt frac = v % scale;
    std::string out = whole.str();
    if (frac != 0) {
        std::string f = frac.str();
        f.insert(f.begin(), t.decimals - f.size(), '0');
        while (!f.empty() && f.back() == '0') f.pop_back();
        out += "." + f;
    }
    if (neg && (whole != 0 || frac != 0)) out.insert(out.begin(), '-');
    return out;
}

TokenAmount parse_amount(std::string_view text, uint32_t decimals) {
    if (decimals > 36) throw std::invalid_argument("decimals > 36");
    if (text.empty()) throw std::invalid_argument("empty amount");
    bool neg = text[0] == '-';
    if (text[0] == '-' || text[0] == '+') text.remove_prefix(1);
    auto dot = text.find('.');
    std::string_view whole = dot == std::string_view::npos ? text : text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw std::invalid_argument("empty amount");
    if (frac.size() > decimals)
        throw std::invalid_argument("fraction exceeds token decimals: " + std::string(text));
    auto digits_only = [](std::string_view s) {
        return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    if (!digits_only(whole) || !digits_only(frac))
        throw std::invalid_argument("bad amount: " + std::string(text));
    BigInt raw = whole.empty() ? BigInt(0) : bigint_from_string(whole);
    raw *= pow10(decimals);
    if (!frac.empty())
        raw += bigint_from_string(frac) * pow10(decimals - static_cast<uint32_t>(frac.size()));
    if (neg) raw = -raw;
    return TokenAmount{raw, decimals};
}

}  // namespace aascan
