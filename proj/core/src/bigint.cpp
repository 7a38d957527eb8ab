#include "aascan/bigint.hpp"

#include <stdexcept>

namespace aascan {

BigInt pow10(uint32_t exp) {
    BigInt r = 1;
    for (uint32_t i = 0; i < exp; ++i) r *= 10;
    return r;
}

BigInt bigint_from_string(std::string_view s) {
    const std::string_view original = s;
    if (s.empty()) throw std::invalid_argument("empty integer");
    const bool neg = s[0] == '-';
    if (s[0] == '-' || s[0] == '+') s.remove_prefix(1);
    if (s.empty()) throw std::invalid_argument("sign without digits: " + std::string(original));
    BigInt v = 0;
    for (char c : s) {
        if (c < '0' || c > '9')
            throw std::invalid_argument("bad integer: " + std::string(original));
        v = v * 10 + (c - '0');
    }
    return neg ? -v : v;
}

std::string rational_to_string(const Rational& r) {
    std::string num = numerator(r).str();
    if (denominator(r) == 1) return num;
    return num + "/" + denominator(r).str();
}

Rational rational_from_string(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty rational");
    auto slash = s.find('/');
    if (slash != std::string_view::npos) {
        BigInt num = bigint_from_string(s.substr(0, slash));
        BigInt den = bigint_from_string(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator: " + std::string(s));
        return Rational(num, den);
    }
    auto dot = s.find('.');
    if (dot == std::string_view::npos) return Rational(bigint_from_string(s));
    // decimal form: sign handled by the integer part, fraction appended
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if (frac_part.empty()) throw std::invalid_argument("trailing dot: " + std::string(s));
    for (char c : frac_part)
        if (c < '0' || c > '9') throw std::invalid_argument("bad decimal: " + std::string(s));
    bool neg = !int_part.empty() && int_part[0] == '-';
    if (!int_part.empty() && (int_part[0] == '-' || int_part[0] == '+')) {
        int_part.remove_prefix(1);
    }
    for (char c : int_part)
        if (c < '0' || c > '9') throw std::invalid_argument("bad decimal: " + std::string(s));
    std::string digits(int_part);
    digits.append(frac_part);
    if (digits.empty()) throw std::invalid_argument("bad decimal: " + std::string(s));
    BigInt scaled = bigint_from_string(digits);
    if (neg) scaled = -scaled;
    return Rational(scaled, pow10(static_cast<uint32_t>(frac_part.size())));
}

std::string rational_to_decimal(const Rational& r, uint32_t max_frac_digits) {
    BigInt num = numerator(r);
    BigInt den = denominator(r);
    bool neg = num < 0;
    if (neg) num = -num;
    BigInt whole = num / den;
    BigInt rem = num % den;
    std::string out = whole.str();
    if (rem != 0 && max_frac_digits > 0) {
        std::string frac;
        frac.reserve(max_frac_digits);
        for (uint32_t i = 0; i < max_frac_digits && rem != 0; ++i) {
            rem *= 10;
            frac.push_back(static_cast<char>('0' + static_cast<int>(BigInt(rem / den))));
            rem %= den;
        }
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        if (!frac.empty()) out += "." + frac;
    }
    if (neg && out != "0") out.insert(out.begin(), '-');
    return out;
}

}  // namespace aascan
