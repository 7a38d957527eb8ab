#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace aascan {

// All token quantities are arbitrary-precision signed integers in raw units;
// prices/fees/profits are exact rationals. Nothing in the accounting path
// touches floating point.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt pow10(uint32_t exp);

// Strict base-10 parse: optional sign then digits only. Leading zeros are
// plain decimal (never an octal prefix); anything else throws
// std::invalid_argument.
BigInt bigint_from_string(std::string_view s);

// Canonical text form: "p" when the denominator is 1, else "p/q" in lowest
// terms. from_string additionally accepts plain decimals ("0.13", "-2.5")
// as found in config files.
std::string rational_to_string(const Rational& r);
Rational rational_from_string(std::string_view s);

// Exact decimal rendering when the expansion terminates within max_frac_digits,
// otherwise truncated toward zero at that many digits. Trailing zeros trimmed.
std::string rational_to_decimal(const Rational& r, uint32_t max_frac_digits = 18);

}  // namespace aascan
