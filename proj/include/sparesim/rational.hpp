#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace sparesim {

// Exact integer/rational arithmetic for the combinatorial fractions.
// Counts such as C(66,6) exceed 32-bit and products of binomials grow
// past 64-bit, so everything stays arbitrary precision.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt binomial(std::int64_t n, std::int64_t k);

double to_double(const Rational& r);

// Decimal expansion with the given number of significant digits,
// e.g. decimal_string(110/120, 12) == "0.916666666667".
std::string decimal_string(const Rational& r, int significant_digits);

}  // namespace sparesim
