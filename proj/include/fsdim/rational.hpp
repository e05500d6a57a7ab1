#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace fsdim {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Accepts "3/4", "-7", and decimal forms like "0.25" or "2.5e-3", all parsed
// exactly (decimals become num/10^e).
Rational parse_rational(const std::string& text);

// "num/den", or plain "num" when the denominator is 1.
std::string format_rational(const Rational& r);

// x^e for integer e (negative e inverts; x must be nonzero then).
Rational pow_rational(const Rational& x, int64_t e);

// Exact x^(num/den) for x > 0; empty unless both parts of x are perfect
// den-th powers.
std::optional<Rational> pow_rational_exact(const Rational& x, int64_t num,
                                           int64_t den);

// Smallest integer e with x <= 2^e, for x > 0.
int64_t ceil_log2(const Rational& x);

// ceil(log2(1/p)) for p > 0, the idealized codeword length of mass p.
int64_t ceil_log2_inverse(const Rational& p);

// log2 of a positive rational of any magnitude.
double log2_rational(const Rational& r);

double rational_to_double(const Rational& r);

// Largest r >= 0 with r^n <= x, for x >= 0 and n >= 1.
BigInt iroot(const BigInt& x, uint64_t n);

}  // namespace fsdim
