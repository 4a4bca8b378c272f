#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace subalip {

// mpq_class canonicalizes after every arithmetic operation, so the
// lowest-terms / positive-denominator invariant holds for free.
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(long num, long den = 1);

// Exact conversion; every finite double is a dyadic rational.
Rational from_double(double d);
double to_double(const Rational& q);

// Parses "3", "-3/4", "0.125".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

int sign(const Rational& q);
Rational abs(const Rational& q);
Rational floor_rational(const Rational& q);
Rational ceil_rational(const Rational& q);

// A rational of small height strictly inside (lo, hi). Requires lo < hi.
Rational simplest_between(const Rational& lo, const Rational& hi);

}  // namespace subalip
