#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace dadim {

using Rational = mpq_class;

// Parses "p/q", "p" or a plain decimal such as "0.125" into a canonical rational.
Rational parse_rational(std::string_view text);

// Canonical "p/q" (or "p" when the denominator is one).
std::string to_string(const Rational& q);

double to_double(const Rational& q);

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  Rational q(static_cast<long>(num), static_cast<long>(den));
  q.canonicalize();
  return q;
}

// 10^-k as an exact rational.
Rational pow10_neg(int k);

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

}  // namespace dadim
