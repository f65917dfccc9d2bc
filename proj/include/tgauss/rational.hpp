// Copyright 2026 The tgauss Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

#include "tgauss/errors.hpp"

namespace tgauss {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Integer square root test: returns r with r*r == v when v is a perfect
/// square, nullopt otherwise.
inline std::optional<BigInt> perfect_sqrt(const BigInt& v) {
  if (v < 0) return std::nullopt;
  BigInt r = boost::multiprecision::sqrt(v);
  if (r * r == v) return r;
  return std::nullopt;
}

/// Exact square root of a nonnegative rational, when it exists in Q.
inline std::optional<Rational> rational_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  auto n = perfect_sqrt(numerator(q));
  if (!n) return std::nullopt;
  auto d = perfect_sqrt(denominator(q));
  if (!d) return std::nullopt;
  return Rational(*n, *d);
}

/// Parses "p/q", "p", or a plain decimal such as "0.4" / "-1.25e2" into an
/// exact rational. Decimals are read digit-exactly (0.4 -> 2/5).
Rational parse_rational(const std::string& text);

/// Decimal rendering with enough digits for round-trip display (not used for
/// exact IO; JSON carries num/den alongside).
std::string rational_to_decimal(const Rational& q, int digits = 17);

}  // namespace tgauss
