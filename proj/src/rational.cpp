// Copyright 2026 The tgauss Authors
// SPDX-License-Identifier: Apache-2.0

#include "tgauss/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

namespace tgauss {

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw precondition_error("empty rational literal");

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw precondition_error("zero denominator in '" + text + "'");
    return Rational(num, den);
  }

  // decimal with optional exponent
  bool neg = false;
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
  std::string digits;
  long frac_len = 0;
  bool seen_dot = false, seen_digit = false;
  for (; i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'); ++i) {
    if (s[i] == '.') {
      if (seen_dot) throw precondition_error("bad rational literal '" + text + "'");
      seen_dot = true;
    } else {
      digits.push_back(s[i]);
      seen_digit = true;
      if (seen_dot) ++frac_len;
    }
  }
  if (!seen_digit) throw precondition_error("bad rational literal '" + text + "'");
  long expo = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    expo = std::strtol(s.c_str() + i + 1, nullptr, 10);
    i = s.size();
  }
  if (i != s.size()) throw precondition_error("bad rational literal '" + text + "'");

  BigInt num(digits.empty() ? "0" : digits);
  if (neg) num = -num;
  long e = expo - frac_len;
  BigInt pow10 = 1;
  for (long k = 0; k < std::labs(e); ++k) pow10 *= 10;
  return e >= 0 ? Rational(num * pow10, 1) : Rational(num, pow10);
}

std::string rational_to_decimal(const Rational& q, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << to_double(q);
  return os.str();
}

}  // namespace tgauss
