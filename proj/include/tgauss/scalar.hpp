// Copyright 2026 The tgauss Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <optional>
#include <ostream>
#include <string>

#include "tgauss/rational.hpp"

namespace tgauss {

/// Element a + b*sqrt(t) of the quadratic extension Q(sqrt t), t a fixed
/// positive rational. Every matrix entry, vacuum moment and polynomial
/// coefficient in exact mode lives here. sqrt(t) is treated as a formal
/// symbol with (sqrt t)^2 = t; values created as plain rationals carry no t
/// and adopt the other operand's on first contact.
class Exact {
 public:
  Exact() : a_(0), b_(0), t_(0), has_t_(false) {}
  Exact(int v) : a_(v), b_(0), t_(0), has_t_(false) {}          // NOLINT
  Exact(const Rational& v) : a_(v), b_(0), t_(0), has_t_(false) {}  // NOLINT

  static Exact with_t(Rational a, Rational b, Rational t) {
    if (t <= 0) throw precondition_error("Exact: t must be positive");
    Exact e;
    e.a_ = std::move(a);
    e.b_ = std::move(b);
    e.t_ = std::move(t);
    e.has_t_ = true;
    if (auto r = rational_sqrt(e.t_)) e.fold_ = *r;
    e.normalize();
    return e;
  }
  static Exact sqrt_t(const Rational& t) { return with_t(0, 1, t); }

  const Rational& rational_part() const { return a_; }
  const Rational& sqrt_part() const { return b_; }
  bool is_rational() const { return b_ == 0; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool has_context() const { return has_t_; }
  const Rational& context_t() const {
    if (!has_t_) throw precondition_error("Exact: no sqrt(t) context attached");
    return t_;
  }

  double to_double() const {
    double v = tgauss::to_double(a_);
    if (b_ != 0) v += tgauss::to_double(b_) * std::sqrt(tgauss::to_double(t_));
    return v;
  }

  /// Sign of the real number a + b*sqrt(t): -1, 0 or +1, decided exactly.
  int sign() const {
    auto sgn = [](const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); };
    if (b_ == 0) return sgn(a_);
    if (a_ == 0) return sgn(b_);
    if ((a_ > 0) == (b_ > 0)) return sgn(a_);
    // opposite signs: compare a^2 against b^2 t
    const Rational lhs = a_ * a_, rhs = b_ * b_ * t_;
    if (lhs == rhs) return 0;
    const bool a_dominates = lhs > rhs;
    return a_dominates ? sgn(a_) : sgn(b_);
  }

  Exact operator-() const {
    Exact r = *this;
    r.a_ = -r.a_;
    r.b_ = -r.b_;
    return r;
  }

  friend Exact operator+(const Exact& x, const Exact& y) {
    Exact r = merged(x, y);
    r.a_ = x.a_ + y.a_;
    r.b_ = x.b_ + y.b_;
    r.normalize();
    return r;
  }
  friend Exact operator-(const Exact& x, const Exact& y) { return x + (-y); }
  friend Exact operator*(const Exact& x, const Exact& y) {
    Exact r = merged(x, y);
    if (x.is_zero() || y.is_zero()) return r;  // r is zero with merged context
    if (x.b_ != 0 && y.b_ != 0 && !r.has_t_)
      throw precondition_error("Exact: sqrt(t)*sqrt(t) without a t context");
    r.a_ = x.a_ * y.a_;
    if (x.b_ != 0 && y.b_ != 0) r.a_ += x.b_ * y.b_ * r.t_;
    r.b_ = x.a_ * y.b_ + x.b_ * y.a_;
    r.normalize();
    return r;
  }
  friend Exact operator/(const Exact& x, const Exact& y) {
    if (y.is_zero()) throw precondition_error("Exact: division by zero");
    if (y.b_ == 0) {
      Exact r = merged(x, y);
      r.a_ = x.a_ / y.a_;
      r.b_ = x.b_ / y.a_;
      return r;
    }
    // divisor has an irrational part (normalize folded square ts): multiply
    // by the conjugate; its norm a^2 - b^2 t is then nonzero
    Exact conj = y;
    conj.b_ = -conj.b_;
    const Rational norm = y.a_ * y.a_ - y.b_ * y.b_ * y.t_;
    Exact num = x * conj;
    num.a_ /= norm;
    num.b_ /= norm;
    return num;
  }

  Exact& operator+=(const Exact& y) { return *this = *this + y; }
  Exact& operator-=(const Exact& y) { return *this = *this - y; }
  Exact& operator*=(const Exact& y) { return *this = *this * y; }
  Exact& operator/=(const Exact& y) { return *this = *this / y; }

  friend bool operator==(const Exact& x, const Exact& y) {
    if (x.b_ == 0 && y.b_ == 0) return x.a_ == y.a_;
    // a live sqrt part is irrational after normalization
    if (x.b_ == 0 || y.b_ == 0) return false;
    if (x.t_ != y.t_)
      throw precondition_error("Exact: comparing sqrt parts over different t");
    return x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend bool operator!=(const Exact& x, const Exact& y) { return !(x == y); }

  /// Square root within the field, when representable: covers rational
  /// squares, t * (rational square), and the generic (x + y sqrt t)^2 case.
  std::optional<Exact> sqrt_in_field() const {
    if (sign() < 0) return std::nullopt;
    if (b_ == 0) {
      if (auto r = rational_sqrt(a_)) {
        Exact e = *this;
        e.a_ = *r;
        return e;
      }
      if (has_t_) {
        if (auto r = rational_sqrt(a_ / t_)) return with_t(0, *r, t_);
      }
      return std::nullopt;
    }
    const Rational disc = a_ * a_ - b_ * b_ * t_;
    auto s = rational_sqrt(disc);
    if (!s) return std::nullopt;
    for (int pick : {+1, -1}) {
      const Rational x2 = (a_ + (pick > 0 ? *s : -*s)) / 2;
      auto x = rational_sqrt(x2);
      if (!x || *x == 0) continue;
      Rational y = b_ / (2 * *x);
      Exact cand = with_t(*x, y, t_);
      if (cand.sign() >= 0 && cand * cand == *this) return cand;
      cand = -cand;
      if (cand.sign() >= 0 && cand * cand == *this) return cand;
    }
    return std::nullopt;
  }

  std::string to_string() const {
    std::string s = numerator(a_).str();
    if (denominator(a_) != 1) s += "/" + denominator(a_).str();
    if (b_ != 0) {
      s += (b_ > 0 ? " + " : " - ");
      Rational ab = b_ > 0 ? b_ : Rational(-b_);
      s += numerator(ab).str();
      if (denominator(ab) != 1) s += "/" + denominator(ab).str();
      s += "*sqrt(" + numerator(t_).str();
      if (denominator(t_) != 1) s += "/" + denominator(t_).str();
      s += ")";
    }
    return s;
  }

  friend std::ostream& operator<<(std::ostream& os, const Exact& e) {
    return os << e.to_string();
  }

 private:
  /// Context for the result of a binary operation. Values whose sqrt part is
  /// zero are plain rationals and combine with anything; two live sqrt parts
  /// must share the same t.
  static Exact merged(const Exact& x, const Exact& y) {
    Exact r;
    if (x.has_t_ && y.has_t_ && x.t_ != y.t_) {
      if (x.b_ != 0 && y.b_ != 0)
        throw precondition_error("Exact: mixing sqrt parts over different t");
      const Exact& live = (x.b_ != 0) ? x : y;
      r.has_t_ = true;
      r.t_ = live.t_;
      r.fold_ = live.fold_;
      return r;
    }
    r.has_t_ = x.has_t_ || y.has_t_;
    r.t_ = x.has_t_ ? x.t_ : y.t_;
    r.fold_ = x.has_t_ ? x.fold_ : y.fold_;
    return r;
  }

  /// Canonical form: when t is a perfect rational square, sqrt(t) is the
  /// rational fold_ and the sqrt part collapses into the rational part.
  void normalize() {
    if (b_ != 0 && fold_) {
      a_ += b_ * *fold_;
      b_ = 0;
    }
  }

  Rational a_, b_, t_;
  bool has_t_;
  std::optional<Rational> fold_;  // sqrt(t) when rational
};

template <class S>
S pow_int(const S& base, int e) {
  S acc(1);
  for (int i = 0; i < e; ++i) acc = acc * base;
  return acc;
}

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool is_exact = false;
  static double from_rational(const Rational& q) { return tgauss::to_double(q); }
  static bool is_zero(double x) { return x == 0.0; }
  static double to_double(double x) { return x; }
  static int sign(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }
  static std::optional<double> sqrt(double x) {
    if (x < 0) return std::nullopt;
    return std::sqrt(x);
  }
  static std::string to_string(double x) { return std::to_string(x); }
};

template <>
struct scalar_traits<Exact> {
  static constexpr bool is_exact = true;
  static Exact from_rational(const Rational& q) { return Exact(q); }
  static bool is_zero(const Exact& x) { return x.is_zero(); }
  static double to_double(const Exact& x) { return x.to_double(); }
  static int sign(const Exact& x) { return x.sign(); }
  static std::optional<Exact> sqrt(const Exact& x) { return x.sqrt_in_field(); }
  static std::string to_string(const Exact& x) { return x.to_string(); }
};

}  // namespace tgauss
