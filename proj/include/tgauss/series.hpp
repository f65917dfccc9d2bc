// Copyright 2026 The tgauss Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "tgauss/scalar.hpp"

namespace tgauss {

/// Truncated formal power series sum_k c[k] x^k. Every operation demands
/// matching truncation orders; silent order mixing is refused.
template <class S>
struct FormalSeries {
  std::vector<S> c;

  FormalSeries() = default;
  explicit FormalSeries(int order) : c(static_cast<std::size_t>(order) + 1, S(0)) {}
  explicit FormalSeries(std::vector<S> cc) : c(std::move(cc)) {}

  int order() const { return static_cast<int>(c.size()) - 1; }
  const S& operator[](int k) const { return c[static_cast<std::size_t>(k)]; }
  S& operator[](int k) { return c[static_cast<std::size_t>(k)]; }

  int valuation() const {  // order+1 for the zero series
    for (int k = 0; k <= order(); ++k)
      if (!scalar_traits<S>::is_zero(c[static_cast<std::size_t>(k)])) return k;
    return order() + 1;
  }

  static FormalSeries x(int order) {
    FormalSeries s(order);
    if (order >= 1) s[1] = S(1);
    return s;
  }
};

namespace series {

template <class S>
void check_orders(const FormalSeries<S>& a, const FormalSeries<S>& b,
                  const char* op) {
  if (a.order() != b.order())
    throw precondition_error(std::string("series ") + op +
                             ": mixed truncation orders refused");
}

template <class S>
FormalSeries<S> add(const FormalSeries<S>& a, const FormalSeries<S>& b) {
  check_orders(a, b, "add");
  FormalSeries<S> r = a;
  for (int k = 0; k <= r.order(); ++k) r[k] += b[k];
  return r;
}

template <class S>
FormalSeries<S> sub(const FormalSeries<S>& a, const FormalSeries<S>& b) {
  check_orders(a, b, "sub");
  FormalSeries<S> r = a;
  for (int k = 0; k <= r.order(); ++k) r[k] -= b[k];
  return r;
}

template <class S>
FormalSeries<S> scale(const S& s, const FormalSeries<S>& a) {
  FormalSeries<S> r = a;
  for (int k = 0; k <= r.order(); ++k) r[k] = s * r[k];
  return r;
}

template <class S>
FormalSeries<S> mul(const FormalSeries<S>& a, const FormalSeries<S>& b) {
  check_orders(a, b, "mul");
  FormalSeries<S> r(a.order());
  for (int i = 0; i <= a.order(); ++i) {
    if (scalar_traits<S>::is_zero(a[i])) continue;
    for (int j = 0; i + j <= a.order(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

/// 1/q for q with invertible constant term.
template <class S>
FormalSeries<S> inverse(const FormalSeries<S>& q) {
  if (scalar_traits<S>::is_zero(q[0]))
    throw precondition_error("series inverse: zero constant term");
  FormalSeries<S> r(q.order());
  r[0] = S(1) / q[0];
  for (int k = 1; k <= q.order(); ++k) {
    S acc(0);
    for (int j = 1; j <= k; ++j) acc += q[j] * r[k - j];
    r[k] = S(0) - acc / q[0];
  }
  return r;
}

template <class S>
FormalSeries<S> divide(const FormalSeries<S>& p, const FormalSeries<S>& q) {
  check_orders(p, q, "divide");
  return mul(p, inverse(q));
}

/// p/q after cancelling their common valuation v = val(q); requires
/// val(p) >= val(q). The result is only trustworthy to order
/// order - v, so callers pad the working order.
template <class S>
FormalSeries<S> divide_cancel_valuation(const FormalSeries<S>& p,
                                        const FormalSeries<S>& q) {
  check_orders(p, q, "divide_cancel_valuation");
  int v = q.valuation();
  if (v > q.order())
    throw precondition_error("series division by zero series");
  if (p.valuation() < v)
    throw precondition_error("series division: numerator valuation too small");
  FormalSeries<S> ps(p.order()), qs(q.order());
  for (int k = v; k <= p.order(); ++k) {
    ps[k - v] = p[k];
    qs[k - v] = q[k];
  }
  return divide(ps, qs);
}

/// sqrt of a series with constant term 1, fixed by y_0 = 1.
template <class S>
FormalSeries<S> sqrt_one_plus(const FormalSeries<S>& a) {
  if (!(a[0] == S(1)))
    throw precondition_error("series sqrt: constant term must be 1");
  FormalSeries<S> y(a.order());
  y[0] = S(1);
  for (int k = 1; k <= a.order(); ++k) {
    S acc(0);
    for (int j = 1; j < k; ++j) acc += y[j] * y[k - j];
    y[k] = (a[k] - acc) / S(2);
  }
  return y;
}

/// f(g) for g with zero constant term.
template <class S>
FormalSeries<S> compose(const FormalSeries<S>& f, const FormalSeries<S>& g) {
  check_orders(f, g, "compose");
  if (!scalar_traits<S>::is_zero(g[0]))
    throw precondition_error("series compose: inner valuation must be >= 1");
  FormalSeries<S> r(f.order());
  for (int d = f.order(); d >= 0; --d) {
    // r = r*g + f_d
    FormalSeries<S> next = mul(r, g);
    next[0] += f[d];
    r = std::move(next);
  }
  return r;
}

/// Compositional inverse of f = f1 x + f2 x^2 + ..., f1 invertible:
/// returns V with f(V(x)) = x.
template <class S>
FormalSeries<S> revert(const FormalSeries<S>& f) {
  if (!scalar_traits<S>::is_zero(f[0]))
    throw precondition_error("series revert: constant term must be 0");
  if (f.order() < 1 || scalar_traits<S>::is_zero(f[1]))
    throw precondition_error("series revert: linear coefficient must be invertible");
  FormalSeries<S> v(f.order());
  v[1] = S(1) / f[1];
  for (int m = 2; m <= f.order(); ++m) {
    FormalSeries<S> e = compose(f, v);
    v[m] = S(0) - e[m] / f[1];
  }
  return v;
}

/// Multiply by x^j (dropping overflow) / divide by x^j (requires valuation).
template <class S>
FormalSeries<S> shift_up(const FormalSeries<S>& a, int j) {
  FormalSeries<S> r(a.order());
  for (int k = 0; k + j <= a.order(); ++k) r[k + j] = a[k];
  return r;
}

template <class S>
FormalSeries<S> shift_down(const FormalSeries<S>& a, int j) {
  if (a.valuation() < j)
    throw precondition_error("series shift_down: valuation too small");
  FormalSeries<S> r(a.order());
  for (int k = j; k <= a.order(); ++k) r[k - j] = a[k];
  return r;
}

template <class S>
FormalSeries<S> truncate(const FormalSeries<S>& a, int order) {
  if (order > a.order())
    throw precondition_error("series truncate: cannot extend the order");
  FormalSeries<S> r(order);
  for (int k = 0; k <= order; ++k) r[k] = a[k];
  return r;
}

}  // namespace series
}  // namespace tgauss
