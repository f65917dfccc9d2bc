// Copyright 2026 The tgauss Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "tgauss/operators.hpp"

namespace tgauss {

/// Dense univariate polynomial, coefficients ascending by degree.
template <class S>
struct Polynomial {
  std::vector<S> coeff;  // coeff[d] multiplies X^d; empty = zero polynomial

  Polynomial() = default;
  explicit Polynomial(std::vector<S> c) : coeff(std::move(c)) { trim(); }
  static Polynomial constant(const S& v) { return Polynomial(std::vector<S>{v}); }
  static Polynomial x() { return Polynomial(std::vector<S>{S(0), S(1)}); }

  int degree() const { return static_cast<int>(coeff.size()) - 1; }
  bool is_zero() const { return coeff.empty(); }

  void trim() {
    while (!coeff.empty() && scalar_traits<S>::is_zero(coeff.back()))
      coeff.pop_back();
  }

  S at(int d) const {
    return d >= 0 && d < static_cast<int>(coeff.size()) ? coeff[d] : S(0);
  }

  S operator()(const S& x) const {
    S acc(0);
    for (int d = degree(); d >= 0; --d) acc = acc * x + coeff[d];
    return acc;
  }

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q) {
    std::vector<S> c(std::max(p.coeff.size(), q.coeff.size()), S(0));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = p.at(static_cast<int>(i)) + q.at(static_cast<int>(i));
    return Polynomial(std::move(c));
  }
  friend Polynomial operator-(const Polynomial& p, const Polynomial& q) {
    std::vector<S> c(std::max(p.coeff.size(), q.coeff.size()), S(0));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = p.at(static_cast<int>(i)) - q.at(static_cast<int>(i));
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    if (p.is_zero() || q.is_zero()) return {};
    std::vector<S> c(p.coeff.size() + q.coeff.size() - 1, S(0));
    for (std::size_t i = 0; i < p.coeff.size(); ++i)
      for (std::size_t j = 0; j < q.coeff.size(); ++j)
        c[i + j] += p.coeff[i] * q.coeff[j];
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const S& a, const Polynomial& p) {
    std::vector<S> c = p.coeff;
    for (auto& x : c) x = a * x;
    return Polynomial(std::move(c));
  }
  friend bool operator==(const Polynomial& p, const Polynomial& q) {
    if (p.coeff.size() != q.coeff.size()) return false;
    for (std::size_t i = 0; i < p.coeff.size(); ++i)
      if (!(p.coeff[i] == q.coeff[i])) return false;
    return true;
  }
};

/// p(A) v by Horner over sparse apply.
template <class S>
FockVector<S> apply_polynomial(const Polynomial<S>& poly,
                               const SparseOperator<S>& op,
                               const FockVector<S>& v) {
  FockVector<S> acc(v.dim());
  for (int d = poly.degree(); d >= 0; --d) {
    acc = op.apply(acc);
    for (std::size_t i = 0; i < v.dim(); ++i) acc.c[i] += poly.at(d) * v.c[i];
  }
  return acc;
}

// ---------------------------------------------------------------------------
// The Chebyshev ladder: U_k of the second kind, the scaled family
// u_k(X) = U_k(X / (2 sqrt t)) orthonormal for the semicircle of variance t,
// and the v_k family orthonormal for the t-gaussian itself.
// ---------------------------------------------------------------------------

template <class S>
Polynomial<S> chebyshev_U(int k) {
  if (k < 0) return {};
  Polynomial<S> prev = Polynomial<S>::constant(S(1));
  if (k == 0) return prev;
  Polynomial<S> two_y(std::vector<S>{S(0), S(2)});
  Polynomial<S> cur = two_y;  // U_1 = 2y
  for (int j = 2; j <= k; ++j) {
    Polynomial<S> next = two_y * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// Substitute X -> c X into p.
template <class S>
Polynomial<S> scale_argument(const Polynomial<S>& p, const S& c) {
  std::vector<S> out = p.coeff;
  S pw(1);
  for (std::size_t d = 0; d < out.size(); ++d) {
    out[d] = out[d] * pw;
    pw = pw * c;
  }
  return Polynomial<S>(std::move(out));
}

template <class S>
Polynomial<S> u_poly(int k, const FockParams<S>& p) {
  if (k < 0) return {};
  S inv = S(1) / (S(2) * p.sqrt_t);
  return scale_argument(chebyshev_U<S>(k), inv);
}

/// v_k from the monic three-term recursion X P_k = P_{k+1} + t P_{k-1}
/// (k >= 2), X P_1 = P_2 + P_0, normalized by ||P_k|| = t^{(k-1)/2}. This is
/// the authoritative construction; the relation v_k = sqrt(t)(u_k - alpha
/// u_{k-2}) is checked against it, not assumed.
template <class S>
Polynomial<S> v_poly(int k, const FockParams<S>& p) {
  if (k < 0) return {};
  if (k == 0) return Polynomial<S>::constant(S(1));
  Polynomial<S> x = Polynomial<S>::x();
  Polynomial<S> prev = Polynomial<S>::constant(S(1));  // P_0
  Polynomial<S> cur = x;                               // P_1
  for (int j = 1; j < k; ++j) {
    S back = j == 1 ? S(1) : p.t;
    Polynomial<S> next = x * cur - back * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  // normalize: ||P_k|| = t^{(k-1)/2}
  S norm = k % 2 == 1 ? pow_int(p.t, (k - 1) / 2)
                      : pow_int(p.t, (k - 2) / 2) * p.sqrt_t;
  return (S(1) / norm) * cur;
}

struct RelationsReport {
  bool all_exact = true;
  double max_discrepancy = 0;  // max |coefficient difference| over all checks
  int checked_up_to = 0;
};

/// Verifies the three identities tying u and v together, as polynomial
/// identities up to degree `up_to`:
///   v_m = sqrt(t) (u_m - alpha u_{m-2})            (m >= 1, u_{-1} = 0)
///   u_{2m} = alpha^m v_0 + (1/sqrt t) sum_{k=1}^m alpha^{m-k} v_{2k}
///   u_{2m+1} = (1/sqrt t) sum_{k=0}^m alpha^{m-k} v_{2k+1}
template <class S>
RelationsReport relations_R_check(const FockParams<S>& p, int up_to) {
  if (up_to < 2) throw precondition_error("relations_R_check: up_to must be >= 2");
  RelationsReport rep;
  rep.checked_up_to = up_to;
  auto record = [&rep](const Polynomial<S>& lhs, const Polynomial<S>& rhs) {
    Polynomial<S> d = lhs - rhs;
    for (const auto& c : d.coeff) {
      double a = std::abs(scalar_traits<S>::to_double(c));
      rep.max_discrepancy = std::max(rep.max_discrepancy, a);
      if (!scalar_traits<S>::is_zero(c)) rep.all_exact = false;
    }
  };
  S inv_sqrt = S(1) / p.sqrt_t;
  for (int m = 1; m <= up_to; ++m) {
    Polynomial<S> rhs = u_poly(m, p);
    if (m >= 2) rhs = rhs - p.alpha * u_poly(m - 2, p);
    record(v_poly(m, p), p.sqrt_t * rhs);
  }
  for (int m = 0; 2 * m <= up_to; ++m) {
    Polynomial<S> rhs = pow_int(p.alpha, m) * Polynomial<S>::constant(S(1));
    for (int k = 1; k <= m; ++k)
      rhs = rhs + (inv_sqrt * pow_int(p.alpha, m - k)) * v_poly(2 * k, p);
    record(u_poly(2 * m, p), rhs);
  }
  for (int m = 0; 2 * m + 1 <= up_to; ++m) {
    Polynomial<S> rhs;
    for (int k = 0; k <= m; ++k)
      rhs = rhs + (inv_sqrt * pow_int(p.alpha, m - k)) * v_poly(2 * k + 1, p);
    record(u_poly(2 * m + 1, p), rhs);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Run encoding and the product identity
//   u_{a_1}(s_{i_1}) ... u_{a_{l-1}}(s_{i_{l-1}}) v_{a_l}(s_{i_l}) Omega = e_w
// ---------------------------------------------------------------------------

struct Run {
  int letter;
  int length;
};

inline std::vector<Run> word_runs(const Word& w) {
  std::vector<Run> runs;
  for (int letter : w) {
    if (!runs.empty() && runs.back().letter == letter)
      ++runs.back().length;
    else
      runs.push_back({letter, 1});
  }
  return runs;
}

inline int max_run_length(const std::vector<Run>& runs) {
  int m = 0;
  for (const auto& r : runs) m = std::max(m, r.length);
  return m;
}

/// Builds the product vector of the identity above. Requires
/// |w| <= L - max run length so every intermediate Horner stage stays below
/// the truncation.
template <class S>
FockVector<S> ident_vector(const FockParams<S>& p, const Word& w) {
  auto runs = word_runs(w);
  if (static_cast<int>(w.size()) > p.L - max_run_length(runs))
    throw truncation_error("ident_vector: needs |w| <= L - max run length");
  FockVector<S> v = vacuum_vector(p);
  for (std::size_t j = runs.size(); j-- > 0;) {
    auto s = gaussian(p, runs[j].letter);
    bool innermost = (j + 1 == runs.size());
    Polynomial<S> poly =
        innermost ? v_poly(runs[j].length, p) : u_poly(runs[j].length, p);
    v = apply_polynomial(poly, s, v);
  }
  return v;
}

}  // namespace tgauss
