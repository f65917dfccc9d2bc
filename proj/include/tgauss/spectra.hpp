// Copyright 2026 The tgauss Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tgauss/polynomials.hpp"
#include "tgauss/series.hpp"

namespace tgauss {

// ---------------------------------------------------------------------------
// Measures: absolutely continuous density on [lo, hi] plus finitely many
// atoms. The closed forms of the two families in scope are built in
// spectra.cpp.
// ---------------------------------------------------------------------------

struct Atom {
  double location;
  double weight;
};

/// Absolutely continuous part factored as
///   (x - lo)^{pow_lo} (hi - x)^{pow_hi} smooth(x)  on [lo, hi],
/// with pow in {-1/2, +1/2}. Factoring the edge powers out keeps quadrature
/// stable when a denominator root falls exactly on an edge (boundary
/// deformation parameters), where the naive formula cancels catastrophically.
struct Measure {
  double lo = 0, hi = 0;
  double pow_lo = 0.5, pow_hi = 0.5;
  std::function<double(double)> smooth;
  std::vector<Atom> atoms;

  double density(double x) const {
    if (!smooth || x <= lo || x >= hi) return 0.0;
    return std::pow(x - lo, pow_lo) * std::pow(hi - x, pow_hi) * smooth(x);
  }
};

/// Distribution of the t-gaussian: semicircle-like density on
/// [-2 sqrt t, 2 sqrt t] with a symmetric atom pair iff t < 1/2.
Measure gaussian_measure(double t);

/// Distribution of c = s_1^2 + ... + s_n^2: density on
/// [t(1-sqrt n)^2, t(1+sqrt n)^2] with one atom at n + 1/alpha iff t lies
/// outside [n/(n+sqrt n), n/(n-sqrt n)] (t < 1/2 when n = 1).
Measure c_measure(double t, int n);

// Atom bookkeeping, shared with the regime classifier.
double s_atom_location(double t);                   // 1/sqrt(1-t)
double s_atom_weight(double t);                     // (1-2t)/(2-2t)
double c_atom_location(double t, int n);            // n + 1/alpha
double c_atom_weight(double t, int n);
bool c_measure_has_atom(double t, int n);

/// Integral of f against the measure (density by adaptive Gauss quadrature
/// with sqrt-endpoint substitution, plus atom contributions).
double measure_expectation(const Measure& m,
                           const std::function<double(double)>& f);

/// k-th moment.
double measure_moment(const Measure& m, int k);
double measure_mass(const Measure& m);

// ---------------------------------------------------------------------------
// Cauchy transforms
// ---------------------------------------------------------------------------

enum class GKind { s_t, c_t, t_c1 };

/// Closed-form G-transform evaluated on the upper half-plane with the branch
/// fixed by G(z) ~ 1/z at infinity.
std::complex<double> closed_form_G(GKind kind, double t, int n,
                                   std::complex<double> z);

/// Continued-fraction data: value 1/(z - a[0] - b[0]^2/(z - a[1] - ...)).
struct JacobiCoefficients {
  std::vector<double> a;  // diagonal
  std::vector<double> b;  // off-diagonal, b[j] couples levels j and j+1
};

/// The t-gaussian coefficients a = 0, b = (1, sqrt t, sqrt t, ...).
JacobiCoefficients jacobi_of_s_t(double t, int depth);

std::complex<double> g_continued_fraction(const JacobiCoefficients& jac,
                                          std::complex<double> z, int depth);

using GFunction = std::function<std::complex<double>(std::complex<double>)>;

/// Density recovery -Im G(x + i eps)/pi on a grid.
std::vector<double> stieltjes_invert(const GFunction& G,
                                     std::span<const double> grid,
                                     double epsilon);

/// eps * (-Im G(x0 + i eps)), which tends to the point mass at x0.
double atom_weight_estimate(const GFunction& G, double x0, double epsilon);

/// Reports a detected atom weight when the scaled spike exceeds the
/// threshold separating O(1) densities from weight/(pi eps) spikes.
std::optional<double> detect_atom(const GFunction& G, double x0,
                                  double epsilon = 1e-6,
                                  double threshold = 1e-6);

// ---------------------------------------------------------------------------
// Moment sequences
// ---------------------------------------------------------------------------

/// Formal expansion G(z) = sum m_k z^{-k-1}; m[0] must be 1.
template <class S>
struct CauchySeries {
  std::vector<S> m;

  CauchySeries() = default;
  explicit CauchySeries(std::vector<S> mm) : m(std::move(mm)) {
    if (m.empty() || !(m[0] == S(1)))
      throw precondition_error("CauchySeries: m_0 must be 1");
  }
  int order() const { return static_cast<int>(m.size()) - 1; }
};

/// Moment coefficients of the closed-form G, extracted as a formal series:
/// exact rationals when S is exact. The three kinds share the radical
/// R(w) = 1 - 2(n+1)t w + (n-1)^2 t^2 w^2 (c_t, t_c1) resp. 1 - 4t w^2 (s_t).
template <class S>
CauchySeries<S> g_moment_series(GKind kind, const S& t, int n, int order) {
  using FS = FormalSeries<S>;
  const int pad = order + 4;
  auto constant = [&](const S& v) {
    FS s(pad);
    s[0] = v;
    return s;
  };
  const S one(1), half = S(1) / S(2);
  FS zg(pad);
  if (kind == GKind::s_t) {
    FS rad(pad);  // 1 - 4 t w^2
    rad[0] = one;
    rad[2] = S(0) - S(4) * t;
    FS num = series::add(constant(half - t),
                         series::scale(half, series::sqrt_one_plus(rad)));
    FS den(pad);  // (1 - t) - w^2
    den[0] = one - t;
    den[2] = S(0) - one;
    zg = series::divide_cancel_valuation(num, den);
  } else {
    FS rad(pad);  // 1 - 2(n+1) t w + (n-1)^2 t^2 w^2
    rad[0] = one;
    rad[1] = S(0) - S(2 * (n + 1)) * t;
    rad[2] = S((n - 1) * (n - 1)) * t * t;
    FS root = series::sqrt_one_plus(rad);
    if (kind == GKind::c_t) {
      FS num(pad);
      num[0] = S(2) * t - one;
      num[1] = (one - S(n)) * t;
      num = series::sub(num, root);
      FS den(pad);
      den[0] = S(2) * (t - one);
      den[1] = S(2) * (S(n) + t * (one - S(n)));
      zg = series::divide_cancel_valuation(num, den);
    } else {  // t_c1
      FS num = series::shift_down(series::sub(constant(one), root), 1);
      num[0] += (one - S(n)) * t;
      zg = series::scale(one / (S(2) * t), num);
    }
  }
  std::vector<S> m(static_cast<std::size_t>(order) + 1);
  for (int k = 0; k <= order; ++k) m[static_cast<std::size_t>(k)] = zg[k];
  return CauchySeries<S>(std::move(m));
}

// ---------------------------------------------------------------------------
// Moments -> three-term recursion (Chebyshev algorithm), generic over the
// scalar so the exact mode can recover (1, sqrt t, sqrt t, ...) in-field.
// ---------------------------------------------------------------------------

template <class S>
struct JacobiData {
  std::vector<S> a;   // a_0 .. a_{M-1}
  std::vector<S> b2;  // b_1^2 .. b_{M-1}^2
  std::vector<S> b;   // b_1 .. b_{M-1} (square roots of b2)
};

namespace detail {

/// Runs the sigma recursion; pivots sigma_{k,k} must stay positive. A zero
/// pivot ends the recursion early (finitely supported measure); a negative
/// one is not a moment sequence.
template <class S>
JacobiData<S> jacobi_from_moments_impl(std::span<const S> m, bool take_roots,
                                       double float_tol) {
  if (m.empty() || !(m[0] == S(1)))
    throw precondition_error("moment sequence must start with m_0 = 1");
  const int K = static_cast<int>(m.size()) - 1;
  const int M = (K + 1) / 2;
  JacobiData<S> out;
  if (M == 0) return out;

  auto pivot_sign = [&](const S& v) {
    if constexpr (scalar_traits<S>::is_exact) {
      return scalar_traits<S>::sign(v);
    } else {
      double d = scalar_traits<S>::to_double(v);
      if (d > float_tol) return 1;
      if (d < -float_tol) return -1;
      return 0;
    }
  };

  std::vector<S> prev(m.begin(), m.end());  // sigma_{k-1, l}, l-indexed absolutely
  std::vector<S> pprev;                     // sigma_{k-2, l}
  out.a.push_back(m[1]);                    // a_0 = m_1 / m_0
  for (int k = 1; 2 * k <= K; ++k) {
    // sigma_{k,l} for l = k .. K-k
    std::vector<S> cur(m.size(), S(0));
    for (int l = k; l <= K - k; ++l) {
      S v = prev[static_cast<std::size_t>(l + 1)] -
            out.a[static_cast<std::size_t>(k - 1)] * prev[static_cast<std::size_t>(l)];
      if (k >= 2)
        v = v - out.b2[static_cast<std::size_t>(k - 2)] * pprev[static_cast<std::size_t>(l)];
      cur[static_cast<std::size_t>(l)] = v;
    }
    const S& pk = cur[static_cast<std::size_t>(k)];
    const S& pk1 = k >= 2 ? prev[static_cast<std::size_t>(k - 1)] : m[0];
    int sgn = pivot_sign(pk);
    if (sgn < 0)
      throw precondition_error(
          "not a moment sequence: negative Hankel pivot at order " +
          std::to_string(k));
    if (sgn == 0) break;  // finitely supported; no further coefficients
    out.b2.push_back(pk / pk1);
    if (2 * k + 1 <= K) {
      S ak = cur[static_cast<std::size_t>(k + 1)] / pk -
             (k >= 2 ? prev[static_cast<std::size_t>(k)] / pk1 : out.a[0]);
      out.a.push_back(ak);
    }
    pprev = std::move(prev);
    prev = std::move(cur);
  }
  if (take_roots)
    for (const auto& v : out.b2) {
      auto r = scalar_traits<S>::sqrt(v);
      if (!r)
        throw precondition_error(
            "jacobi_from_moments: off-diagonal leaves the scalar field");
      out.b.push_back(*r);
    }
  return out;
}

}  // namespace detail

template <class S>
JacobiData<S> jacobi_from_moments(std::span<const S> moments,
                                  double float_tol = 1e-12) {
  return detail::jacobi_from_moments_impl(moments, true, float_tol);
}

/// Hankel positive semidefiniteness of a moment sequence; throws on failure.
template <class S>
void check_hankel_psd(std::span<const S> moments, const std::string& label,
                      double float_tol = 1e-9) {
  try {
    (void)detail::jacobi_from_moments_impl(moments, false, float_tol);
  } catch (const precondition_error& e) {
    throw precondition_error(label + ": " + e.what());
  }
}

/// moments -> continued fraction data in doubles (spec surface).
JacobiCoefficients moments_to_jacobi(const std::vector<double>& moments);

/// Orthonormal polynomial ladder from three-term data: p_0 = 1 and
/// b_{k+1} p_{k+1} = (x - a_k) p_k - b_k p_{k-1}.
template <class S>
std::vector<Polynomial<S>> orthonormal_polynomials(const JacobiData<S>& jac,
                                                   int count) {
  if (count > static_cast<int>(jac.b.size()))
    throw precondition_error(
        "orthonormal_polynomials: insufficient three-term data (finite "
        "support or too few moments)");
  std::vector<Polynomial<S>> p;
  p.reserve(static_cast<std::size_t>(count) + 1);
  p.push_back(Polynomial<S>::constant(S(1)));
  Polynomial<S> x = Polynomial<S>::x();
  for (int k = 0; k < count; ++k) {
    Polynomial<S> t = (x - Polynomial<S>::constant(jac.a[static_cast<std::size_t>(k)])) * p.back();
    if (k >= 1) t = t - jac.b[static_cast<std::size_t>(k - 1)] * p[static_cast<std::size_t>(k - 1)];
    p.push_back((S(1) / jac.b[static_cast<std::size_t>(k)]) * t);
  }
  return p;
}

}  // namespace tgauss
