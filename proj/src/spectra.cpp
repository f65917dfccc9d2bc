// Copyright 2026 The tgauss Authors
// SPDX-License-Identifier: Apache-2.0

#include "tgauss/spectra.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace tgauss {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sq(double x) { return x * x; }

}  // namespace

// ---------------------------------------------------------------------------
// Closed-form measures
// ---------------------------------------------------------------------------

double s_atom_location(double t) { return 1.0 / std::sqrt(1.0 - t); }

double s_atom_weight(double t) { return (1 - 2 * t) / (2 - 2 * t); }

double c_atom_location(double t, int n) {
  return (n + t * (1 - n)) / (1 - t);  // n + 1/alpha
}

double c_atom_weight(double t, int n) {
  if (n == 1) {
    // the two symmetric atoms of the t-gaussian pushed forward by x -> x^2
    return (1 - 2 * t) / (1 - t);
  }
  double rn = std::sqrt(static_cast<double>(n));
  double num = (n - 1) * (t - n / (n + rn)) * (t - n / (n - rn));
  double den = n * sq(1 - t) + t * (1 - t);
  return num / den;
}

bool c_measure_has_atom(double t, int n) {
  if (n == 1) return t < 0.5;
  double rn = std::sqrt(static_cast<double>(n));
  return t < n / (n + rn) || t > n / (n - rn);
}

namespace {

bool close_rel(double a, double b) {
  return std::abs(a - b) <= 1e-13 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

Measure gaussian_measure(double t) {
  if (!(t > 0)) throw precondition_error("gaussian_measure: t must be positive");
  Measure m;
  m.lo = -2 * std::sqrt(t);
  m.hi = 2 * std::sqrt(t);
  // denominator 1 - (1-t) x^2; for t < 1 its roots sit at +-1/sqrt(1-t),
  // outside the support except exactly at t = 1/2 where they meet the edges
  if (t < 1 && close_rel(s_atom_location(t), m.hi)) {
    m.pow_lo = m.pow_hi = -0.5;
    m.smooth = [t](double) { return 1 / (2 * kPi * (1 - t)); };
  } else {
    m.pow_lo = m.pow_hi = 0.5;
    m.smooth = [t](double x) { return 1 / (2 * kPi * (1 - (1 - t) * x * x)); };
  }
  if (t < 0.5) {
    double loc = s_atom_location(t), w = s_atom_weight(t);
    m.atoms.push_back({-loc, w});
    m.atoms.push_back({loc, w});
  }
  return m;
}

Measure c_measure(double t, int n) {
  if (!(t > 0)) throw precondition_error("c_measure: t must be positive");
  if (n < 1) throw precondition_error("c_measure: n must be >= 1");
  double rn = std::sqrt(static_cast<double>(n));
  Measure m;
  m.lo = t * sq(1 - rn);
  m.hi = t * sq(1 + rn);
  m.pow_lo = n == 1 ? -0.5 : 0.5;  // n = 1: lo = 0 and the 1/x prefactor folds
  m.pow_hi = 0.5;
  // denominator root = the candidate atom location; it touches an edge
  // exactly at the boundary deformation parameters
  double xa = t == 1 ? 0.0 : c_atom_location(t, n);
  bool fold_hi = t < 1 && close_rel(xa, m.hi);
  bool fold_lo = n >= 2 && t > 1 && close_rel(xa, m.lo);
  if (fold_hi) m.pow_hi = -0.5;
  if (fold_lo) m.pow_lo -= 1.0;
  m.smooth = [t, n, fold_hi, fold_lo](double x) {
    double den = 2 * kPi * (n == 1 ? 1.0 : x);
    if (fold_hi)
      den *= (1 - t);
    else if (fold_lo)
      den *= (t - 1);
    else
      den *= (t - 1) * x + n + t * (1 - n);
    return 1 / den;
  };
  if (c_measure_has_atom(t, n))
    m.atoms.push_back({c_atom_location(t, n), c_atom_weight(t, n)});
  return m;
}

// ---------------------------------------------------------------------------
// Quadrature: substitute x = lo + u^2 resp. x = hi - u^2 so the sqrt edge
// factors become smooth, then Gauss-Kronrod each half.
// ---------------------------------------------------------------------------

namespace {

// The substitution x = edge -+ u^2 turns the edge power |x - edge|^p into
// u^{2p}, computed from u directly so boundary-parameter densities stay
// accurate into the corners.
double integrate_against_density(const Measure& m,
                                 const std::function<double(double)>& f) {
  if (!(m.hi > m.lo) || !m.smooth) return 0.0;
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double width = m.hi - m.lo;
  auto left = [&](double u) {
    double x = m.lo + u * u;
    return 2 * std::pow(u, 1 + 2 * m.pow_lo) *
           std::pow(width - u * u, m.pow_hi) * m.smooth(x) * f(x);
  };
  auto right = [&](double u) {
    double x = m.hi - u * u;
    return 2 * std::pow(u, 1 + 2 * m.pow_hi) *
           std::pow(width - u * u, m.pow_lo) * m.smooth(x) * f(x);
  };
  double half = std::sqrt(0.5 * width);
  double a = GK::integrate(left, 0.0, half, 22, 1e-12);
  double b = GK::integrate(right, 0.0, half, 22, 1e-12);
  return a + b;
}

}  // namespace

double measure_expectation(const Measure& m,
                           const std::function<double(double)>& f) {
  double acc = integrate_against_density(m, f);
  for (const auto& atom : m.atoms) acc += atom.weight * f(atom.location);
  return acc;
}

double measure_moment(const Measure& m, int k) {
  if (k < 0) throw precondition_error("measure_moment: k must be >= 0");
  double acc = integrate_against_density(
      m, [k](double x) { return std::pow(x, k); });
  for (const auto& atom : m.atoms) acc += atom.weight * std::pow(atom.location, k);
  return acc;
}

double measure_mass(const Measure& m) { return measure_moment(m, 0); }

// ---------------------------------------------------------------------------
// Cauchy transforms
// ---------------------------------------------------------------------------

namespace {

using Cplx = std::complex<double>;

/// sqrt((z - r1)(z - r2)) on C minus [r1, r2], the branch asymptotic to z.
Cplx edge_sqrt(Cplx z, double r1, double r2) {
  return std::sqrt(z - r1) * std::sqrt(z - r2);
}

void require_upper_half(Cplx z) {
  if (!(z.imag() > 0))
    throw precondition_error("G-transform: z must lie in the upper half-plane");
}

}  // namespace

std::complex<double> closed_form_G(GKind kind, double t, int n,
                                   std::complex<double> z) {
  require_upper_half(z);
  switch (kind) {
    case GKind::s_t: {
      Cplx w = edge_sqrt(z, -2 * std::sqrt(t), 2 * std::sqrt(t));
      return ((0.5 - t) * z + 0.5 * w) / (z * z * (1 - t) - 1.0);
    }
    case GKind::t_c1: {
      double rn = std::sqrt(static_cast<double>(n));
      Cplx w = edge_sqrt(z, t * sq(1 - rn), t * sq(1 + rn));
      return ((1.0 - n) * t + z - w) / (2 * t * z);
    }
    case GKind::c_t: {
      double rn = std::sqrt(static_cast<double>(n));
      Cplx w = edge_sqrt(z, t * sq(1 - rn), t * sq(1 + rn));
      return ((2 * t - 1) * z + (1.0 - n) * t - w) /
             (2.0 * z * ((t - 1) * z + static_cast<double>(n) + t * (1 - n)));
    }
  }
  throw precondition_error("closed_form_G: unknown kind");
}

JacobiCoefficients jacobi_of_s_t(double t, int depth) {
  JacobiCoefficients jac;
  jac.a.assign(static_cast<std::size_t>(depth), 0.0);
  jac.b.assign(static_cast<std::size_t>(depth), std::sqrt(t));
  if (depth > 0) jac.b[0] = 1.0;
  return jac;
}

std::complex<double> g_continued_fraction(const JacobiCoefficients& jac,
                                          std::complex<double> z, int depth) {
  require_upper_half(z);
  if (depth < 1) throw precondition_error("g_continued_fraction: depth >= 1");
  if (static_cast<int>(jac.a.size()) < depth ||
      static_cast<int>(jac.b.size()) < depth - 1)
    throw precondition_error("g_continued_fraction: not enough coefficients");
  Cplx r = z - jac.a[static_cast<std::size_t>(depth - 1)];
  for (int j = depth - 2; j >= 0; --j)
    r = z - jac.a[static_cast<std::size_t>(j)] -
        sq(jac.b[static_cast<std::size_t>(j)]) / r;
  return 1.0 / r;
}

std::vector<double> stieltjes_invert(const GFunction& G,
                                     std::span<const double> grid,
                                     double epsilon) {
  if (!(epsilon > 0)) throw precondition_error("stieltjes_invert: epsilon > 0");
  std::vector<double> out;
  out.reserve(grid.size());
  for (double x : grid)
    out.push_back(-G(Cplx(x, epsilon)).imag() / kPi);
  return out;
}

double atom_weight_estimate(const GFunction& G, double x0, double epsilon) {
  return epsilon * (-G(Cplx(x0, epsilon)).imag());
}

std::optional<double> detect_atom(const GFunction& G, double x0, double epsilon,
                                  double threshold) {
  double w = atom_weight_estimate(G, x0, epsilon);
  if (w > threshold) return w;
  return std::nullopt;
}

JacobiCoefficients moments_to_jacobi(const std::vector<double>& moments) {
  auto data = jacobi_from_moments<double>(std::span<const double>(moments));
  JacobiCoefficients jac;
  jac.a = data.a;
  jac.b = data.b;
  return jac;
}

}  // namespace tgauss
