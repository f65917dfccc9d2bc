// Copyright 2026 The tgauss Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tgauss/cfree.hpp"

namespace tgauss {

// ---------------------------------------------------------------------------
// Regime classification: the closed interval [n/(n+sqrt n), n/(n-sqrt n)]
// of deformation parameters where the algebra stays the free factor.
// ---------------------------------------------------------------------------

enum class Regime { FreeFactor, DirectSum };

struct RegimeVerdict {
  Regime regime;
  double boundary_distance;  // >= 0 inside (distance to nearest endpoint), < 0 outside
  double interval_lo, interval_hi;
};

/// sign of (a sqrt(n) - b) for rationals a, b, decided exactly.
inline int cmp_sqrtn(const Rational& a, int n, const Rational& b) {
  auto sgn = [](const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); };
  if (a == 0) return -sgn(b);
  if (b == 0 || sgn(a) != sgn(b)) return sgn(a);
  const Rational lhs = a * a * n, rhs = b * b;
  if (lhs == rhs) return 0;
  // both sides share the sign of a
  return (lhs > rhs) == (a > 0) ? 1 : -1;
}

inline RegimeVerdict classify_regime(const Rational& t, int n) {
  if (n < 2)
    throw precondition_error(
        "classify_regime: needs n >= 2 (single-generator case is the t < 1/2 "
        "atom dichotomy)");
  if (t <= 0) throw precondition_error("classify_regime: t > 0");
  // t >= n/(n+sqrt n)  <=>  t sqrt(n) >= n(1-t)
  int lo_cmp = cmp_sqrtn(t, n, Rational(n) * (1 - t));
  // t <= n/(n-sqrt n)  <=>  n(t-1) <= t sqrt(n)  <=>  t sqrt(n) >= n(t-1)
  int hi_cmp = cmp_sqrtn(t, n, Rational(n) * (t - 1));
  bool inside = lo_cmp >= 0 && hi_cmp >= 0;

  double rn = std::sqrt(static_cast<double>(n));
  RegimeVerdict v;
  v.interval_lo = n / (n + rn);
  v.interval_hi = n / (n - rn);
  v.regime = inside ? Regime::FreeFactor : Regime::DirectSum;
  double td = to_double(t);
  if (lo_cmp == 0 || hi_cmp == 0)
    v.boundary_distance = 0.0;
  else
    v.boundary_distance = inside
        ? std::min(td - v.interval_lo, v.interval_hi - td)
        : -std::min(std::abs(td - v.interval_lo), std::abs(td - v.interval_hi));
  return v;
}

// ---------------------------------------------------------------------------
// Atom eigenvectors
// ---------------------------------------------------------------------------

struct EigenWitness {
  double eigenvalue;
  double residual;  // ||(op - lambda) v|| / ||v||, evaluated without clipping
};

/// xi = Omega + (1/sqrt(1-t)) sum_{k>=1} alpha^{(1-k)/2} e_{i^k}, truncated
/// so that s_i acts exactly on it (components up to level L-1). Requires
/// t < 1/2, where the single-generator law has its atom pair.
inline FockVector<double> xi_vector(const FockParams<double>& p, int letter) {
  check_letter(p, letter);
  if (!(p.t < 0.5))
    throw precondition_error("xi_vector: no atom for t >= 1/2");
  if (p.L < 3) throw truncation_error("xi_vector: L too small");
  FockVector<double> v(p.dim);
  v.c[0] = 1.0;
  double pref = 1.0 / std::sqrt(1.0 - p.t);
  Word w;
  for (int k = 1; k <= p.L - 1; ++k) {
    w.push_back(letter);
    v.c[word_index(p, w)] = pref * std::pow(p.alpha, (1.0 - k) / 2.0);
  }
  return v;
}

inline EigenWitness xi_witness(const FockParams<double>& p, int letter) {
  FockVector<double> v = xi_vector(p, letter);
  auto img = gaussian(p, letter).apply(v);
  double lambda = 1.0 / std::sqrt(1.0 - p.t);
  double num = 0;
  for (std::size_t i = 0; i < p.dim; ++i) {
    double d = img.c[i] - lambda * v.c[i];
    num += d * d;
  }
  return {lambda, std::sqrt(num) / norm2(v)};
}

/// Dense zeta on a small space: sqrt(t) Omega + sum_{k>=1} (n alpha)^{-k}
/// over pair-pattern words of length 2k, kept up to pair index max_pair.
template <class S>
FockVector<S> zeta_vector(const FockParams<S>& p, int max_pair) {
  if (2 * max_pair > p.L)
    throw truncation_error("zeta_vector: 2 * max_pair must be <= L");
  FockVector<S> v(p.dim);
  v.c[0] = p.sqrt_t;
  S coeff(1);
  S inv_nalpha = S(1) / (S(p.n) * p.alpha);
  std::vector<int> js;
  for (int k = 1; k <= max_pair; ++k) {
    coeff = coeff * inv_nalpha;
    js.assign(static_cast<std::size_t>(k), 1);
    while (true) {
      Word w;
      for (int j : js) {
        w.push_back(j);
        w.push_back(j);
      }
      v.c[word_index(p, w)] = coeff;
      int pos = k - 1;
      while (pos >= 0 && js[static_cast<std::size_t>(pos)] == p.n) --pos;
      if (pos < 0) break;
      ++js[static_cast<std::size_t>(pos)];
      for (int q = pos + 1; q < k; ++q) js[static_cast<std::size_t>(q)] = 1;
    }
  }
  return v;
}

/// Residual witness for c zeta = (n + 1/alpha) zeta with zeta truncated at
/// pair index k_pairs. Works on sparse pair-pattern vectors, so the ambient
/// index space (levels up to 2 k_pairs + 2) never materializes densely.
/// The residual decays like C rho^{k_pairs} with rho = sqrt(n)/(n |alpha|).
inline EigenWitness zeta_witness(double t, int n, int k_pairs) {
  if (n < 2) throw precondition_error("zeta_witness: n >= 2");
  if (t == 1.0) throw precondition_error("zeta_witness: alpha = 0 at t = 1");
  double alpha = 1.0 / t - 1.0;
  double rho = std::sqrt(static_cast<double>(n)) / (n * std::abs(alpha));
  if (!(rho < 1))
    throw precondition_error(
        "zeta_witness: series diverges inside the interval (no atom)");
  const int L = 2 * k_pairs + 2;
  auto p = make_float_params(t, n, L, std::size_t(1) << 62);

  SparseVector<double> zeta;
  zeta[0] = std::sqrt(t);
  double coeff = 1.0;
  std::vector<int> js;
  for (int k = 1; k <= k_pairs; ++k) {
    coeff /= n * alpha;
    js.assign(static_cast<std::size_t>(k), 1);
    while (true) {
      Word w;
      for (int j : js) {
        w.push_back(j);
        w.push_back(j);
      }
      zeta[word_index(p, w)] = coeff;
      int pos = k - 1;
      while (pos >= 0 && js[static_cast<std::size_t>(pos)] == n) --pos;
      if (pos < 0) break;
      ++js[static_cast<std::size_t>(pos)];
      for (int q = pos + 1; q < k; ++q) js[static_cast<std::size_t>(q)] = 1;
    }
  }

  // c zeta via two gaussian applications per generator
  SparseVector<double> img;
  for (int i = 1; i <= n; ++i) {
    SparseVector<double> tmp;
    accumulate_gaussian_apply(p, i, zeta, tmp);
    accumulate_gaussian_apply(p, i, tmp, img);
  }
  double lambda = n + 1.0 / alpha;
  double num = 0, den = 0;
  for (const auto& [idx, val] : zeta) den += val * val;
  for (const auto& [idx, val] : img) {
    auto it = zeta.find(idx);
    double d = val - lambda * (it == zeta.end() ? 0.0 : it->second);
    num += d * d;
  }
  // zeta entries missing from img contribute lambda^2 zeta^2; c never leaves
  // a populated pair word with zero image on itself, but guard anyway
  for (const auto& [idx, val] : zeta)
    if (img.find(idx) == img.end()) num += lambda * lambda * val * val;
  return {lambda, std::sqrt(num) / std::sqrt(den)};
}

// ---------------------------------------------------------------------------
// The kernel recursion behind uniqueness of the c^t eigenvector
// ---------------------------------------------------------------------------

struct KernelRecursion {
  Rational a, b;           // x_k = a (n alpha)^{-k} + b alpha^k, x_0 = 1
  Rational root_decaying;  // (n alpha)^{-1}
  Rational root_growing;   // alpha
  Rational x1;
  bool summable;           // sum_k x_k^2 n^k < infinity
};

/// Solves (n + 1/alpha) x_0 = (nt+1) x_0 + nt x_1 and
/// (n + 1/alpha) x_k = nt x_{k+1} + (n+1) t x_k + t x_{k-1} with x_0 = 1,
/// decomposing onto the characteristic roots.
inline KernelRecursion kernel_recursion(const Rational& t, int n) {
  if (n < 1) throw precondition_error("kernel_recursion: n >= 1");
  if (t == 1 || t <= 0)
    throw precondition_error("kernel_recursion: needs t > 0, t != 1");
  const Rational alpha = Rational(1) / t - 1;
  const Rational r1 = Rational(1) / (Rational(n) * alpha);  // decaying branch
  const Rational r2 = alpha;
  if (r1 == r2)
    throw precondition_error(
        "kernel_recursion: degenerate characteristic roots (n alpha^2 = 1)");
  KernelRecursion out;
  out.root_decaying = r1;
  out.root_growing = r2;
  const Rational lambda = Rational(n) + Rational(1) / alpha;
  out.x1 = (lambda - Rational(n) * t - 1) / (Rational(n) * t);
  out.b = (out.x1 - r1) / (r2 - r1);
  out.a = 1 - out.b;
  auto branch_summable = [&](const Rational& coeff, const Rational& root) {
    if (coeff == 0) return true;
    return root * root * n < 1;
  };
  out.summable = branch_summable(out.a, r1) && branch_summable(out.b, r2);
  return out;
}

// ---------------------------------------------------------------------------
// The conjugation S and its sqrt(t)(A - alpha B) decomposition
// ---------------------------------------------------------------------------

template <class S>
struct ConjugationOperators {
  int block_len;                 // words of length <= block_len are the domain
  SparseOperator<S> s_map;       // S
  SparseOperator<S> a_map;       // A (all-u product)
  SparseOperator<S> b_map;       // B (last-run degree lowered by 2)
  double a_norm_bound;           // (1/sqrt t) / (1 - sqrt(n)|alpha|)
  double s_norm_bound;           // sqrt(t) (1 + |alpha|) * a_norm_bound
};

namespace detail {

/// Applies the run-product with the innermost factor's family chosen by
/// `last_kind`: 0 = v_{a_l}, 1 = u_{a_l}, 2 = u_{a_l - 2} (zero if negative).
template <class S>
FockVector<S> conjugation_column(const FockParams<S>& p,
                                 const std::vector<Run>& runs, int last_kind) {
  FockVector<S> v = vacuum_vector(p);
  for (std::size_t j = 0; j < runs.size(); ++j) {
    bool last = (j + 1 == runs.size());
    int deg = runs[j].length;
    Polynomial<S> poly;
    if (!last)
      poly = u_poly(deg, p);
    else if (last_kind == 0)
      poly = v_poly(deg, p);
    else if (last_kind == 1)
      poly = u_poly(deg, p);
    else {
      if (deg - 2 < 0) return FockVector<S>(p.dim);  // u_{negative} = 0
      poly = u_poly(deg - 2, p);
    }
    v = apply_polynomial(poly, gaussian(p, runs[j].letter), v);
  }
  return v;
}

}  // namespace detail

/// Builds S, A, B on the block of words of length <= L/2. Requires the open
/// interval (sqrt(n)|alpha| < 1), where the series norm bound converges.
template <class S>
ConjugationOperators<S> s_conjugation(const FockParams<S>& p) {
  const int M = p.L / 2;
  double alpha = scalar_traits<S>::to_double(p.alpha);
  double rn = std::sqrt(static_cast<double>(p.n));
  if (!(rn * std::abs(alpha) < 1))
    throw precondition_error(
        "s_conjugation: needs sqrt(n)|alpha| < 1 (open interval regime)");
  ConjugationOperators<S> out;
  out.block_len = M;
  std::vector<Triplet<S>> st, at, bt;
  for (std::size_t col = 0; col < p.level_offset[M + 1]; ++col) {
    auto runs = word_runs(word_of_index(p, col));
    auto pushcol = [&](std::vector<Triplet<S>>& dst, int kind) {
      auto v = detail::conjugation_column(p, runs, kind);
      for (std::size_t r = 0; r < p.dim; ++r)
        if (!scalar_traits<S>::is_zero(v.c[r])) dst.push_back({r, col, v.c[r]});
    };
    if (runs.empty()) {
      // S(Omega) = Omega; A(Omega) = Omega / sqrt(t) and B(Omega) = 0 keep
      // the decomposition S = sqrt(t) (A - alpha B) exact on the whole block
      st.push_back({0, 0, S(1)});
      at.push_back({0, 0, S(1) / p.sqrt_t});
      continue;
    }
    pushcol(st, 0);
    pushcol(at, 1);
    pushcol(bt, 2);
  }
  out.s_map = SparseOperator<S>::from_triplets(p, std::move(st), false);
  out.a_map = SparseOperator<S>::from_triplets(p, std::move(at), false);
  out.b_map = SparseOperator<S>::from_triplets(p, std::move(bt), false);
  double sqrt_t = scalar_traits<S>::to_double(p.sqrt_t);
  out.a_norm_bound = (1.0 / sqrt_t) / (1.0 - rn * std::abs(alpha));
  out.s_norm_bound = sqrt_t * (1.0 + std::abs(alpha)) * out.a_norm_bound;
  return out;
}

/// || [S x S, s_k] w || with S clipped to the block of words of length <= M.
/// Interior data (everything staying inside the block) commutes exactly;
/// probes reaching the block edge decay geometrically as M grows.
template <class S>
double conjugation_commutator_norm(const FockParams<S>& p,
                                   const ConjugationOperators<S>& conj,
                                   const SparseOperator<S>& x, int letter,
                                   const FockVector<S>& w) {
  auto clip = [&](FockVector<S> v) {
    for (std::size_t i = p.level_offset[conj.block_len + 1]; i < p.dim; ++i)
      v.c[i] = S(0);
    return v;
  };
  auto SxS = [&](const FockVector<S>& v) {
    return conj.s_map.apply(clip(x.apply(conj.s_map.apply(clip(v)))));
  };
  auto sk = gaussian(p, letter);
  auto lhs = sk.apply(SxS(w));
  auto rhs = SxS(sk.apply(w));
  double num = 0;
  for (std::size_t i = 0; i < p.dim; ++i) {
    double d = scalar_traits<S>::to_double(lhs.c[i] - rhs.c[i]);
    num += d * d;
  }
  return std::sqrt(num);
}

// ---------------------------------------------------------------------------
// Khinchine witness
// ---------------------------------------------------------------------------

template <class S>
struct KhinchineWitness {
  S phi_value;      // contract: (n alpha)^k
  double psi_norm;  // n^{k/2}, the free-model l2 norm of T_k Omega
  double bound;     // (2k+1) n^{k/2}
  bool violated;    // |phi(T_k)| > bound, witnessing non-isometry
};

/// T_k = sum over even compositions (k_1,...,k_p) of 2k and alternating
/// index strings of u_{k_1}(s_{i_1}) ... u_{k_p}(s_{i_p}); returns phi(T_k)
/// from the matrix model together with the free-model data.
///
/// T_k Omega is assembled by the suffix recursion
///   W(m, j) = sum_{even 2a <= 2m} sum_{i != j} u_{2a}(s_i) W(m - a, i),
/// memoized over (m, j), so the n^k terms never get enumerated one by one.
template <class S>
KhinchineWitness<S> khinchine_witness(const FockParams<S>& p, int k) {
  if (k < 1) throw precondition_error("khinchine_witness: k >= 1");
  if (2 * k > p.L) throw truncation_error("khinchine_witness: needs 2k <= L");
  std::vector<Polynomial<S>> u;
  for (int d = 0; d <= 2 * k; ++d) u.push_back(u_poly(d, p));
  std::vector<SparseOperator<S>> gens;
  for (int i = 1; i <= p.n; ++i) gens.push_back(gaussian(p, i));

  // memo[m][j]: partial sums over words of total u-degree 2m whose leading
  // factor avoids generator j (j = 0: unrestricted)
  std::vector<std::vector<std::optional<FockVector<S>>>> memo(
      static_cast<std::size_t>(k) + 1,
      std::vector<std::optional<FockVector<S>>>(static_cast<std::size_t>(p.n) + 1));
  std::function<const FockVector<S>&(int, int)> w = [&](int m, int j) -> const FockVector<S>& {
    auto& slot = memo[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)];
    if (slot) return *slot;
    FockVector<S> acc(p.dim);
    if (m == 0) {
      acc.c[0] = S(1);
    } else {
      for (int a = 1; a <= m; ++a)
        for (int i = 1; i <= p.n; ++i) {
          if (i == j) continue;
          auto contrib = apply_polynomial(u[static_cast<std::size_t>(2 * a)],
                                          gens[static_cast<std::size_t>(i - 1)],
                                          w(m - a, i));
          for (std::size_t idx = 0; idx < p.dim; ++idx) acc.c[idx] += contrib.c[idx];
        }
    }
    slot = std::move(acc);
    return *slot;
  };

  KhinchineWitness<S> out;
  out.phi_value = w(k, 0).c[0];
  out.psi_norm = std::pow(static_cast<double>(p.n), k / 2.0);
  out.bound = (2 * k + 1) * out.psi_norm;
  out.violated = std::abs(scalar_traits<S>::to_double(out.phi_value)) > out.bound;
  return out;
}

// ---------------------------------------------------------------------------
// The n -> infinity shadow
// ---------------------------------------------------------------------------

/// || (1/k) sum_{i<=k} s_i^2 probe - ((1-t) <probe, Omega> Omega + t probe) ||
/// computed matrix-free; probe must live at levels <= L - 2.
inline double infinite_n_limit_residual(const FockParams<double>& p, int k_gens,
                                        const SparseVector<double>& probe) {
  if (k_gens < 1 || k_gens > p.n)
    throw precondition_error("infinite_n_limit: needs 1 <= k <= n");
  for (const auto& [idx, val] : probe)
    if (level_of_index(p, idx) > p.L - 2)
      throw truncation_error("infinite_n_limit: probe support exceeds L - 2");
  SparseVector<double> acc;
  for (int i = 1; i <= k_gens; ++i) {
    SparseVector<double> tmp;
    accumulate_gaussian_apply(p, i, probe, tmp);
    accumulate_gaussian_apply(p, i, tmp, acc);
  }
  double inv_k = 1.0 / k_gens;
  auto probe_at = [&](std::size_t idx) {
    auto it = probe.find(idx);
    return it == probe.end() ? 0.0 : it->second;
  };
  double omega_coeff = probe_at(0);
  double num = 0;
  SparseVector<double> target = probe;
  for (auto& [idx, val] : target) val *= p.t;
  target[0] += (1 - p.t) * omega_coeff;
  for (const auto& [idx, val] : acc) {
    auto it = target.find(idx);
    double d = inv_k * val - (it == target.end() ? 0.0 : it->second);
    num += d * d;
    if (it != target.end()) target.erase(it);
  }
  for (const auto& [idx, val] : target) num += val * val;
  return std::sqrt(num);
}

}  // namespace tgauss
