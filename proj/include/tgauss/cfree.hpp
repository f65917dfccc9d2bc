// Copyright 2026 The tgauss Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tgauss/spectra.hpp"

namespace tgauss {

// ---------------------------------------------------------------------------
// Marginal data: a pair of states on one polynomial algebra, given by moment
// sequences. Everything downstream is purely algebraic in these numbers.
// ---------------------------------------------------------------------------

template <class S>
struct MarginalPair {
  std::vector<S> phi_moments;  // m_0 = 1, m_1, ...
  std::vector<S> psi_moments;  // w_0 = 1, w_1, ...
  std::string label;

  MarginalPair(std::vector<S> phi, std::vector<S> psi, std::string lbl = {})
      : phi_moments(std::move(phi)),
        psi_moments(std::move(psi)),
        label(std::move(lbl)) {
    check_hankel_psd<S>(phi_moments, label + "/phi");
    check_hankel_psd<S>(psi_moments, label + "/psi");
  }
};

/// The t-gaussian marginal: phi the t-deformed law, psi the semicircle of
/// variance t (the scaled free gaussian behind the Calkin image).
template <class S>
MarginalPair<S> t_gaussian_marginal(const S& t, int order,
                                    const std::string& label = "t-gaussian") {
  auto phi = g_moment_series(GKind::s_t, t, 1, order);
  auto semi = g_moment_series(GKind::s_t, S(1), 1, order);
  std::vector<S> psi(semi.m.size(), S(0));
  S pw(1);  // t^{k/2}
  for (int k = 0; k <= order; k += 2) {
    psi[static_cast<std::size_t>(k)] = pw * semi.m[static_cast<std::size_t>(k)];
    pw = pw * t;
  }
  return MarginalPair<S>(std::move(phi.m), std::move(psi), label);
}

// ---------------------------------------------------------------------------
// Alternating words and the centering recursion
// ---------------------------------------------------------------------------

template <class S>
struct WordFactor {
  int index;  // 1-based marginal index
  Polynomial<S> poly;
};

template <class S>
using MixedWord = std::vector<WordFactor<S>>;

/// phi_i(P) resp. psi_i(P) against the stored moments.
template <class S>
S moment_functional(const MarginalPair<S>& m, const Polynomial<S>& p, bool psi) {
  const auto& mom = psi ? m.psi_moments : m.phi_moments;
  if (p.degree() >= static_cast<int>(mom.size()))
    throw precondition_error("moment_functional: insufficient moment order for '" +
                             m.label + "'");
  S acc(0);
  for (int d = 0; d <= p.degree(); ++d)
    acc += p.at(d) * mom[static_cast<std::size_t>(d)];
  return acc;
}

/// Adjacent-merge normal form: constant factors fold into the scalar
/// prefactor, consecutive equal indices multiply into one polynomial.
template <class S>
std::pair<S, MixedWord<S>> normalize_word(MixedWord<S> in) {
  S scalar(1);
  MixedWord<S> out;
  for (auto& f : in) {
    if (f.poly.degree() < 1) {
      scalar = scalar * (f.poly.is_zero() ? S(0) : f.poly.at(0));
      continue;
    }
    if (!out.empty() && out.back().index == f.index)
      out.back().poly = out.back().poly * f.poly;
    else
      out.push_back(std::move(f));
  }
  if (scalar_traits<S>::is_zero(scalar)) out.clear();
  return {std::move(scalar), std::move(out)};
}

namespace detail {

/// The centering recursion: write a_j = (a_j - psi(a_j)) + psi(a_j) at the
/// first non-centered position and expand; a fully psi-centered alternating
/// product factorizes under phi. phi_is_psi = true evaluates the free state
/// (phi_i := psi_i).
template <class S>
S mixed_moment_rec(std::span<const MarginalPair<S>> marg, MixedWord<S> raw,
                   bool phi_is_psi) {
  auto [scalar, w] = normalize_word(std::move(raw));
  if (w.empty()) return scalar;
  for (const auto& f : w)
    if (f.index < 1 || f.index > static_cast<int>(marg.size()))
      throw precondition_error("mixed moment: marginal index out of range");
  auto& margs = marg;
  auto phi_of = [&](const WordFactor<S>& f) {
    return moment_functional(margs[static_cast<std::size_t>(f.index - 1)], f.poly,
                             phi_is_psi);
  };
  auto psi_of = [&](const WordFactor<S>& f) {
    return moment_functional(margs[static_cast<std::size_t>(f.index - 1)], f.poly,
                             true);
  };
  if (w.size() == 1) return scalar * phi_of(w[0]);
  for (std::size_t j = 0; j < w.size(); ++j) {
    S c = psi_of(w[j]);
    if (scalar_traits<S>::is_zero(c)) continue;
    MixedWord<S> centered = w;
    centered[j].poly = centered[j].poly - Polynomial<S>::constant(c);
    MixedWord<S> dropped = w;
    dropped.erase(dropped.begin() + static_cast<std::ptrdiff_t>(j));
    return scalar * (mixed_moment_rec(marg, std::move(centered), phi_is_psi) +
                     c * mixed_moment_rec(marg, std::move(dropped), phi_is_psi));
  }
  S prod = scalar;
  for (const auto& f : w) prod = prod * phi_of(f);
  return prod;
}

}  // namespace detail

template <class S>
S cfree_mixed_moment(std::span<const MarginalPair<S>> marginals,
                     const MixedWord<S>& word) {
  return detail::mixed_moment_rec(marginals, word, false);
}

template <class S>
S free_mixed_moment(std::span<const MarginalPair<S>> marginals,
                    const MixedWord<S>& word) {
  return detail::mixed_moment_rec(marginals, word, true);
}

// ---------------------------------------------------------------------------
// The vector eta and the functional it represents on the matrix model
// ---------------------------------------------------------------------------

template <class S>
FockVector<S> eta_vector(const FockParams<S>& p) {
  if (p.L < 2)
    throw truncation_error("eta_vector: needs L >= 2");
  FockVector<S> eta(p.dim);
  eta.c[0] = S(1);
  S coeff = S(0) - p.sqrt_t * p.alpha;
  for (int i = 1; i <= p.n; ++i)
    eta.c[word_index(p, Word{i, i})] = coeff;
  return eta;
}

/// psi(x) = <x Omega, eta>, the trace of the scaled free image.
template <class S>
S psi_state(const FockParams<S>& p, const FockVector<S>& x_omega) {
  return inner_product(p, x_omega, eta_vector(p));
}

template <class S>
S psi_state(const FockParams<S>& p, const SparseOperator<S>& x) {
  return psi_state(p, x.apply(vacuum_vector(p)));
}

// ---------------------------------------------------------------------------
// Transform calculus: R-transforms, free and c-free convolution, CLT
// ---------------------------------------------------------------------------

/// R(z) = sum_{k>=1} r_k z^{k-1}; r[j] is the cumulant r_{j+1}.
template <class S>
struct RSeries {
  std::vector<S> r;
  int order() const { return static_cast<int>(r.size()); }
};

namespace detail {

template <class S>
FormalSeries<S> f_series(const CauchySeries<S>& mu, int order) {
  if (mu.order() < order)
    throw precondition_error("series order mismatch: need moments to order " +
                             std::to_string(order));
  FormalSeries<S> F(order + 1);
  for (int k = 0; k <= order; ++k) F[k + 1] = mu.m[static_cast<std::size_t>(k)];
  return F;
}

}  // namespace detail

/// Free cumulants from moments via series reversion of G.
template <class S>
RSeries<S> r_transform(const CauchySeries<S>& mu, int order) {
  auto F = detail::f_series(mu, order);
  auto V = series::revert(F);
  auto W = series::shift_down(V, 1);  // V/u, unit constant term
  auto invW = series::inverse(W);
  RSeries<S> out;
  out.r.assign(static_cast<std::size_t>(order), S(0));
  for (int j = 0; j < order; ++j) out.r[static_cast<std::size_t>(j)] = invW[j + 1];
  return out;
}

/// Moments from free cumulants: G = K^{<-1>} with K(u) = 1/u + R(u).
template <class S>
CauchySeries<S> moments_from_r(const RSeries<S>& r, int order) {
  if (r.order() < order)
    throw precondition_error("series order mismatch: need cumulants to order " +
                             std::to_string(order));
  const int P = order + 1;
  FormalSeries<S> A(P);  // 1 + u R(u)
  A[0] = S(1);
  for (int j = 0; j < order; ++j) A[j + 1] = r.r[static_cast<std::size_t>(j)];
  auto V = series::shift_up(series::inverse(A), 1);  // u/(1+uR)
  auto F = series::revert(V);
  std::vector<S> m(static_cast<std::size_t>(order) + 1);
  for (int k = 0; k <= order; ++k) m[static_cast<std::size_t>(k)] = F[k + 1];
  return CauchySeries<S>(std::move(m));
}

template <class S>
RSeries<S> add_r(const RSeries<S>& a, const RSeries<S>& b, int order) {
  if (a.order() < order || b.order() < order)
    throw precondition_error("series order mismatch in R addition");
  RSeries<S> out;
  out.r.assign(static_cast<std::size_t>(order), S(0));
  for (int j = 0; j < order; ++j)
    out.r[static_cast<std::size_t>(j)] =
        a.r[static_cast<std::size_t>(j)] + b.r[static_cast<std::size_t>(j)];
  return out;
}

template <class S>
RSeries<S> scale_r(const RSeries<S>& a, const S& c) {
  RSeries<S> out = a;
  for (auto& x : out.r) x = c * x;
  return out;
}

template <class S>
CauchySeries<S> free_convolution(const CauchySeries<S>& a, const CauchySeries<S>& b,
                                 int order) {
  auto ra = r_transform(a, order);
  auto rb = r_transform(b, order);
  return moments_from_r(add_r(ra, rb, order), order);
}

/// The c-free R-transform of a pair (mu, nu), defined through
/// G_mu(z) = 1/(z - R^c(G_nu(z))).
template <class S>
RSeries<S> cfree_r_transform(const CauchySeries<S>& mu, const CauchySeries<S>& nu,
                             int order) {
  auto Fmu = detail::f_series(mu, order);
  auto W = series::shift_down(Fmu, 1);
  auto invW = series::inverse(W);
  // D(w) = 1/w - 1/F_mu(w) = (1 - 1/W)/w
  FormalSeries<S> one_minus(invW.order());
  one_minus[0] = S(1) - invW[0];
  for (int k = 1; k <= invW.order(); ++k) one_minus[k] = S(0) - invW[k];
  auto D = series::shift_down(one_minus, 1);
  auto Wnu = series::revert(detail::f_series(nu, order));
  auto comp = series::compose(D, Wnu);
  RSeries<S> out;
  out.r.assign(static_cast<std::size_t>(order), S(0));
  for (int j = 0; j < order; ++j) out.r[static_cast<std::size_t>(j)] = comp[j];
  return out;
}

/// First-slot moments from a c-free R-transform and the (already convolved)
/// second slot: F_mu = w / (1 - w R^c(F_nu(w))).
template <class S>
CauchySeries<S> moments_from_cfree_r(const RSeries<S>& rc, const CauchySeries<S>& nu,
                                     int order) {
  if (rc.order() < order)
    throw precondition_error("series order mismatch in c-free reconstruction");
  const int P = order + 1;
  auto Fnu = detail::f_series(nu, order);
  FormalSeries<S> R(P);
  for (int j = 0; j < order; ++j) R[j] = rc.r[static_cast<std::size_t>(j)];
  auto B = series::compose(R, Fnu);
  FormalSeries<S> den(P);
  den[0] = S(1);
  auto wB = series::shift_up(B, 1);
  for (int k = 0; k <= P; ++k) den[k] = den[k] - wB[k];
  auto F = series::shift_up(series::inverse(den), 1);
  std::vector<S> m(static_cast<std::size_t>(order) + 1);
  for (int k = 0; k <= order; ++k) m[static_cast<std::size_t>(k)] = F[k + 1];
  return CauchySeries<S>(std::move(m));
}

template <class S>
using MeasurePairSeries = std::pair<CauchySeries<S>, CauchySeries<S>>;

/// (mu1, nu1) boxplus_c (mu2, nu2) = (mu, nu1 boxplus nu2), the first slot
/// through additive c-free R-transforms.
template <class S>
MeasurePairSeries<S> cfree_convolution(const MeasurePairSeries<S>& a,
                                       const MeasurePairSeries<S>& b, int order) {
  auto nu = free_convolution(a.second, b.second, order);
  auto rc = add_r(cfree_r_transform(a.first, a.second, order),
                  cfree_r_transform(b.first, b.second, order), order);
  auto mu = moments_from_cfree_r(rc, nu, order);
  return {std::move(mu), std::move(nu)};
}

/// N-fold c-free self-convolution via linearity of both transforms.
template <class S>
MeasurePairSeries<S> cfree_self_convolution(const MeasurePairSeries<S>& p, long N,
                                            int order) {
  if (N < 1) throw precondition_error("self convolution: N >= 1");
  S factor(static_cast<int>(N));
  auto rnu = scale_r(r_transform(p.second, order), factor);
  auto nu = moments_from_r(rnu, order);
  auto rc = scale_r(cfree_r_transform(p.first, p.second, order), factor);
  auto mu = moments_from_cfree_r(rc, nu, order);
  return {std::move(mu), std::move(nu)};
}

/// Rescale moments by lambda^k for the dilation x -> lambda x, with
/// lambda = N^{-1/2} applied exactly on even moments; odd moments must
/// vanish unless N^{1/2} exists in the scalar field.
template <class S>
CauchySeries<S> dilate_by_inv_sqrt(const CauchySeries<S>& mu, long N) {
  std::vector<S> m = mu.m;
  S bigN(static_cast<int>(N));
  std::optional<S> root = scalar_traits<S>::sqrt(bigN);
  S pw_even(1);
  for (int k = 1; k <= mu.order(); ++k) {
    auto& mk = m[static_cast<std::size_t>(k)];
    if (k % 2 == 0) {
      pw_even = pw_even * bigN;  // N^{k/2}
      mk = mk / pw_even;
    } else if (!scalar_traits<S>::is_zero(mk)) {
      if (!root)
        throw precondition_error(
            "dilate_by_inv_sqrt: odd moment with sqrt(N) outside the field");
      S denom = pw_even * *root;  // N^{(k-1)/2} sqrt(N)
      mk = mk / denom;
    }
  }
  return CauchySeries<S>(std::move(m));
}

/// Central limit flow: N-fold c-free self-convolution then 1/sqrt(N)
/// dilation; returns the first-slot moment series.
template <class S>
CauchySeries<S> cfree_clt(const MeasurePairSeries<S>& p, long N, int order) {
  if (p.first.order() < 2 || p.second.order() < 2 ||
      !scalar_traits<S>::is_zero(p.first.m[1]) ||
      !scalar_traits<S>::is_zero(p.second.m[1]))
    throw precondition_error("cfree_clt: pair must be centered");
  if (!(p.first.m[2] == S(1)))
    throw precondition_error("cfree_clt: first slot must have unit variance");
  auto conv = cfree_self_convolution(p, N, order);
  return dilate_by_inv_sqrt(conv.first, N);
}

// ---------------------------------------------------------------------------
// The boundary functional phi_r on u-polynomial words
// ---------------------------------------------------------------------------

struct URun {
  int index;   // which generator
  int degree;  // u-polynomial degree, >= 1
};

/// phi_r(u_{a_1}(X_{i_1}) ... u_{a_l}(X_{i_l})) = (r^2 alpha)^{sum a_j / 2}
/// when all degrees are even, 0 otherwise.
template <class S>
S phi_r_moment(std::span<const URun> word, const S& r, const FockParams<S>& p) {
  int total = 0;
  for (std::size_t j = 0; j < word.size(); ++j) {
    if (word[j].degree < 1)
      throw precondition_error("phi_r: u-degrees must be >= 1");
    if (j > 0 && word[j].index == word[j - 1].index)
      throw precondition_error("phi_r: adjacent indices must differ");
    if (word[j].degree % 2 == 1) return S(0);
    total += word[j].degree;
  }
  return pow_int(r * r * p.alpha, total / 2);
}

template <class S>
Polynomial<S> pow_poly(const Polynomial<S>& p, int e) {
  Polynomial<S> acc = Polynomial<S>::constant(S(1));
  for (int i = 0; i < e; ++i) acc = acc * p;
  return acc;
}

/// Moment sequence of the phi_r-restriction to one generator: the functional
/// with u-values (r^2 alpha)^{d/2} on even d, written back in the monomial
/// basis. At r = 1 this is the t-gaussian law.
template <class S>
std::vector<S> phi_r_marginal_moments(const S& r, const FockParams<S>& p,
                                      int order) {
  std::vector<Polynomial<S>> u;
  for (int d = 0; d <= order; ++d) u.push_back(u_poly(d, p));
  std::vector<S> mom(static_cast<std::size_t>(order) + 1, S(0));
  for (int k = 0; k <= order; ++k) {
    Polynomial<S> rest = Polynomial<S>::x();
    rest = pow_poly(rest, k);
    S acc(0);
    for (int d = k; d >= 0; --d) {
      if (rest.degree() < d) continue;
      S cd = rest.at(d) / u[static_cast<std::size_t>(d)].at(d);
      rest = rest - cd * u[static_cast<std::size_t>(d)];
      if (d % 2 == 0) acc += cd * pow_int(r * r * p.alpha, d / 2);
    }
    mom[static_cast<std::size_t>(k)] = acc;
  }
  return mom;
}

// ---------------------------------------------------------------------------
// The general orthonormal family and the density vector
// ---------------------------------------------------------------------------

namespace detail {

template <class S>
struct MarginalLadders {
  std::vector<Polynomial<S>> u;  // psi-orthonormal
  std::vector<Polynomial<S>> v;  // phi-orthonormal
};

template <class S>
MarginalLadders<S> build_ladders(const MarginalPair<S>& m, int v_count,
                                 int u_count) {
  MarginalLadders<S> out;
  if (v_count >= 0) {
    auto jac = jacobi_from_moments<S>(m.phi_moments);
    out.v = orthonormal_polynomials(jac, v_count);
  }
  if (u_count >= 0) {
    auto jac = jacobi_from_moments<S>(m.psi_moments);
    out.u = orthonormal_polynomials(jac, u_count);
  }
  return out;
}

template <class S>
MixedWord<S> word_product_factors(const std::vector<Run>& runs,
                                  const std::vector<MarginalLadders<S>>& lad,
                                  bool reversed_adjoint) {
  MixedWord<S> out;
  if (runs.empty()) return out;
  if (!reversed_adjoint) {
    for (std::size_t j = 0; j < runs.size(); ++j) {
      const auto& ld = lad[static_cast<std::size_t>(runs[j].letter - 1)];
      bool last = (j + 1 == runs.size());
      out.push_back({runs[j].letter,
                     last ? ld.v[static_cast<std::size_t>(runs[j].length)]
                          : ld.u[static_cast<std::size_t>(runs[j].length)]});
    }
  } else {
    for (std::size_t j = runs.size(); j-- > 0;) {
      const auto& ld = lad[static_cast<std::size_t>(runs[j].letter - 1)];
      bool last = (j + 1 == runs.size());
      out.push_back({runs[j].letter,
                     last ? ld.v[static_cast<std::size_t>(runs[j].length)]
                          : ld.u[static_cast<std::size_t>(runs[j].length)]});
    }
  }
  return out;
}

inline void enumerate_words_rec(int n, int len, Word& cur,
                                std::vector<Word>& out) {
  if (static_cast<int>(cur.size()) == len) {
    out.push_back(cur);
    return;
  }
  for (int i = 1; i <= n; ++i) {
    cur.push_back(i);
    enumerate_words_rec(n, len, cur, out);
    cur.pop_back();
  }
}

inline std::vector<Word> all_words(int n, int max_len) {
  std::vector<Word> out;
  Word cur;
  for (int len = 0; len <= max_len; ++len) enumerate_words_rec(n, len, cur, out);
  return out;
}

}  // namespace detail

/// Gram matrix of the run-encoded family
/// e_w = u_{a_1}(s_{i_1}) ... u_{a_{l-1}}(s_{i_{l-1}}) v_{a_l}(s_{i_l}) Omega
/// over all words up to max_len, computed through the mixed-moment engine.
template <class S>
std::vector<std::vector<S>> general_basis_gram(
    std::span<const MarginalPair<S>> marginals, int max_len) {
  const int n = static_cast<int>(marginals.size());
  if (n < 1) throw precondition_error("general_basis_gram: need marginals");
  std::vector<detail::MarginalLadders<S>> lad;
  for (const auto& m : marginals)
    lad.push_back(detail::build_ladders(m, max_len, std::max(0, max_len - 1)));
  auto words = detail::all_words(n, max_len);
  std::vector<std::vector<Run>> runs;
  runs.reserve(words.size());
  for (const auto& w : words) runs.push_back(word_runs(w));

  std::vector<std::vector<S>> gram(words.size(),
                                   std::vector<S>(words.size(), S(0)));
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t j = 0; j < words.size(); ++j) {
      MixedWord<S> prod =
          detail::word_product_factors(runs[j], lad, /*reversed_adjoint=*/true);
      auto rhs = detail::word_product_factors(runs[i], lad, false);
      prod.insert(prod.end(), rhs.begin(), rhs.end());
      gram[i][j] = cfree_mixed_moment(marginals, prod);
    }
  return gram;
}

/// Checks phi(c x) = psi(x) for c = 1 + sum_i (f_i - 1)(s_i), the f_i given
/// as polynomial densities of psi_i with respect to phi_i. Returns the two
/// sides. Rejects f_i of wrong mass or whose induced functional is not
/// positive at the available order.
template <class S>
std::pair<S, S> density_vector_check(std::span<const std::vector<S>> phi_moments,
                                     std::span<const Polynomial<S>> densities,
                                     const MixedWord<S>& word) {
  const int n = static_cast<int>(phi_moments.size());
  if (static_cast<int>(densities.size()) != n)
    throw precondition_error("density_vector_check: one density per marginal");
  std::vector<MarginalPair<S>> marg;
  for (int i = 0; i < n; ++i) {
    const auto& phi = phi_moments[static_cast<std::size_t>(i)];
    const auto& f = densities[static_cast<std::size_t>(i)];
    int order = static_cast<int>(phi.size()) - 1;
    int avail = order - std::max(f.degree(), 0);
    if (avail < 0)
      throw precondition_error("density_vector_check: density degree too high");
    // psi_i(x^k) = phi_i(f_i x^k)
    std::vector<S> psi(static_cast<std::size_t>(avail) + 1, S(0));
    for (int k = 0; k <= avail; ++k) {
      S acc(0);
      for (int d = 0; d <= f.degree(); ++d)
        acc += f.at(d) * phi[static_cast<std::size_t>(k + d)];
      psi[static_cast<std::size_t>(k)] = acc;
    }
    if (!(psi[0] == S(1)))
      throw precondition_error(
          "density_vector_check: f is not a phi-density (mass != 1)");
    marg.emplace_back(phi, std::move(psi), "marginal-" + std::to_string(i + 1));
  }
  std::span<const MarginalPair<S>> ms(marg);
  // phi(c x) = phi(x) + sum_i phi( (f_i - 1)(s_i) x )
  S phi_cx = cfree_mixed_moment(ms, word);
  for (int i = 0; i < n; ++i) {
    Polynomial<S> fbar =
        densities[static_cast<std::size_t>(i)] - Polynomial<S>::constant(S(1));
    MixedWord<S> w;
    w.push_back({i + 1, fbar});
    w.insert(w.end(), word.begin(), word.end());
    phi_cx += cfree_mixed_moment(ms, w);
  }
  S psi_x = free_mixed_moment(ms, word);
  return {phi_cx, psi_x};
}

}  // namespace tgauss
