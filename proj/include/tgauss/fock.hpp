// Copyright 2026 The tgauss Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "tgauss/scalar.hpp"

namespace tgauss {

/// A word in the letters 1..n indexing a canonical basis vector e_w; the
/// empty word is the vacuum.
using Word = std::vector<int>;

inline constexpr std::size_t kDefaultDimCap = 2'000'000;

/// Deformation context plus truncated-space geometry. The basis is the
/// canonical orthonormal one (level weights absorbed into the basis), words
/// enumerated graded then lexicographic, vacuum first.
template <class S>
struct FockParams {
  S t{};       // deformation parameter
  S sqrt_t{};  // sqrt(t) as a field element
  S alpha{};   // 1/t - 1
  int n = 1;   // number of generators / letters
  int L = 0;   // maximum word length kept
  std::size_t dim = 1;
  std::vector<std::size_t> level_offset;  // offset[k] = index of first word of length k; size L+2
  std::optional<Rational> t_rational;     // defined in exact mode

  bool same_geometry(const FockParams& o) const {
    return n == o.n && L == o.L && dim == o.dim;
  }
};

namespace detail {

inline std::vector<std::size_t> build_offsets(int n, int L, std::size_t cap,
                                              std::size_t& dim_out) {
  std::vector<std::size_t> off(static_cast<std::size_t>(L) + 2, 0);
  unsigned __int128 dim = 0, pw = 1;
  for (int k = 0; k <= L; ++k) {
    off[k] = static_cast<std::size_t>(dim);
    dim += pw;
    if (dim > cap)
      throw precondition_error(
          "basis dimension exceeds the size cap: infeasible truncation (n=" +
          std::to_string(n) + ", L=" + std::to_string(L) + ")");
    pw *= static_cast<unsigned>(n);
  }
  off[L + 1] = static_cast<std::size_t>(dim);
  dim_out = static_cast<std::size_t>(dim);
  return off;
}

}  // namespace detail

inline FockParams<Exact> make_exact_params(const Rational& t, int n, int L,
                                           std::size_t cap = kDefaultDimCap) {
  if (t <= 0) throw precondition_error("t must be positive");
  if (n < 1) throw precondition_error("n must be >= 1");
  if (L < 0) throw precondition_error("L must be >= 0");
  FockParams<Exact> p;
  p.t = Exact::with_t(t, 0, t);
  p.sqrt_t = Exact::sqrt_t(t);
  p.alpha = Exact::with_t(Rational(1) / t - 1, 0, t);
  p.n = n;
  p.L = L;
  p.t_rational = t;
  p.level_offset = detail::build_offsets(n, L, cap, p.dim);
  return p;
}

inline FockParams<double> make_float_params(double t, int n, int L,
                                            std::size_t cap = kDefaultDimCap) {
  if (!(t > 0)) throw precondition_error("t must be positive");
  if (n < 1) throw precondition_error("n must be >= 1");
  if (L < 0) throw precondition_error("L must be >= 0");
  FockParams<double> p;
  p.t = t;
  p.sqrt_t = std::sqrt(t);
  p.alpha = 1.0 / t - 1.0;
  p.n = n;
  p.L = L;
  p.level_offset = detail::build_offsets(n, L, cap, p.dim);
  return p;
}

// ---------------------------------------------------------------------------
// Word <-> index arithmetic. Graded-lex: all words of length k precede length
// k+1; within a level the word reads as a base-n number, first letter most
// significant.
// ---------------------------------------------------------------------------

template <class S>
std::size_t words_at_level(const FockParams<S>& p, int k) {
  return p.level_offset[k + 1] - p.level_offset[k];
}

template <class S>
int level_of_index(const FockParams<S>& p, std::size_t idx) {
  if (idx >= p.dim) throw precondition_error("index out of range");
  int k = 0;
  while (p.level_offset[k + 1] <= idx) ++k;
  return k;
}

template <class S>
std::size_t word_index(const FockParams<S>& p, const Word& w) {
  if (static_cast<int>(w.size()) > p.L)
    throw truncation_error("word longer than truncation level L");
  std::size_t v = 0;
  for (int letter : w) {
    if (letter < 1 || letter > p.n)
      throw precondition_error("letter out of range 1..n");
    v = v * static_cast<std::size_t>(p.n) + static_cast<std::size_t>(letter - 1);
  }
  return p.level_offset[w.size()] + v;
}

template <class S>
Word word_of_index(const FockParams<S>& p, std::size_t idx) {
  int k = level_of_index(p, idx);
  std::size_t v = idx - p.level_offset[k];
  Word w(static_cast<std::size_t>(k));
  for (int j = k - 1; j >= 0; --j) {
    w[j] = static_cast<int>(v % static_cast<std::size_t>(p.n)) + 1;
    v /= static_cast<std::size_t>(p.n);
  }
  return w;
}

/// All words in graded-lex order; vacuum first. Materializes the full basis,
/// so only sensible below the cap (which construction already enforced).
template <class S>
std::vector<Word> enumerate_basis(const FockParams<S>& p) {
  std::vector<Word> basis;
  basis.reserve(p.dim);
  for (std::size_t i = 0; i < p.dim; ++i) basis.push_back(word_of_index(p, i));
  return basis;
}

// O(1) index moves used by all operator kernels.

/// Index of i.w given index of w at level k < L.
template <class S>
std::size_t prepend_index(const FockParams<S>& p, int i, std::size_t idx, int k) {
  std::size_t v = idx - p.level_offset[k];
  std::size_t nk = words_at_level(p, k);  // n^k
  return p.level_offset[k + 1] + static_cast<std::size_t>(i - 1) * nk + v;
}

/// First letter of the word at idx (level k >= 1).
template <class S>
int first_letter(const FockParams<S>& p, std::size_t idx, int k) {
  std::size_t v = idx - p.level_offset[k];
  std::size_t nk1 = words_at_level(p, k - 1);  // n^(k-1)
  return static_cast<int>(v / nk1) + 1;
}

/// Index of the word with its first letter removed (level k >= 1).
template <class S>
std::size_t drop_first_index(const FockParams<S>& p, std::size_t idx, int k) {
  std::size_t v = idx - p.level_offset[k];
  std::size_t nk1 = words_at_level(p, k - 1);
  return p.level_offset[k - 1] + v % nk1;
}

// ---------------------------------------------------------------------------
// Vectors
// ---------------------------------------------------------------------------

template <class S>
struct FockVector {
  std::vector<S> c;

  FockVector() = default;
  explicit FockVector(std::size_t dim) : c(dim, S(0)) {}
  std::size_t dim() const { return c.size(); }
};

/// Sparse coefficient map, for spaces too large to hold densely.
template <class S>
using SparseVector = std::unordered_map<std::size_t, S>;

template <class S>
FockVector<S> vacuum_vector(const FockParams<S>& p) {
  FockVector<S> v(p.dim);
  v.c[0] = S(1);
  return v;
}

template <class S>
FockVector<S> basis_vector(const FockParams<S>& p, const Word& w) {
  FockVector<S> v(p.dim);
  v.c[word_index(p, w)] = S(1);
  return v;
}

template <class S>
S inner_product(const FockParams<S>& p, const FockVector<S>& u,
                const FockVector<S>& v) {
  if (u.dim() != p.dim || v.dim() != p.dim)
    throw precondition_error("inner_product: vector/params mismatch");
  S acc(0);
  for (std::size_t i = 0; i < p.dim; ++i) acc += u.c[i] * v.c[i];
  return acc;
}

template <class S>
void axpy(FockVector<S>& y, const S& a, const FockVector<S>& x) {
  if (y.dim() != x.dim()) throw precondition_error("axpy: dimension mismatch");
  for (std::size_t i = 0; i < y.dim(); ++i) y.c[i] += a * x.c[i];
}

template <class S>
double norm2(const FockVector<S>& v) {
  double acc = 0;
  for (const auto& x : v.c) {
    double d = scalar_traits<S>::to_double(x);
    acc += d * d;
  }
  return std::sqrt(acc);
}

/// Euclidean norm of the part of v living at levels <= max_level.
template <class S>
double norm2_up_to_level(const FockParams<S>& p, const FockVector<S>& v,
                         int max_level) {
  double acc = 0;
  std::size_t end = p.level_offset[std::min(max_level + 1, p.L + 1)];
  for (std::size_t i = 0; i < end; ++i) {
    double d = scalar_traits<S>::to_double(v.c[i]);
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace tgauss
