// Copyright 2026 The tgauss Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <random>
#include <span>
#include <vector>

#include "tgauss/fock.hpp"

namespace tgauss {

template <class S>
struct Triplet {
  std::size_t row, col;
  S value;
};

/// Sparse matrix over S acting on the truncated Fock space, CSR storage.
/// Immutable after construction; apply is pure. level_shift records the
/// largest |level(row)-level(col)| over entries, the data truncation
/// soundness checks run on.
template <class S>
class SparseOperator {
 public:
  SparseOperator() = default;

  template <class P>
  static SparseOperator from_triplets(const FockParams<P>& geom,
                                      std::vector<Triplet<S>> trips,
                                      bool symmetric) {
    SparseOperator op;
    op.dim_ = geom.dim;
    op.symmetric_ = symmetric;
    std::sort(trips.begin(), trips.end(), [](const auto& a, const auto& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    op.row_ptr_.assign(op.dim_ + 1, 0);
    for (std::size_t k = 0; k < trips.size();) {
      std::size_t j = k + 1;
      S acc = trips[k].value;
      while (j < trips.size() && trips[j].row == trips[k].row &&
             trips[j].col == trips[k].col)
        acc += trips[j++].value;
      if (!scalar_traits<S>::is_zero(acc)) {
        op.col_.push_back(trips[k].col);
        op.val_.push_back(acc);
        ++op.row_ptr_[trips[k].row + 1];
        int lr = level_of_index(geom, trips[k].row);
        int lc = level_of_index(geom, trips[k].col);
        op.level_shift_ = std::max(op.level_shift_, std::abs(lr - lc));
      }
      k = j;
    }
    for (std::size_t r = 0; r < op.dim_; ++r) op.row_ptr_[r + 1] += op.row_ptr_[r];
    return op;
  }

  std::size_t dim() const { return dim_; }
  bool symmetric() const { return symmetric_; }
  int level_shift() const { return level_shift_; }
  std::size_t nnz() const { return val_.size(); }

  FockVector<S> apply(const FockVector<S>& v) const {
    if (v.dim() != dim_) throw precondition_error("apply: dimension mismatch");
    FockVector<S> out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
      S acc(0);
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
        acc += val_[k] * v.c[col_[k]];
      out.c[r] = acc;
    }
    return out;
  }

  FockVector<S> apply_transpose(const FockVector<S>& v) const {
    if (v.dim() != dim_) throw precondition_error("apply: dimension mismatch");
    FockVector<S> out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
      if (scalar_traits<S>::is_zero(v.c[r])) continue;
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
        out.c[col_[k]] += val_[k] * v.c[r];
    }
    return out;
  }

  S entry(std::size_t r, std::size_t c) const {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      if (col_[k] == c) return val_[k];
    return S(0);
  }

  template <class F>
  void for_each_entry(F&& f) const {
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
        f(r, col_[k], val_[k]);
  }

  SparseOperator<double> to_float() const {
    SparseOperator<double> op;
    op.dim_ = dim_;
    op.symmetric_ = symmetric_;
    op.level_shift_ = level_shift_;
    op.row_ptr_ = row_ptr_;
    op.col_ = col_;
    op.val_.reserve(val_.size());
    for (const auto& v : val_) op.val_.push_back(scalar_traits<S>::to_double(v));
    return op;
  }

  template <class P>
  SparseOperator transpose(const FockParams<P>& geom) const {
    std::vector<Triplet<S>> trips;
    trips.reserve(val_.size());
    for_each_entry([&](std::size_t r, std::size_t c, const S& v) {
      trips.push_back({c, r, v});
    });
    return from_triplets(geom, std::move(trips), symmetric_);
  }

  template <class P>
  friend SparseOperator add(const FockParams<P>& geom, const SparseOperator& a,
                            const SparseOperator& b, const S& ca, const S& cb) {
    std::vector<Triplet<S>> trips;
    trips.reserve(a.nnz() + b.nnz());
    a.for_each_entry([&](std::size_t r, std::size_t c, const S& v) {
      trips.push_back({r, c, ca * v});
    });
    b.for_each_entry([&](std::size_t r, std::size_t c, const S& v) {
      trips.push_back({r, c, cb * v});
    });
    return from_triplets(geom, std::move(trips),
                         a.symmetric_ && b.symmetric_);
  }

  template <class P>
  friend SparseOperator matmul(const FockParams<P>& geom,
                               const SparseOperator& a,
                               const SparseOperator& b, bool symmetric_hint) {
    if (a.dim_ != b.dim_) throw precondition_error("matmul: dimension mismatch");
    std::vector<Triplet<S>> trips;
    std::vector<S> scratch(a.dim_, S(0));
    std::vector<std::size_t> touched;
    for (std::size_t r = 0; r < a.dim_; ++r) {
      touched.clear();
      for (std::size_t ka = a.row_ptr_[r]; ka < a.row_ptr_[r + 1]; ++ka) {
        std::size_t mid = a.col_[ka];
        for (std::size_t kb = b.row_ptr_[mid]; kb < b.row_ptr_[mid + 1]; ++kb) {
          std::size_t c = b.col_[kb];
          if (scalar_traits<S>::is_zero(scratch[c])) touched.push_back(c);
          scratch[c] += a.val_[ka] * b.val_[kb];
        }
      }
      for (std::size_t c : touched) {
        if (!scalar_traits<S>::is_zero(scratch[c]))
          trips.push_back({r, c, scratch[c]});
        scratch[c] = S(0);
      }
    }
    return from_triplets(geom, std::move(trips), symmetric_hint);
  }

  template <class>
  friend class SparseOperator;

 private:
  std::size_t dim_ = 0;
  bool symmetric_ = false;
  int level_shift_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_;
  std::vector<S> val_;
};

// ---------------------------------------------------------------------------
// Matrix-free kernels. Creation maps the vacuum to e_i with weight 1 and a
// word of length k >= 1 to sqrt(t) e_{i w}; words at the top level map to 0
// (compression convention). Annihilation is the transpose.
// ---------------------------------------------------------------------------

template <class S, class Sink>
void for_each_creation_image(const FockParams<S>& p, int i, std::size_t idx,
                             int level, Sink&& sink) {
  if (level >= p.L) return;  // truncated
  sink(prepend_index(p, i, idx, level), level == 0 ? S(1) : p.sqrt_t);
}

template <class S, class Sink>
void for_each_annihilation_image(const FockParams<S>& p, int i, std::size_t idx,
                                 int level, Sink&& sink) {
  if (level == 0) return;
  if (first_letter(p, idx, level) != i) return;
  sink(drop_first_index(p, idx, level), level == 1 ? S(1) : p.sqrt_t);
}

template <class S>
void check_letter(const FockParams<S>& p, int i) {
  if (i < 1 || i > p.n) throw precondition_error("letter out of range 1..n");
}

/// Applies s_i = l_i + l_i^* to a sparse vector, accumulating into out.
template <class S>
void accumulate_gaussian_apply(const FockParams<S>& p, int i,
                               const SparseVector<S>& in, SparseVector<S>& out,
                               const S& scale = S(1)) {
  check_letter(p, i);
  for (const auto& [idx, coeff] : in) {
    int k = level_of_index(p, idx);
    auto sink = [&](std::size_t j, const S& w) { out[j] += scale * w * coeff; };
    for_each_creation_image(p, i, idx, k, sink);
    for_each_annihilation_image(p, i, idx, k, sink);
  }
}

// ---------------------------------------------------------------------------
// Operator constructors
// ---------------------------------------------------------------------------

template <class S>
SparseOperator<S> creation(const FockParams<S>& p, int i) {
  check_letter(p, i);
  std::vector<Triplet<S>> trips;
  for (int k = 0; k < p.L; ++k)
    for (std::size_t idx = p.level_offset[k]; idx < p.level_offset[k + 1]; ++idx)
      for_each_creation_image(p, i, idx, k, [&](std::size_t r, const S& v) {
        trips.push_back({r, idx, v});
      });
  return SparseOperator<S>::from_triplets(p, std::move(trips), false);
}

template <class S>
SparseOperator<S> annihilation(const FockParams<S>& p, int i) {
  return creation(p, i).transpose(p);
}

template <class S>
SparseOperator<S> gaussian(const FockParams<S>& p, int i) {
  check_letter(p, i);
  std::vector<Triplet<S>> trips;
  for (int k = 0; k < p.L; ++k)
    for (std::size_t idx = p.level_offset[k]; idx < p.level_offset[k + 1]; ++idx)
      for_each_creation_image(p, i, idx, k, [&](std::size_t r, const S& v) {
        trips.push_back({r, idx, v});
        trips.push_back({idx, r, v});
      });
  return SparseOperator<S>::from_triplets(p, std::move(trips), true);
}

/// s(e) for a direction e = sum_i coeffs[i] e_i.
template <class S>
SparseOperator<S> gaussian_direction(const FockParams<S>& p,
                                     std::span<const S> coeffs) {
  if (static_cast<int>(coeffs.size()) != p.n)
    throw precondition_error("direction must have n coefficients");
  std::vector<Triplet<S>> trips;
  for (int i = 1; i <= p.n; ++i) {
    if (scalar_traits<S>::is_zero(coeffs[i - 1])) continue;
    for (int k = 0; k < p.L; ++k)
      for (std::size_t idx = p.level_offset[k]; idx < p.level_offset[k + 1]; ++idx)
        for_each_creation_image(p, i, idx, k, [&](std::size_t r, const S& v) {
          trips.push_back({r, idx, coeffs[i - 1] * v});
          trips.push_back({idx, r, coeffs[i - 1] * v});
        });
  }
  return SparseOperator<S>::from_triplets(p, std::move(trips), true);
}

/// c = s_1^2 + ... + s_n^2, built by sparse square-and-sum.
template <class S>
SparseOperator<S> c_operator(const FockParams<S>& p) {
  SparseOperator<S> acc;
  for (int i = 1; i <= p.n; ++i) {
    auto s = gaussian(p, i);
    auto s2 = matmul(p, s, s, true);
    acc = (i == 1) ? s2 : add(p, acc, s2, S(1), S(1));
  }
  return acc;
}

/// Gamma(U) = Id on C Omega, U^{(x) k} on level k. U must be orthogonal:
/// exactly in exact mode, within 1e-12 otherwise.
template <class S>
SparseOperator<S> first_quantization(const FockParams<S>& p,
                                     const std::vector<std::vector<S>>& U) {
  if (static_cast<int>(U.size()) != p.n)
    throw precondition_error("U must be n x n");
  for (const auto& row : U)
    if (static_cast<int>(row.size()) != p.n)
      throw precondition_error("U must be n x n");
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j) {
      S dot(0);
      for (int k = 0; k < p.n; ++k) dot += U[k][i] * U[k][j];
      S target = i == j ? S(1) : S(0);
      if constexpr (scalar_traits<S>::is_exact) {
        if (dot != target)
          throw precondition_error("first_quantization: U not exactly orthogonal");
      } else {
        if (std::abs(dot - target) > 1e-12)
          throw precondition_error("first_quantization: U not orthogonal within 1e-12");
      }
    }

  std::vector<Triplet<S>> trips;
  trips.push_back({0, 0, S(1)});
  // expand each column level by level: entries of U^{(x) k} are products of
  // per-letter entries
  struct Partial {
    std::size_t digits;  // value of the image word prefix in base n
    S weight;
  };
  for (int k = 1; k <= p.L; ++k) {
    for (std::size_t idx = p.level_offset[k]; idx < p.level_offset[k + 1]; ++idx) {
      Word w = word_of_index(p, idx);
      std::vector<Partial> frontier{{0, S(1)}};
      for (int pos = 0; pos < k; ++pos) {
        std::vector<Partial> next;
        next.reserve(frontier.size() * static_cast<std::size_t>(p.n));
        for (const auto& f : frontier)
          for (int i = 1; i <= p.n; ++i) {
            const S& u = U[i - 1][w[pos] - 1];
            if (scalar_traits<S>::is_zero(u)) continue;
            next.push_back({f.digits * static_cast<std::size_t>(p.n) +
                                static_cast<std::size_t>(i - 1),
                            f.weight * u});
          }
        frontier = std::move(next);
      }
      for (const auto& f : frontier)
        trips.push_back({p.level_offset[k] + f.digits, idx, f.weight});
    }
  }
  return SparseOperator<S>::from_triplets(p, std::move(trips), false);
}

// ---------------------------------------------------------------------------
// Vacuum moments
// ---------------------------------------------------------------------------

/// Largest power whose vacuum moment the truncation evaluates exactly:
/// a contributing path of k steps with per-step level shift <= s never
/// rises above floor(k s / 2).
template <class S>
bool vacuum_moment_sound(const FockParams<S>& p, const SparseOperator<S>& op,
                         int k) {
  return (static_cast<long>(k) * op.level_shift()) / 2 <= p.L;
}

template <class S>
S vacuum_moment(const FockParams<S>& p, const SparseOperator<S>& op, int k) {
  if (k < 0) throw precondition_error("vacuum_moment: k must be >= 0");
  if (!vacuum_moment_sound(p, op, k))
    throw truncation_error(
        "vacuum_moment: truncation unsound, need floor(k*shift/2) <= L (k=" +
        std::to_string(k) + ", shift=" + std::to_string(op.level_shift()) +
        ", L=" + std::to_string(p.L) + ")");
  FockVector<S> v = vacuum_vector(p);
  for (int j = 0; j < k; ++j) v = op.apply(v);
  return v.c[0];
}

/// All vacuum moments up to k_max in one sweep.
template <class S>
std::vector<S> vacuum_moments(const FockParams<S>& p,
                              const SparseOperator<S>& op, int k_max) {
  if (!vacuum_moment_sound(p, op, k_max))
    throw truncation_error("vacuum_moments: truncation unsound at k_max");
  std::vector<S> out;
  out.reserve(static_cast<std::size_t>(k_max) + 1);
  FockVector<S> v = vacuum_vector(p);
  out.push_back(v.c[0]);
  for (int j = 1; j <= k_max; ++j) {
    v = op.apply(v);
    out.push_back(v.c[0]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spectral norm estimation (power iteration on A^2 resp. A^T A)
// ---------------------------------------------------------------------------

struct NormEstimate {
  double value = 0;        // lower bound on the spectral norm
  double residual = 1;     // relative residual of the squared-operator eigenpair
  bool converged = false;
  int iterations = 0;
};

inline NormEstimate operator_norm_estimate(const SparseOperator<double>& op,
                                           int iterations, std::uint64_t seed,
                                           double tol = 1e-10) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  FockVector<double> v(op.dim());
  for (auto& x : v.c) x = dist(rng);
  double nv = norm2(v);
  for (auto& x : v.c) x /= nv;

  NormEstimate est;
  double mu = 0;
  for (int it = 1; it <= iterations; ++it) {
    FockVector<double> w =
        op.symmetric() ? op.apply(op.apply(v)) : op.apply_transpose(op.apply(v));
    mu = 0;
    for (std::size_t i = 0; i < v.dim(); ++i) mu += v.c[i] * w.c[i];
    double res = 0;
    for (std::size_t i = 0; i < v.dim(); ++i) {
      double d = w.c[i] - mu * v.c[i];
      res += d * d;
    }
    res = std::sqrt(res);
    est.iterations = it;
    est.residual = mu > 0 ? res / mu : res;
    double nw = norm2(w);
    if (nw == 0) {  // operator is zero on the Krylov space
      est.value = 0;
      est.converged = true;
      return est;
    }
    for (std::size_t i = 0; i < v.dim(); ++i) v.c[i] = w.c[i] / nw;
    if (est.residual <= tol) {
      est.converged = true;
      break;
    }
  }
  est.value = mu > 0 ? std::sqrt(mu) : 0;
  return est;
}

}  // namespace tgauss
