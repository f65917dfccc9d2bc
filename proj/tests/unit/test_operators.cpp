// Copyright 2026 The tgauss Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tgauss/operators.hpp"

using namespace tgauss;

namespace {

/// Creation in the raw tensor basis with level weights t^(k-1), then
/// renormalized to the canonical basis: an independent route to the matrix
/// entries. l(e_i) x_w = x_{iw} on raw tensors x_w = sqrt(t)^(|w|-1) e_w.
Exact raw_creation_coefficient(const Rational& t, int target_level) {
  // coefficient of e_{iw} in l(e_i) e_w, |w| = target_level - 1
  int k = target_level - 1;
  if (k == 0) return Exact(1);  // l Omega = e_i, weights are sqrt(t)^0 both
  // e_w = x_w / sqrt(t)^(k-1); l x_w = x_{iw} = sqrt(t)^k e_{iw}
  Exact s = Exact::sqrt_t(t);
  Exact num = pow_int(s, k);
  Exact den = pow_int(s, k - 1);
  return num / den;
}

}  // namespace

TEST_CASE("creation: examples and raw-tensor oracle") {
  auto p = make_exact_params(Rational(2, 5), 2, 4);
  auto l1 = creation(p, 1);

  auto v = l1.apply(vacuum_vector(p));
  CHECK(v.c[word_index(p, {1})] == Exact(1));
  CHECK(norm2(v) == doctest::Approx(1.0));

  auto w = l1.apply(basis_vector(p, {2}));
  CHECK(w.c[word_index(p, {1, 2})] == p.sqrt_t);

  // top level maps to zero
  auto top = l1.apply(basis_vector(p, {1, 1, 1, 1}));
  CHECK(norm2(top) == 0.0);

  // every nonzero column agrees with the raw tensor computation
  l1.for_each_entry([&](std::size_t r, std::size_t c, const Exact& val) {
    int lr = level_of_index(p, r);
    CHECK(lr == level_of_index(p, c) + 1);
    CHECK(val == raw_creation_coefficient(Rational(2, 5), lr));
  });

  CHECK_THROWS_AS((void)creation(p, 3), precondition_error);
}

TEST_CASE("annihilation: examples and exact transpose of creation") {
  auto p = make_exact_params(Rational(2, 5), 2, 4);
  auto l1s = annihilation(p, 1);

  CHECK(norm2(l1s.apply(vacuum_vector(p))) == 0.0);
  CHECK(l1s.apply(basis_vector(p, {1})).c[0] == Exact(1));
  auto w = l1s.apply(basis_vector(p, {1, 2}));
  CHECK(w.c[word_index(p, {2})] == p.sqrt_t);
  CHECK(norm2(l1s.apply(basis_vector(p, {2, 1}))) == 0.0);

  for (int i = 1; i <= 2; ++i) {
    auto c = creation(p, i);
    auto a = annihilation(p, i);
    a.for_each_entry([&](std::size_t r, std::size_t cc, const Exact& val) {
      CHECK(c.entry(cc, r) == val);
    });
    CHECK(a.nnz() == c.nnz());
  }
}

TEST_CASE("gaussian is symmetric on the truncation interior") {
  auto p = make_exact_params(Rational(1, 3), 2, 4);
  for (int i = 1; i <= 2; ++i) {
    auto s = gaussian(p, i);
    REQUIRE(s.symmetric());
    CHECK(s.level_shift() == 1);
    s.for_each_entry([&](std::size_t r, std::size_t c, const Exact& val) {
      CHECK(s.entry(c, r) == val);
    });
  }
}

TEST_CASE("t-gaussian vacuum moments: normalization, Dyck oracle, Catalan") {
  const Rational t(2, 7);
  auto p = make_exact_params(t, 1, 6);
  auto s = gaussian(p, 1);

  CHECK(vacuum_moment(p, s, 2) == Exact(1));
  CHECK(vacuum_moment(p, s, 3) == Exact(0));
  CHECK(vacuum_moment(p, s, 4) == Exact(Rational(1) + t));
  // five weighted Dyck paths of length 6
  CHECK(vacuum_moment(p, s, 6) ==
        Exact(2 * t * t + 2 * t + Rational(1)));

  auto p10 = make_exact_params(t, 1, 5);
  auto s10 = gaussian(p10, 1);
  auto ms = vacuum_moments(p10, s10, 10);
  for (int k = 0; k <= 10; ++k) CHECK(ms[k] == oracle::t_gaussian_moment(t, k));

  auto p1 = make_exact_params(Rational(1), 1, 5);
  auto s1 = gaussian(p1, 1);
  for (int k = 0; k <= 5; ++k)
    CHECK(vacuum_moment(p1, s1, 2 * k) == Exact(Rational(oracle::catalan(k))));
}

TEST_CASE("single-generator distribution embeds: moments independent of i and n") {
  const Rational t(3, 4);
  auto ref = make_exact_params(t, 1, 5);
  auto expect = vacuum_moments(ref, gaussian(ref, 1), 10);
  for (int n = 2; n <= 3; ++n) {
    auto p = make_exact_params(t, n, 5);
    for (int i = 1; i <= n; ++i) {
      auto ms = vacuum_moments(p, gaussian(p, i), 10);
      for (int k = 0; k <= 10; ++k) CHECK(ms[k] == expect[k]);
    }
  }
}

TEST_CASE("vacuum_moment truncation soundness is enforced") {
  auto p = make_exact_params(Rational(1, 2), 1, 3);
  auto s = gaussian(p, 1);
  CHECK_NOTHROW((void)vacuum_moment(p, s, 6));
  CHECK_THROWS_AS((void)vacuum_moment(p, s, 8), truncation_error);
  auto c = c_operator(p);
  CHECK(c.level_shift() == 2);
  CHECK_NOTHROW((void)vacuum_moment(p, c, 3));
  CHECK_THROWS_AS((void)vacuum_moment(p, c, 4), truncation_error);
}

TEST_CASE("c operator: vacuum value, hand-expanded square, f_k relations") {
  for (int n : {1, 2, 3}) {
    const Rational t(2, 5);
    auto p = make_exact_params(t, n, 6);
    auto c = c_operator(p);
    REQUIRE(c.symmetric());
    CHECK(vacuum_moment(p, c, 1) == Exact(Rational(n)));
    // phi(c^2) = n(1+t) + n(n-1) by expanding s_i^2 s_j^2 Omega by hand
    CHECK(vacuum_moment(p, c, 2) ==
          Exact(Rational(n) * (1 + t) + Rational(n) * (n - 1)));
  }

  // c f_0 = (nt+1) f_0 + t f_1, c f_k = nt f_{k-1} + (n+1)t f_k + f_{k+1}
  // with f_k the level-(2k+1) pair-pattern sums suffixed by letter 1.
  const int n = 2;
  const Rational t(2, 5);
  auto p = make_exact_params(t, n, 9);
  auto c = c_operator(p);
  auto f = [&](int k) {
    FockVector<Exact> v(p.dim);
    // all words j_1 j_1 j_2 j_2 ... j_k j_k 1
    std::vector<int> js(static_cast<std::size_t>(k), 1);
    while (true) {
      Word w;
      for (int j : js) {
        w.push_back(j);
        w.push_back(j);
      }
      w.push_back(1);
      v.c[word_index(p, w)] = Exact(1);
      int pos = k - 1;
      while (pos >= 0 && js[pos] == n) --pos;
      if (pos < 0) break;
      ++js[pos];
      for (int q = pos + 1; q < k; ++q) js[q] = 1;
    }
    return v;
  };
  auto check_equal = [&](const FockVector<Exact>& a, const FockVector<Exact>& b,
                         int up_to_level) {
    for (std::size_t i = 0; i < p.level_offset[up_to_level + 1]; ++i)
      CHECK(a.c[i] == b.c[i]);
  };
  {
    auto lhs = c.apply(f(0));
    FockVector<Exact> rhs(p.dim);
    axpy(rhs, Exact(Rational(n) * t + 1), f(0));
    axpy(rhs, p.t, f(1));
    check_equal(lhs, rhs, p.L - 2);
  }
  for (int k = 1; k <= 3; ++k) {
    auto lhs = c.apply(f(k));
    FockVector<Exact> rhs(p.dim);
    axpy(rhs, Exact(Rational(n) * t), f(k - 1));
    axpy(rhs, Exact(Rational(n + 1) * t), f(k));
    axpy(rhs, Exact(1), f(k + 1));
    check_equal(lhs, rhs, 2 * k + 1);  // interior: f_{k+1} needs level 2k+3
  }
}

TEST_CASE("first quantization: identity, swap, covariance, unitarity") {
  const Rational t(2, 3);
  auto p = make_exact_params(t, 2, 4);

  std::vector<std::vector<Exact>> I2{{Exact(1), Exact(0)}, {Exact(0), Exact(1)}};
  auto gid = first_quantization(p, I2);
  for (std::size_t i = 0; i < p.dim; ++i) {
    FockVector<Exact> e(p.dim);
    e.c[i] = Exact(1);
    auto img = gid.apply(e);
    CHECK(img.c[i] == Exact(1));
  }

  std::vector<std::vector<Exact>> swap{{Exact(0), Exact(1)}, {Exact(1), Exact(0)}};
  auto gs = first_quantization(p, swap);
  CHECK(gs.apply(basis_vector(p, {1, 2})).c[word_index(p, {2, 1})] == Exact(1));

  // Gamma(U) s_1 Gamma(U)^* = s^t(U e_1) on the interior, U the swap
  auto lhs = matmul(p, matmul(p, gs, gaussian(p, 1), false), gs.transpose(p), false);
  auto omega_img = lhs.apply(vacuum_vector(p));
  CHECK(omega_img.c[word_index(p, {2})] == Exact(1));
  std::vector<Exact> dir{Exact(0), Exact(1)};  // U e_1 = e_2
  auto rhs = gaussian_direction(p, std::span<const Exact>(dir));
  for (std::size_t col = 0; col < p.level_offset[p.L]; ++col) {
    FockVector<Exact> e(p.dim);
    e.c[col] = Exact(1);
    auto a = lhs.apply(e), b = rhs.apply(e);
    for (std::size_t r = 0; r < p.level_offset[p.L]; ++r) CHECK(a.c[r] == b.c[r]);
  }

  std::vector<std::vector<Exact>> bad{{Exact(1), Exact(1)}, {Exact(0), Exact(1)}};
  CHECK_THROWS_AS((void)first_quantization(p, bad), precondition_error);
}

TEST_CASE("first quantization: random orthogonal U, Gamma(U) Gamma(U^T) = Id") {
  auto p = make_float_params(0.6, 3, 4);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0, 1);
  // Gram-Schmidt on a random 3x3
  std::vector<std::vector<double>> U(3, std::vector<double>(3));
  for (auto& row : U)
    for (auto& x : row) x = gauss(rng);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < i; ++j) {
      double dot = 0;
      for (int k = 0; k < 3; ++k) dot += U[i][k] * U[j][k];
      for (int k = 0; k < 3; ++k) U[i][k] -= dot * U[j][k];
    }
    double nrm = 0;
    for (int k = 0; k < 3; ++k) nrm += U[i][k] * U[i][k];
    nrm = std::sqrt(nrm);
    for (int k = 0; k < 3; ++k) U[i][k] /= nrm;
  }
  std::vector<std::vector<double>> Ut(3, std::vector<double>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) Ut[i][j] = U[j][i];

  auto g = first_quantization(p, U);
  auto gt = first_quantization(p, Ut);
  auto prod = matmul(p, g, gt, false);
  double max_err = 0;
  for (std::size_t i = 0; i < p.dim; ++i) {
    FockVector<double> e(p.dim);
    e.c[i] = 1.0;
    auto img = prod.apply(e);
    for (std::size_t r = 0; r < p.dim; ++r)
      max_err = std::max(max_err, std::abs(img.c[r] - (r == i ? 1.0 : 0.0)));
  }
  CHECK(max_err < 1e-10);
}

TEST_CASE("matrix-free gaussian application agrees with the matrix") {
  auto p = make_exact_params(Rational(1, 2), 3, 4);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(p.dim) - 1);
  for (int rep = 0; rep < 5; ++rep) {
    SparseVector<Exact> sv;
    FockVector<Exact> dv(p.dim);
    for (int j = 0; j < 6; ++j) {
      std::size_t idx = static_cast<std::size_t>(pick(rng));
      sv[idx] += Exact(j + 1);
      dv.c[idx] += Exact(j + 1);
    }
    for (int i = 1; i <= 3; ++i) {
      SparseVector<Exact> out;
      accumulate_gaussian_apply(p, i, sv, out);
      auto ref = gaussian(p, i).apply(dv);
      for (std::size_t idx = 0; idx < p.dim; ++idx) {
        Exact got = out.count(idx) ? out.at(idx) : Exact(0);
        CHECK(got == ref.c[idx]);
      }
    }
  }
}

TEST_CASE("operator norm estimates") {
  // identity
  auto p = make_float_params(1.0, 2, 3);
  std::vector<Triplet<double>> trips;
  for (std::size_t i = 0; i < p.dim; ++i) trips.push_back({i, i, 1.0});
  auto id = SparseOperator<double>::from_triplets(p, std::move(trips), true);
  auto est = operator_norm_estimate(id, 50, 1);
  CHECK(est.converged);
  CHECK(est.value == doctest::Approx(1.0).epsilon(1e-12));

  // s^1 at t=1, n=1, L=40: top eigenvalue of the 41-point free Jacobi matrix
  auto q = make_float_params(1.0, 1, 40);
  auto s = gaussian(q, 1);
  auto est2 = operator_norm_estimate(s, 20000, 2, 1e-12);
  CHECK(est2.value ==
        doctest::Approx(2 * std::cos(M_PI / 42)).epsilon(1e-7));

  // growing L approaches the spectral radius 2
  auto q2 = make_float_params(1.0, 1, 120);
  auto est3 = operator_norm_estimate(gaussian(q2, 1), 60000, 3, 1e-12);
  CHECK(est3.value > est2.value);
  CHECK(est3.value < 2.0);
  CHECK(2.0 - est3.value < 0.002);

  // non-converged flag with a tiny budget
  auto est4 = operator_norm_estimate(s, 2, 4, 1e-14);
  CHECK_FALSE(est4.converged);

  // c^t spectral top: inside the interval the truncations approach the bulk
  // edge t(1+sqrt n)^2 from below; outside, the atom n + 1/alpha dominates.
  {
    auto pc = make_float_params(1.0, 2, 14);
    auto c = c_operator(pc);
    auto e = operator_norm_estimate(c, 4000, 5, 1e-11);
    double edge = 1.0 * (1 + std::sqrt(2.0)) * (1 + std::sqrt(2.0));
    CHECK(e.value < edge);
    CHECK(edge - e.value < 0.35);
  }
  {
    auto pc = make_float_params(0.4, 2, 14);
    auto c = c_operator(pc);
    auto e = operator_norm_estimate(c, 4000, 6, 1e-11);
    double atom = 2 + 1.0 / (1.0 / 0.4 - 1.0);
    CHECK(e.value == doctest::Approx(atom).epsilon(1e-3));
  }
}
