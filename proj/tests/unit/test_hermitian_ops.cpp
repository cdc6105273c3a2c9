// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "twodevp/matrix_market.hpp"
#include "twodevp/operators.hpp"

using namespace twodevp;

namespace {

Vec random_vec(Index n, std::mt19937_64& g) {
  std::normal_distribution<double> d;
  Vec v(n);
  for (Index i = 0; i < n; ++i) v(i) = cplx(d(g), d(g));
  return v;
}

// <u, M v> = conj(<v, M u>) on 100 random pairs
void check_hermitian(const HermitianOperator& op, double scale) {
  std::mt19937_64 g(7);
  for (int t = 0; t < 100; ++t) {
    const Vec u = random_vec(op.dim(), g), v = random_vec(op.dim(), g);
    const cplx l = u.dot(op * v);
    const cplx r = std::conj(v.dot(op * u));
    CHECK(std::abs(l - r) <= 1e-12 * scale * u.norm() * v.norm());
  }
}

Mat dense_kron(const Mat& f, const Vec& g) {
  const Index m = f.rows();
  const Mat gg = g * g.adjoint();
  Mat k(m * m, m * m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      for (Index p = 0; p < m; ++p)
        for (Index q = 0; q < m; ++q) k(i * m + j, p * m + q) = f(i, p) * gg(j, q);
  return k;
}

// L and B straight from the printed formulas
void orr_factors(Index n, double re, Mat& l, Mat& b) {
  const double h = 2.0 / static_cast<double>(n + 1);
  l = Mat::Zero(n, n);
  Mat u = Mat::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    l(k, k) = -(2.0 + h * h) / (h * h);
    if (k + 1 < n) l(k, k + 1) = l(k + 1, k) = 1.0 / (h * h);
    const double uk = -1.0 + static_cast<double>(k + 1) * h;
    u(k, k) = 1.0 - uk * uk;
  }
  b = l * l / re - kI * (u * l + 2.0 * Mat::Identity(n, n));
}

}  // namespace

TEST_CASE("example 6.1 entries and its exact triplet") {
  const HermitianPair p = build_example61();
  CHECK(p.dense_a()(0, 0) == cplx(-0.7));
  CHECK(p.dense_c()(2, 2) == cplx(-1.0));
  CHECK(p.c_indefinite());
  Vec x(3);
  x << 0.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const Vec y = p.apply(Which::shifted, 1.0, x);
  CHECK((y - x).norm() <= 1e-15);
}

TEST_CASE("shift zero equals A") {
  const HermitianPair p = random_indefinite_pair(6, 3);
  std::mt19937_64 g(1);
  const Vec x = random_vec(6, g);
  CHECK((p.apply(Which::shifted, 0.0, x) - p.apply(Which::A, 0.0, x)).norm() == 0.0);
  const double mu = 0.37;
  const Vec d = p.apply(Which::A, 0, x) - mu * p.apply(Which::C, 0, x);
  CHECK((p.apply(Which::shifted, mu, x) - d).norm() <= 1e-14 * d.norm());
}

TEST_CASE("scalar DTI embedding") {
  Mat ahat(1, 1);
  ahat << -1.0;
  const DtiBlockPair bp = build_dti_pair(ahat);
  Vec e(2);
  e << 1.0, 0.0;
  const Vec cx = bp.pair.apply(Which::C, 0.0, e);
  CHECK(std::abs(cx(0)) == 0.0);
  CHECK(std::abs(cx(1) - cplx(0.0, -1.0)) == 0.0);

  Mat a(2, 2), c(2, 2);
  a << 0.0, -1.0, -1.0, 0.0;
  c << 0.0, kI, -kI, 0.0;
  CHECK((bp.pair.a().dense() - a).norm() == 0.0);
  CHECK((bp.pair.c().dense() - c).norm() == 0.0);
  for (double mu : {-2.0, 0.0, 0.5, 3.0}) {
    const RVec ev = linalg::hermitian_eig(a - mu * c).values;
    CHECK(ev(1) == doctest::Approx(std::sqrt(1.0 + mu * mu)).epsilon(1e-14));
    CHECK(ev(0) == doctest::Approx(-std::sqrt(1.0 + mu * mu)).epsilon(1e-14));
  }
}

TEST_CASE("DTI block norms") {
  const auto src = random_stable_matrix(30, 5);
  const DtiBlockPair bp = build_dti_pair(src);
  CHECK(bp.pair.c_norm() == 1.0);
  const Mat a = bp.pair.a().dense();
  const double exact = linalg::hermitian_eig(a).values.cwiseAbs().maxCoeff();
  Eigen::JacobiSVD<Mat> svd(*src->dense());
  CHECK(bp.ahat_norm == doctest::Approx(exact).epsilon(1e-10));
  CHECK(bp.ahat_norm == doctest::Approx(svd.singularValues()(0)).epsilon(1e-10));
  check_hermitian(bp.pair.a(), bp.ahat_norm);
  check_hermitian(bp.pair.c(), 1.0);
}

TEST_CASE("Orr-Sommerfeld n = 3 factors") {
  const auto s = build_orr_sommerfeld(3, 1000.0);
  CHECK(s->lhs()(0, 0) == cplx(-9.0));
  CHECK(s->lhs()(0, 1) == cplx(4.0));
  CHECK(s->lhs()(1, 0) == cplx(4.0));
  // U recovered from B = L^2/Re - i(UL + 2I)
  const Mat l = s->lhs().dense(), b = s->rhs().dense();
  const Mat ul = kI * (b - l * l / 1000.0) - 2.0 * Mat::Identity(3, 3);
  const Mat u = ul * l.inverse();
  CHECK(std::abs(u(0, 0) - 0.75) <= 1e-13);
  CHECK(std::abs(u(1, 1) - 1.0) <= 1e-13);
  CHECK(std::abs(u(2, 2) - 0.75) <= 1e-13);
  CHECK(std::abs(u(0, 1)) <= 1e-13);
}

TEST_CASE("Orr-Sommerfeld implicit matvec matches the dense product") {
  const Index n = 60;
  Mat l, b;
  orr_factors(n, 1000.0, l, b);
  const Mat dense = l.partialPivLu().solve(b);
  const auto s = build_orr_sommerfeld(n, 1000.0);
  CHECK((s->materialize() - dense).norm() <= 1e-10 * dense.norm());
  std::mt19937_64 g(3);
  const Vec x = random_vec(n, g);
  CHECK((s->apply(x) - dense * x).norm() <= 1e-10 * (dense * x).norm());
  CHECK((s->apply_adjoint(x) - dense.adjoint() * x).norm() <=
        1e-10 * (dense.adjoint() * x).norm());
  CHECK_THROWS_AS(build_orr_sommerfeld(1, 1000.0), Error);
}

TEST_CASE("MIMO Kronecker operators") {
  const MimoPair mp = random_mimo_pair(10, 1);
  CHECK(mp.a->dim() == 100);
  CHECK(mp.b->dim() == 100);

  const MimoPair p4 = random_mimo_pair(4, 9);
  const Mat ka = dense_kron(p4.f1, p4.g1), kb = dense_kron(p4.f2, p4.g2);
  std::mt19937_64 g(11);
  const Vec x = random_vec(16, g);
  CHECK(((*p4.a) * x - ka * x).cwiseAbs().maxCoeff() <= 1e-12 * ka.norm());
  CHECK(((*p4.b) * x - kb * x).cwiseAbs().maxCoeff() <= 1e-12 * kb.norm());
  check_hermitian(*p4.a, ka.norm());
  check_hermitian(*p4.b, kb.norm());
  // norm bound: at least the true norm, at most 1.01 times it
  const double na = linalg::hermitian_eig(ka).values.cwiseAbs().maxCoeff();
  CHECK(p4.a->norm() >= na * (1 - 1e-12));
  CHECK(p4.a->norm() <= 1.01 * na);
  CHECK_THROWS_AS(random_mimo_pair(4, 1, -1.0), Error);
}

TEST_CASE("dense pair norms are exact spectral norms") {
  const HermitianPair p = random_indefinite_pair(12, 2);
  const double na = linalg::hermitian_eig(p.dense_a()).values.cwiseAbs().maxCoeff();
  Eigen::JacobiSVD<Mat> svd(p.dense_c());
  CHECK(p.a_norm() == doctest::Approx(na).epsilon(1e-13));
  CHECK(p.c_norm() == doctest::Approx(svd.singularValues()(0)).epsilon(1e-13));
  check_hermitian(p.a(), p.a_norm());
  check_hermitian(p.c(), p.c_norm());
}

TEST_CASE("non-Hermitian input is rejected") {
  Mat a = Mat::Identity(2, 2), c(2, 2);
  c << 1.0, 1.0, 0.0, -1.0;
  CHECK_THROWS_AS(HermitianPair::from_dense(a, c), Error);
}

TEST_CASE("Matrix Market round trip of example 6.1") {
  const HermitianPair p = build_example61();
  std::stringstream ss;
  write_matrix_market(ss, p.dense_a());
  const Mat back = read_matrix_market(ss);
  CHECK((back - p.dense_a()).norm() == 0.0);

  std::stringstream hs;
  write_matrix_market(hs, p.dense_c(), true);
  CHECK((read_matrix_market(hs) - p.dense_c()).norm() == 0.0);
}

TEST_CASE("Matrix Market hermitian expansion") {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate complex hermitian\n"
      "% lower triangle\n"
      "2 2 3\n"
      "1 1 1.0 0.0\n"
      "2 1 0.01 0.5\n"
      "2 2 -1.0 0.0\n");
  const Mat m = read_matrix_market(in);
  CHECK(m(1, 0) == cplx(0.01, 0.5));
  CHECK(m(0, 1) == cplx(0.01, -0.5));
}

TEST_CASE("Matrix Market errors name the line") {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate real general\n"
      "3 3 4\n"
      "1 1 1.0\n"
      "2 2\n");
  try {
    read_matrix_market(in, "t.mtx");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse_error);
    CHECK(std::string(e.what()).find("t.mtx:4") != std::string::npos);
  }
  std::istringstream rect(
      "%%MatrixMarket matrix array real general\n2 3\n1\n2\n3\n4\n5\n6\n");
  CHECK_THROWS_AS(read_matrix_market(rect), Error);
}
