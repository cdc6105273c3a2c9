// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "twodevp/backward_error.hpp"

using namespace twodevp;

namespace {

Vec random_vec(Index n, std::mt19937_64& g) {
  std::normal_distribution<double> d;
  Vec v(n);
  for (Index i = 0; i < n; ++i) v(i) = cplx(d(g), d(g));
  return v;
}

double spectral_norm(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

TEST_CASE("eta1 at the exact triplet of example 6.1") {
  const HermitianPair p = build_example61();
  Vec x(3);
  x << 0.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const auto r = eta1(p, {1.0, 1.0, x});
  CHECK(r.eta1 <= 1e-15);
  CHECK(r.r_norm <= 1e-15);
}

TEST_CASE("eta1 follows its definition") {
  const HermitianPair p = random_indefinite_pair(8, 4);
  std::mt19937_64 g(9);
  const Vec x = random_vec(8, g).normalized();
  const double mu = 0.3, lambda = -0.2;
  const Mat a = p.dense_a(), c = p.dense_c();
  const double an = spectral_norm(a), cn = spectral_norm(c);
  const double ga = (x.adjoint() * a * x)(0, 0).real() - lambda;
  const double gc = (x.adjoint() * c * x)(0, 0).real();
  const double rn = (a * x - mu * c * x - lambda * x).norm();
  const double expect =
      std::max({std::abs(ga) / an, std::abs(gc) / cn, rn / (an + std::abs(mu) * cn)});
  const auto rep = eta1(p, {mu, lambda, x});
  CHECK(rep.eta1 == doctest::Approx(expect).epsilon(1e-12));
  CHECK(rep.gamma_a == doctest::Approx(ga).epsilon(1e-12));
  CHECK(rep.gamma_c == doctest::Approx(gc).epsilon(1e-12));
  CHECK(rep.r_norm == doctest::Approx(rn).epsilon(1e-12));
  CHECK_THROWS_AS(eta1(p, {mu, lambda, Vec::Zero(8)}), Error);
}

TEST_CASE("Hermitian reflector") {
  std::mt19937_64 g(2);
  const Vec x = random_vec(5, g).normalized();
  Vec a = random_vec(5, g);
  // make x^H a real
  const cplx xa = x.dot(a);
  a -= x * cplx(0.0, xa.imag());
  const Mat h = hermitian_reflector(x, a);
  CHECK((h - h.adjoint()).norm() <= 1e-14);
  CHECK((h * x - a).norm() <= 1e-13 * a.norm());
  CHECK(spectral_norm(h) == doctest::Approx(a.norm()).epsilon(1e-12));
  CHECK(hermitian_reflector(x, Vec::Zero(5)).norm() == 0.0);
}

TEST_CASE("constructed perturbation solves the perturbed problem") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const HermitianPair p = random_indefinite_pair(10, seed);
    std::mt19937_64 g(seed + 100);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const Vec x = random_vec(10, g).normalized();
    const TwoDTriplet t{u(g), u(g), x};
    const Perturbation d = construct_perturbation(p, t);
    const Mat a = p.dense_a() + d.delta_a, c = p.dense_c() + d.delta_c;
    const double scale = p.a_norm() + std::abs(t.mu) * p.c_norm();
    CHECK((d.delta_a - d.delta_a.adjoint()).norm() <= 1e-13 * scale);
    CHECK((d.delta_c - d.delta_c.adjoint()).norm() <= 1e-13 * scale);
    CHECK((a * x - t.mu * c * x - t.lambda * x).norm() <= 1e-13 * scale);
    CHECK(std::abs((x.adjoint() * c * x)(0, 0)) <= 1e-13 * p.c_norm());
    CHECK(std::abs((x.adjoint() * a * x)(0, 0) - t.lambda) <= 1e-13 * scale);

    // eta1 <= max relative size <= sqrt(2) eta1
    const double e1 = eta1(p, t).eta1;
    const double ra = spectral_norm(d.delta_a) / p.a_norm();
    const double rc = spectral_norm(d.delta_c) / p.c_norm();
    const double size = std::max(ra, rc);
    CHECK(size >= e1 * (1 - 1e-12));
    CHECK(size <= std::sqrt(2.0) * e1 * (1 + 1e-12));
    CHECK(ra == doctest::Approx(d.a_norm / p.a_norm()).epsilon(1e-10));
  }
}

TEST_CASE("perturbation at mu = 0 puts everything into delta_a") {
  const HermitianPair p = random_indefinite_pair(6, 3);
  std::mt19937_64 g(6);
  const Vec x = random_vec(6, g).normalized();
  const TwoDTriplet t{0.0, 0.4, x};
  const Perturbation d = construct_perturbation(p, t);
  const Mat a = p.dense_a() + d.delta_a;
  CHECK((a * x - 0.4 * x).norm() <= 1e-13 * p.a_norm());
  // delta_c only cancels x^H C x
  const double gc = (x.adjoint() * p.dense_c() * x)(0, 0).real();
  CHECK(spectral_norm(d.delta_c) == doctest::Approx(std::abs(gc)).epsilon(1e-12));
}

TEST_CASE("indefiniteness repair") {
  Mat a = Mat::Identity(3, 3), c = Mat::Zero(3, 3);
  c(0, 0) = 1.0;
  c(1, 1) = -1.0;
  const HermitianPair p = HermitianPair::from_dense(a, c);
  Vec x = Vec::Zero(3);
  x(2) = 1.0;
  // C + delta_c = diag(1, 0, 0) is semidefinite
  Mat dc = Mat::Zero(3, 3);
  dc(1, 1) = 1.0;
  const Mat before = dc;
  CHECK(repair_indefiniteness(p, x, dc, 1e-3));
  const auto ev = linalg::hermitian_eig(c + dc).values;
  CHECK(ev(0) < 0.0);
  CHECK(ev(2) > 0.0);
  CHECK(std::abs((x.adjoint() * dc * x)(0, 0) - (x.adjoint() * before * x)(0, 0)) <= 1e-15);
  CHECK(spectral_norm(dc - before) == doctest::Approx(1e-3).epsilon(1e-10));

  Mat keep = Mat::Zero(3, 3);
  CHECK_FALSE(repair_indefiniteness(p, x, keep, 1e-3));
  CHECK(keep.norm() == 0.0);
}

TEST_CASE("eta2 on dti-block pairs") {
  Mat one(1, 1);
  one << -1.0;
  const DtiBlockPair s = build_dti_pair(one);
  Vec x(2);
  x << 1.0, 1.0;
  x /= std::sqrt(2.0);
  CHECK(eta2_dti(*s.source, s.ahat_norm, {0.0, -1.0, x}).eta2 == 0.0);

  // eta2 = sqrt(2) |(A - mu C - lambda I) x| / |ahat| on the block pair
  const DtiBlockPair bp = build_dti_pair(random_stable_matrix(12, 7));
  std::mt19937_64 g(1);
  const Vec y = random_vec(24, g).normalized();
  const TwoDTriplet t{0.7, -0.3, y};
  const Vec r = bp.pair.apply(Which::shifted, t.mu, y) - t.lambda * y;
  const auto rep = eta2_dti(*bp.source, bp.ahat_norm, t);
  CHECK(rep.eta2 == doctest::Approx(std::sqrt(2.0) * r.norm() / bp.ahat_norm).epsilon(1e-12));
  CHECK((rep.r1 - r.head(12)).norm() <= 1e-13 * r.norm());
  CHECK((rep.r2 - r.tail(12)).norm() <= 1e-13 * r.norm());
  CHECK_THROWS_AS(eta2_dti(*bp.source, bp.ahat_norm, {0.0, 0.0, Vec::Ones(5)}), Error);
}
