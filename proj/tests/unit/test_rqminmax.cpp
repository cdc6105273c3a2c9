// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "twodevp/rqminmax.hpp"

using namespace twodevp;

namespace {

OperatorPtr dense_op(std::initializer_list<double> diag) {
  Vec d(static_cast<Index>(diag.size()));
  Index i = 0;
  for (double v : diag) d(i++) = v;
  return std::make_shared<DenseHermitian>(Mat(d.asDiagonal()));
}

double rq(const HermitianOperator& op, const Vec& x) {
  return x.dot(op * x).real() / x.squaredNorm();
}

// min over unit x in C^2 of max(x^H A x, x^H B x) by brute force
double brute_minmax2(const Mat& a, const Mat& b) {
  double best = 1e300;
  const int nt = 2000, np = 64;
  for (int i = 0; i <= nt; ++i) {
    const double t = M_PI / 2 * i / nt;
    for (int j = 0; j < np; ++j) {
      Vec x(2);
      x << std::cos(t), std::polar(std::sin(t), 2 * M_PI * j / np);
      const double ra = (x.adjoint() * a * x)(0, 0).real();
      const double rb = (x.adjoint() * b * x)(0, 0).real();
      best = std::min(best, std::max(ra, rb));
    }
  }
  return best;
}

// max of the concave lambda_min(A - mu (A - B)) over [0, 1] by golden section
std::pair<double, double> golden_dual(const Mat& a, const Mat& b) {
  const Mat c = a - b;
  auto g = [&](double mu) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a - mu * c, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  };
  const double r = (std::sqrt(5.0) - 1) / 2;
  double lo = 0, hi = 1, x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = g(x1), f2 = g(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = g(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = g(x1);
    }
  }
  const double mu = 0.5 * (lo + hi);
  return {mu, g(mu)};
}

}  // namespace

TEST_CASE("case classification") {
  auto c1 = classify_cases(*dense_op({2, 3}), *dense_op({1, 5}));
  CHECK(c1.which == MinmaxCase::I);
  CHECK(c1.value == doctest::Approx(2.0));
  auto c2 = classify_cases(*dense_op({1, 5}), *dense_op({2, 3}));
  CHECK(c2.which == MinmaxCase::II);
  CHECK(c2.value == doctest::Approx(2.0));
  auto c3 = classify_cases(*dense_op({1, 3}), *dense_op({2, 0}));
  CHECK(c3.which == MinmaxCase::III_rqi);
  CHECK_THROWS_AS(classify_cases(*dense_op({1, 3}), *dense_op({2, 0, 1})), Error);
}

TEST_CASE("cases I and II agree with brute force") {
  const auto a = dense_op({2, 3}), b = dense_op({1, 5});
  const auto r = rqminmax_solve(a, b);
  CHECK(r.case_taken == MinmaxCase::I);
  CHECK(r.converged);
  CHECK(std::isnan(r.mu_opt));
  CHECK(r.value == doctest::Approx(brute_minmax2(a->dense(), b->dense())).epsilon(1e-3));
  const auto r2 = rqminmax_solve(b, a);
  CHECK(r2.case_taken == MinmaxCase::II);
  CHECK(r2.value == doctest::Approx(r.value));
}

TEST_CASE("diagonal case III toy") {
  // x = (c, s): c^2 + 3 s^2 = 2 c^2 at c^2 = 3/4, value 3/2; dual optimum mu = 1/2
  const auto a = dense_op({1, 3}), b = dense_op({2, 0});
  const auto r = rqminmax_solve(a, b);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(r.mu_opt == doctest::Approx(0.5).epsilon(1e-10));
  // grid step pi/4000 at a kink
  CHECK(brute_minmax2(a->dense(), b->dense()) == doctest::Approx(1.5).epsilon(1e-3));
  CHECK(std::abs(rq(*a, r.x_opt) - rq(*b, r.x_opt)) <= 1e-10);
  CHECK(std::max(rq(*a, r.x_opt), rq(*b, r.x_opt)) == doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("dual value of sign-flipped diagonals") {
  const auto a = dense_op({1, -1}), b = dense_op({-1, 1});
  const auto r = rqminmax_solve(a, b);
  CHECK(r.converged);
  CHECK(std::abs(r.value) <= 1e-10);
  CHECK(r.mu_opt == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("MIMO instances against the golden-section dual") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const MimoPair mp = random_mimo_pair(4, seed);
    const Mat a = mp.a->dense(), b = mp.b->dense();
    const auto [mu, g] = golden_dual(a, b);
    const auto r = rqminmax_solve(mp.a, mp.b);
    CHECK(r.converged);
    if (r.case_taken == MinmaxCase::III_rqi || r.case_taken == MinmaxCase::III_recovery) {
      CHECK(r.value == doctest::Approx(g).epsilon(1e-8));
      CHECK(r.mu_opt == doctest::Approx(mu).epsilon(1e-4));
      // every outer bracket contains the dual maximizer
      for (const auto& s : r.outer) {
        CHECK(s.a <= mu + 1e-9);
        CHECK(s.b >= mu - 1e-9);
        CHECK(s.mu0 == doctest::Approx(0.5 * (s.a + s.b)));
      }
      // the returned vector attains the value
      const double ra = rq(*mp.a, r.x_opt), rb = rq(*mp.b, r.x_opt);
      CHECK(std::max(ra, rb) == doctest::Approx(g).epsilon(1e-7));
    }
  }
}

TEST_CASE("MIMO m = 10") {
  const MimoPair mp = random_mimo_pair(10, 5);
  const auto [mu, g] = golden_dual(mp.a->dense(), mp.b->dense());
  const auto r = rqminmax_solve(mp.a, mp.b);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(g).epsilon(1e-8));
  CHECK(r.outer_iters <= 10);
}

TEST_CASE("bisection fallback when 2DRQI is never accepted") {
  const MimoPair mp = random_mimo_pair(4, 2);
  const auto [mu, g] = golden_dual(mp.a->dense(), mp.b->dense());
  RqMinmaxOptions o;
  o.maxit = 0;
  o.abstol = 1e-10;
  const auto r = rqminmax_solve(mp.a, mp.b, o);
  CHECK(r.case_taken == MinmaxCase::III_recovery);
  CHECK(std::abs(r.mu_opt - mu) <= 1e-6);
  CHECK(r.value == doctest::Approx(g).epsilon(1e-8));
  for (const auto& s : r.outer) CHECK_FALSE(s.accepted);
}

TEST_CASE("vector recovery on the arc") {
  const auto c = dense_op({1, -1});
  Vec xa(2), xb(2);
  xa << 1, 0;
  xb << 0, 1;
  const auto r = recover_x(xa, xb, *c);
  CHECK(r.ok);
  CHECK(std::abs(rq(*c, r.x)) <= 1e-12);
  CHECK(std::abs(std::abs(r.x(0)) - std::abs(r.x(1))) <= 1e-12);
  CHECK(r.theta == doctest::Approx(M_PI / 4));

  // a phase on x_b changes nothing but the phase of the result
  Vec zb(2);
  zb << 0.3, 1.0;
  const auto r0 = recover_x(xa, zb, *c);
  const auto rp = recover_x(xa, zb * std::polar(1.0, 1.3), *c);
  CHECK(std::abs(rq(*c, r0.x)) <= 1e-12);
  CHECK(std::abs(std::abs(rp.x.dot(r0.x)) - 1.0) <= 1e-12);
  CHECK(rp.theta == doctest::Approx(r0.theta));

  Vec ya(2);
  ya << 1, 0.1;
  const auto bad = recover_x(xa, ya, *c);
  CHECK_FALSE(bad.ok);
  CHECK_THROWS_AS(recover_x(Vec::Zero(2), xb, *c), Error);
}

TEST_CASE("smallest eigenpairs and lambda_min") {
  Mat h(3, 3);
  h << 2, 0, 0, 0, -1, 0, 0, 0, 5;
  const auto e = smallest_eigenpairs(h, 2);
  CHECK(e.values(0) == doctest::Approx(-1));
  CHECK(e.values(1) == doctest::Approx(2));
  CHECK(std::abs(e.vectors(1, 0)) == doctest::Approx(1));
  CHECK(lambda_min(h, Mat::Identity(3, 3), 1.0) == doctest::Approx(-2));
  CHECK_THROWS_AS(smallest_eigenpairs(h, 4), Error);
}
