// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "twodevp/backward_error.hpp"
#include "twodevp/dti.hpp"
#include "twodevp/oracles.hpp"

using namespace twodevp;

TEST_CASE("eigencurves of example 6.1") {
  const HermitianPair p = build_example61();
  const auto t = eigencurve_scan(p, -1.5, 1.5, 300);
  REQUIRE(t.size() == 3);
  // printed values, descending mu
  const double mu[] = {1.0, -0.665101440190437, -0.145810069397438};
  const double la[] = {1.0, -0.239801782612878, -0.744080780565709};
  for (int k = 0; k < 3; ++k) {
    bool found = false;
    for (const auto& c : t)
      if (std::abs(c.t.mu - mu[k]) <= 1e-13 && std::abs(c.t.lambda - la[k]) <= 1e-13)
        found = true;
    CHECK(found);
  }
  for (const auto& c : t) CHECK(eta1(p, c.t).eta1 <= 1e-13);
}

TEST_CASE("eigencurve samples") {
  const HermitianPair p = build_example61();
  const auto s = eigencurve_samples(p, -1.0, 1.0, 11);
  REQUIRE(s.size() == 11);
  CHECK(s.front().mu == -1.0);
  CHECK(s.back().mu == 1.0);
  for (const auto& e : s) {
    CHECK(e.lambda.size() == 3);
    CHECK(e.lambda(0) >= e.lambda(1));
    CHECK(e.lambda(1) >= e.lambda(2));
    const auto ev = linalg::hermitian_eig(p.dense_a() - e.mu * p.dense_c()).values;
    CHECK(std::abs(ev(2) - e.lambda(0)) <= 1e-14);
  }
}

TEST_CASE("definite C has no 2D-eigenvalues") {
  Mat a(2, 2), c = Mat::Identity(2, 2);
  a << 1.0, 0.3, 0.3, -1.0;
  const auto p = HermitianPair::from_dense(a, c);
  CHECK(eigencurve_scan(p, -5.0, 5.0, 100).empty());
}

TEST_CASE("dichotomous search") {
  Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 3.0;
  b(0, 0) = 2.0;
  // g(mu) = min(1 + mu, 3 - 3 mu) peaks at mu = 1/2 with value 3/2
  const auto r = dichotomous_evopt(a, b, 0.0, 1.0, 1e-4);
  // width recurrence w <- w / 2 + eps_r with eps_r = tol / 4
  int k = 0;
  for (double w = 1.0; w >= 1e-4; w = w / 2 + 2.5e-5) ++k;
  CHECK(k == 15);
  CHECK(r.iterations == k);
  CHECK(std::abs(r.mu - 0.5) <= 1e-4);
  CHECK(r.value == doctest::Approx(1.5).epsilon(3e-4));
  CHECK_THROWS_AS(dichotomous_evopt(a, b, 0.0, 1.0, 1e-4, 1e-4), Error);
  CHECK_THROWS_AS(dichotomous_evopt(a, b, 1.0, 0.0, 1e-4), Error);
}

TEST_CASE("sigma_min scan on the scalar -1") {
  Mat one(1, 1);
  one << -1.0;
  const auto r = sigma_min_scan_dti(DtiMatrix::from_dense(one), -5.0, 5.0, 101);
  CHECK(r.beta == doctest::Approx(1.0).epsilon(1e-14));
  // quadratic minimum: mu is resolved to about sqrt(eps)
  CHECK(std::abs(r.mu) <= 1e-7);
  CHECK(r.grid_min >= r.beta);
  // sigma_min(-1 - w j) = sqrt(1 + w^2)
  CHECK(sigma_min_shifted(DtiMatrix::from_dense(one), 2.0) ==
        doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
}

TEST_CASE("sigma_min scan agrees with 2DRQI on random stable matrices") {
  for (std::uint64_t seed : {2u, 6u}) {
    const auto src = random_stable_matrix(25, seed);
    const auto s = sigma_min_scan_dti(src, -8.0, 8.0, 801);
    const auto d = dti_solve(src);
    CHECK(s.grid_min >= s.beta);
    CHECK(s.beta == doctest::Approx(d.beta_hat).epsilon(1e-9));
  }
}

TEST_CASE("banded sigma_min matches the dense value") {
  const auto banded = build_orr_sommerfeld(80, 1000.0);
  const auto dense = DtiMatrix::from_dense(banded->materialize());
  for (double mu : {-0.5, -0.2, 0.0, 3.0}) {
    CHECK(sigma_min_shifted(banded, mu) ==
          doctest::Approx(sigma_min_shifted(dense, mu)).epsilon(1e-8));
  }
}
