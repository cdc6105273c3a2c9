// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "twodevp/dti.hpp"

using namespace twodevp;

namespace {

double sigma_min(const Mat& a, double w) {
  Mat s = a;
  s.diagonal().array() -= cplx(0.0, w);
  Eigen::BDCSVD<Mat> svd(s);
  return svd.singularValues()(s.rows() - 1);
}

// grid over [lo, hi] on the imaginary axis, then golden section around the
// best point
std::pair<double, double> distance_oracle(const Mat& a, double lo0, double hi0,
                                          int n = 4001) {
  double bw = 0, bs = 1e300;
  for (int i = 0; i < n; ++i) {
    const double w = lo0 + (hi0 - lo0) * i / (n - 1);
    const double s = sigma_min(a, w);
    if (s < bs) {
      bs = s;
      bw = w;
    }
  }
  const double h = (hi0 - lo0) / (n - 1);
  const double g = (std::sqrt(5.0) - 1) / 2;
  double lo = bw - h, hi = bw + h;
  while (hi - lo > 1e-11) {
    const double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    if (sigma_min(a, x1) < sigma_min(a, x2))
      hi = x2;
    else
      lo = x1;
  }
  const double w = 0.5 * (lo + hi);
  return {w, sigma_min(a, w)};
}

}  // namespace

TEST_CASE("scalar -1 has distance 1 at frequency 0") {
  Mat a(1, 1);
  a << -1.0;
  const auto r = dti_solve(DtiMatrix::from_dense(a));
  CHECK(r.status == Status::converged);
  CHECK(r.beta_hat == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(r.mu_hat) <= 1e-14);
  CHECK(r.eta2 <= kMachEps);
}

TEST_CASE("diagonal example") {
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = -1.0;
  a(1, 1) = cplx(-2.0, 5.0);
  const auto src = DtiMatrix::from_dense(a);
  const DtiStart s = dti_initial(src);
  // rightmost eigenvalue -1: mu0 = 0, lambda0 = sigma_min(diag(-1, -2+5j)) = 1
  CHECK(s.rightmost == cplx(-1.0, 0.0));
  CHECK(s.mu0 == 0.0);
  CHECK(s.lambda0 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.x0.norm() == doctest::Approx(1.0).epsilon(1e-14));
  const auto r = dti_solve(src);
  CHECK(r.beta_hat == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(r.mu_hat) <= 1e-13);
}

TEST_CASE("random stable matrices agree with the sigma_min oracle") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const auto src = random_stable_matrix(20, seed);
    const Mat& a = *src->dense();
    // sigma_min(a - w j) >= |w| - |a|, so the minimum lies within |a| + 1
    const double rad = Eigen::BDCSVD<Mat>(a).singularValues()(0) + 1.0;
    const auto [w, beta] = distance_oracle(a, -rad, rad);
    const auto r = dti_solve(src);
    CAPTURE(seed);
    CHECK((r.status == Status::converged || r.status == Status::stagnated));
    CHECK(r.beta_hat == doctest::Approx(beta).epsilon(1e-8));
    CHECK(r.mu_hat == doctest::Approx(w).epsilon(1e-5));
    // halves of x keep norm 1/sqrt(2)
    CHECK(r.x_hat.head(20).norm() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(r.x_hat.tail(20).norm() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(r.eta2 <= 1e-12);
    CHECK(r.history.size() == static_cast<std::size_t>(r.iterations) + 1);
  }
}

TEST_CASE("distance is invariant under transposition and unitary similarity") {
  const auto src = random_stable_matrix(15, 11);
  const Mat a = *src->dense();
  const double b0 = dti_solve(src).beta_hat;
  const double bt = dti_solve(DtiMatrix::from_dense(a.transpose())).beta_hat;
  Eigen::HouseholderQR<Mat> qr(Mat::Random(15, 15));
  const Mat q = qr.householderQ();
  const double bq = dti_solve(DtiMatrix::from_dense(q.adjoint() * a * q)).beta_hat;
  CHECK(bt == doctest::Approx(b0).epsilon(1e-9));
  CHECK(bq == doctest::Approx(b0).epsilon(1e-9));
}

TEST_CASE("unstable input is rejected") {
  Mat a(2, 2);
  a << 0.5, 1.0, 0.0, -1.0;
  try {
    dti_solve(DtiMatrix::from_dense(a));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unstable);
  }
}

TEST_CASE("Hamiltonian validation closed forms") {
  // G(l) = [[-1, -l], [l, 1]] has eigenvalues +-sqrt(1 - l^2)
  Mat a(1, 1);
  a << -1.0;
  const auto src = DtiMatrix::from_dense(a);
  CHECK(validate_dti(*src, 1.0, 1.0, 1e-3) == Validation::passed);
  CHECK(validate_dti(*src, 1.0, 0.5, 1e-3) == Validation::passed);
  // above the distance the eigenvalues sit on the imaginary axis
  CHECK(validate_dti(*src, 1.0, 2.0, 1e-3) == Validation::failed);
  // (1 - 1e-9) leaves real parts sqrt(2e-9) ~ 4.5e-5 > 1e-8
  CHECK(validate_dti(*src, 1.0, 1.0, 1e-9) == Validation::passed);
  CHECK_THROWS_AS(validate_dti(*src, 1.0, 1.0, 0.0), Error);

  DtiOptions o;
  o.validate = true;
  const auto r = dti_solve(random_stable_matrix(10, 3), o);
  CHECK(r.validated != Validation::skipped);
}

TEST_CASE("naive backward error documentation value") {
  CHECK(naive_backward_error_doc(2.0, 1.0, 0.5) == doctest::Approx(0.25));
  CHECK(naive_backward_error_doc(2.0, 1.0, 1.0) == 0.0);
  CHECK(naive_backward_error_doc(1.0, 1.0, 0.9) == doctest::Approx(0.1));
  // diag(-1, -2) is normal: beta = 1, |ahat| = 2
  CHECK(naive_backward_error_doc(2.0, 1.0, 0.5) == doctest::Approx(0.25));
  CHECK_THROWS_AS(naive_backward_error_doc(2.0, 0.5, 1.0), Error);
  CHECK_THROWS_AS(naive_backward_error_doc(0.0, 1.0, 0.5), Error);
}

TEST_CASE("banded Orr-Sommerfeld start matches the dense start") {
  const auto banded = build_orr_sommerfeld(60, 1000.0);
  const auto dense = DtiMatrix::from_dense(banded->materialize());
  const DtiStart sb = dti_initial(banded), sd = dti_initial(dense);
  CHECK(std::abs(sb.rightmost - sd.rightmost) <= 1e-8 * std::abs(sd.rightmost));
  CHECK(sb.lambda0 == doctest::Approx(sd.lambda0).epsilon(1e-8));
  const auto rb = dti_solve(banded), rd = dti_solve(dense);
  CHECK(rb.beta_hat == doctest::Approx(rd.beta_hat).epsilon(1e-8));
  // eigenvalues of this matrix have imaginary parts in (-1, 0)
  const auto [w, beta] = distance_oracle(banded->materialize(), -2.0, 1.0, 3001);
  CHECK(rd.beta_hat == doctest::Approx(beta).epsilon(1e-7));
}

TEST_CASE("negative branch mirrors the positive one") {
  Mat one(1, 1);
  one << -1.0;
  for (const auto& src : {DtiMatrix::from_dense(one), random_stable_matrix(5, 21)}) {
    const DtiBlockPair bp = build_dti_pair(src);
    const Index m = src->dim();
    const auto [w, beta] = distance_oracle(*src->dense(), -4.0, 4.0);
    const DtiStart s = dti_initial(src);
    // [u; -v] pairs with -sigma
    Vec x = s.x0;
    x.tail(m) *= -1.0;
    SolverOptions o;
    o.tol = 1e-13;
    const SolveResult r = two_drqi(bp.pair, {s.mu0, -s.lambda0, x}, o);
    CHECK(r.triplet.lambda < 0.0);
    CHECK(-r.triplet.lambda == doctest::Approx(beta).epsilon(1e-8));
    CHECK(-r.triplet.lambda == doctest::Approx(dti_solve(src).beta_hat).epsilon(1e-8));
  }
}
