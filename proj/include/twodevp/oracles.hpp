// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <vector>

#include "twodevp/twodrqi.hpp"

namespace twodevp {

struct EigencurveSample {
  double mu = 0.0;
  RVec lambda;  // descending
  RVec xcx;     // x_i^H C x_i per curve
};

/// Sorted eigenvalues of A - mu C on a uniform grid (dense pairs, n <= 200).
std::vector<EigencurveSample> eigencurve_samples(const HermitianPair& pair,
                                                 double mu_lo, double mu_hi,
                                                 int points);

struct CurveTriplet {
  TwoDTriplet t;
  int curve = 0;  // 0 is the top curve
};

/// Sign changes of x_i(mu)^H C x_i(mu) along each sorted curve, bisected in
/// mu. Crossings of two curves are genuine 2D-eigenvalues; there x is taken
/// from the two-dimensional eigenspace.
std::vector<CurveTriplet> eigencurve_scan(const HermitianPair& pair,
                                          double mu_lo, double mu_hi,
                                          int points = 300,
                                          double refine_tol = 1e-12);

struct EvoptResult {
  double mu = 0.0;
  double value = 0.0;  // g(mu)
  int iterations = 0;
};

/// Maximizes the concave g(mu) = lambda_min(A - mu (A - B)) on [lo, hi] by
/// comparing g at the midpoint +- eps_r. eps_r <= 0 selects tol_width / 4.
EvoptResult dichotomous_evopt(const Mat& a, const Mat& b, double lo, double hi,
                              double tol_width, double eps_r = 0.0);

struct ScanResult {
  double beta = 0.0;
  double mu = 0.0;
  double grid_min = 0.0;  // smallest grid value, an upper bound on beta
  int evaluations = 0;
};

/// sigma_min(ahat - mu j I) at one shift.
double sigma_min_shifted(const std::shared_ptr<const DtiMatrix>& ahat,
                         double mu);

/// min over mu of sigma_min(ahat - mu j I): grid followed by golden-section
/// refinement of the best brackets to 1e-10 in mu.
ScanResult sigma_min_scan_dti(const std::shared_ptr<const DtiMatrix>& ahat,
                              double mu_lo, double mu_hi, int points = 2001);

}  // namespace twodevp
