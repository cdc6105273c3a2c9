// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "twodevp/twodrqi.hpp"

namespace twodevp {

enum class MinmaxCase { I, II, III_rqi, III_recovery };

std::string to_string(MinmaxCase c);

struct CaseCheck {
  MinmaxCase which = MinmaxCase::III_rqi;
  double value = 0.0;  // lambda_A or lambda_B for cases I and II
  Vec x;
};

/// Cases I and II test one minimum eigenvector of A and of B.
CaseCheck classify_cases(const HermitianOperator& a, const HermitianOperator& b);

struct RqMinmaxOptions {
  double reltol = 1e-8;
  double backtol = 0.0;  // <= 0 selects n * machine epsilon
  double abstol = 1e-10;
  int max_outer = 60;
  int maxit = 15;  // per 2DRQI run
  std::uint64_t rng_seed = 0;
};

struct OuterStep {
  double a = 0.0, b = 0.0;
  double mu0 = 0.0, lambda0 = 0.0;
  Status drqi_status = Status::maxit;
  int drqi_iterations = 0;
  double mu_hat = 0.0, lambda_hat = 0.0;
  bool accepted = false;
};

struct RqMinmaxResult {
  Vec x_opt;
  double value = 0.0;
  MinmaxCase case_taken = MinmaxCase::III_rqi;
  double mu_opt = 0.0;  // NaN outside case III
  int outer_iters = 0;
  bool converged = false;
  std::vector<OuterStep> outer;
};

RqMinmaxResult rqminmax_solve(OperatorPtr a, OperatorPtr b,
                              const RqMinmaxOptions& opts = {});

struct Recovery {
  Vec x;
  double theta = 0.0;
  bool ok = true;  // false when h has no sign change on the arc
};

/// Point on the arc from x_a to x_b where u^H C u vanishes.
Recovery recover_x(Vec x_a, Vec x_b, const HermitianOperator& c);

/// The k smallest eigenpairs of a Hermitian operator, ascending.
linalg::HermitianEig smallest_eigenpairs(const Mat& h, Index k);

/// lambda_min(A - mu C) for dense A and C.
double lambda_min(const Mat& a, const Mat& c, double mu);

}  // namespace twodevp
