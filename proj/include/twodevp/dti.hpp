// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <string>

#include "twodevp/backward_error.hpp"

namespace twodevp {

/// Rightmost eigenvalue of ahat; zgeev for dense sources, shift-invert
/// Arnoldi for banded ones. Throws ErrorCode::unstable when Re >= 0.
cplx rightmost_eigenvalue(const DtiMatrix& ahat);

struct DtiStart {
  double mu0 = 0.0;
  double lambda0 = 0.0;
  Vec x0;  // [u; v] / sqrt(2)
  cplx rightmost;
};

DtiStart dti_initial(const std::shared_ptr<const DtiMatrix>& ahat);

enum class Validation { passed, failed, skipped };

std::string to_string(Validation v);

struct DtiOptions {
  double tol = 0.0;  // <= 0 selects m * machine epsilon
  double reltol = 1e-9;
  int maxit = 15;
  bool validate = false;
  bool stagnation_check = true;
  /// Called with every iterate and its eta2.
  std::function<void(const TwoDTriplet&, double)> on_iterate;
};

struct DtiResult {
  double beta_hat = 0.0;
  double mu_hat = 0.0;
  double lambda_hat = 0.0;  // signed 2D-eigenvalue; beta_hat = |lambda_hat|
  bool negative_branch = false;
  Vec x_hat;
  double eta2 = 0.0;
  double eta1 = 0.0;
  double ahat_norm = 0.0;
  Status status = Status::maxit;
  int iterations = 0;
  Validation validated = Validation::skipped;
  ConvergenceHistory history;
  DtiStart start;
};

DtiResult dti_solve(const std::shared_ptr<const DtiMatrix>& ahat,
                    const DtiOptions& opts = {});

/// True when the Hamiltonian G((1 - reltol) lambda_hat) = [[ahat, -l I],
/// [l I, -ahat^H]] has no eigenvalue within 1e-8 |ahat| of the imaginary
/// axis. Dense, m <= 1000; larger inputs are skipped.
Validation validate_dti(const DtiMatrix& ahat, double ahat_norm,
                        double lambda_hat, double reltol);

/// (beta_true - beta_hat) / |ahat|. Needs the true distance, which is why it
/// is not usable as a stopping rule.
double naive_backward_error_doc(double ahat_norm, double beta_true,
                                double beta_hat);

}  // namespace twodevp
