// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "twodevp/operators.hpp"

namespace twodevp {

/// A candidate (mu, lambda, x) with x a unit vector.
struct TwoDTriplet {
  double mu = 0.0;
  double lambda = 0.0;
  Vec x;
};

/// Projection of the pair onto span(v): a_k = v^H A v, v^H C v = diag(c1, c2).
struct ProjectedPair {
  Mat v;
  Eigen::Matrix2cd a_k;
  double c1 = 0.0;
  double c2 = 0.0;

  cplx a12() const { return a_k(0, 1); }
};

enum class Branch {
  indefinite_simple,
  indefinite_multiple,
  definite_distinct,
  definite_equal,
  none,  // projection unavailable
};

enum class Status {
  converged,
  maxit,
  stagnated,
  jacobian_singular,
  degenerate_basis,
};

std::string to_string(Branch b);
std::string to_string(Status s);

struct IterationRecord {
  int k = 0;
  double mu = 0.0;
  double lambda = 0.0;
  double eta = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double abs_a12 = 0.0;
  Branch branch = Branch::none;
  double elapsed = 0.0;  // seconds since the solve started
};

using ConvergenceHistory = std::vector<IterationRecord>;

/// Error metric of an iterate; eta1 unless overridden.
using ErrorMetric =
    std::function<double(const HermitianPair&, const TwoDTriplet&)>;
/// Acceptance test on an iterate and its metric; eta <= tol unless overridden.
using StopTest = std::function<bool(const TwoDTriplet&, double eta)>;
/// Post-update adjustment of the next iterate; returning false signals a
/// breakdown (reported as stagnated).
using UpdateHook = std::function<bool(TwoDTriplet&)>;

struct SolverOptions {
  double tol = 1e-14;
  int maxit = 15;
  bool stagnation_check = false;
  std::uint64_t rng_seed = 0;
  ErrorMetric metric;
  StopTest stop;
  UpdateHook hook;
};

struct SolveResult {
  TwoDTriplet triplet;
  double eta = 0.0;
  Status status = Status::maxit;
  int iterations = 0;
  ConvergenceHistory history;
};

/// Factored Jacobian [[A - mu C - lambda I, -Cx, -x], [-x^H C, 0, 0],
/// [-x^H, 0, 0]] that solves bordered systems.
class JacobianSolver {
 public:
  virtual ~JacobianSolver() = default;
  virtual Index dim() const = 0;  // n
  /// Solves J [X; Y] = [F; G] with F n x k and G 2 x k; returns [X; Y].
  virtual Mat solve(const Mat& f, const Mat& g) const = 0;
  /// J [X; Y] for the unfactored operator.
  virtual Mat apply(const Mat& x, const Mat& y) const = 0;
};

/// Dense bordered LU for small pairs, banded-arrow Schur complement for
/// dti-block pairs whose source has banded factors. Throws Error with
/// ErrorCode::singular when a pivot falls below 1e-14 of the matrix scale.
std::unique_ptr<JacobianSolver> build_jacobian(const HermitianPair& pair,
                                               const TwoDTriplet& t);

/// X_a of the augmented system with right-hand side [[0, 0], [1, 0], [0, 1]].
Mat solve_augmented(const HermitianPair& pair, const TwoDTriplet& t);

/// Orthonormal basis of range(x_a) rotated so that V^H C V = diag(c1, c2),
/// c1 >= c2. Throws ErrorCode::numerical for a rank-deficient x_a.
ProjectedPair orthonormalize_and_align(const HermitianPair& pair,
                                       const Mat& x_a);

struct ProjectedTriplet {
  double nu = 0.0;
  double theta = 0.0;
  Eigen::Vector2cd z;
};

/// Closed-form 2D-eigentriplets of (a_k, diag(c1, c2)) for c1 > 0 > c2. Two
/// triplets when |a12| >= 1e-14 |a_k|_F, otherwise the single multiple one.
std::vector<ProjectedTriplet> solve_2x2_2devp(const Eigen::Matrix2cd& a_k,
                                              double c1, double c2);

/// Index of the candidate closest to (mu, lambda) in the l1 sense; the first
/// wins ties.
std::size_t select_candidate(double mu, double lambda,
                             const std::vector<ProjectedTriplet>& candidates);

/// Minimizer over real (nu, theta) of |A x - nu C x - theta x|, minimum-norm
/// when C x and x are parallel.
std::pair<double, double> fit_mu_lambda(const HermitianPair& pair,
                                        const Vec& x);

/// Next iterate when C_k is not indefinite.
TwoDTriplet update_definite(const HermitianPair& pair,
                            const ProjectedPair& proj, std::mt19937_64& rng);

/// Starting vector from the two eigenvectors of A - mu0 C nearest lambda0.
Vec initial_vector(const HermitianPair& pair, double mu0, double lambda0);

/// Algorithm 1; never throws for numerical breakdown, see SolveResult.status.
SolveResult two_drqi(const HermitianPair& pair, const TwoDTriplet& init,
                     const SolverOptions& opts);

/// Rejects x that is empty, of the wrong length, or of zero norm.
void check_unit_vector(const HermitianPair& pair, const Vec& x);

}  // namespace twodevp
