// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace twodevp {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kMachEps = std::numeric_limits<double>::epsilon();
inline constexpr cplx kI{0.0, 1.0};

/// Largest dimension for which solvers fall back to dense factorizations.
inline constexpr Index kDenseLimit = 4000;

enum class ErrorCode {
  invalid_argument = 1,
  dimension_mismatch,
  parse_error,
  io_error,
  not_indefinite,
  singular,
  unstable,
  numerical,
  unsupported,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace twodevp
