// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twodevp/report.hpp"

namespace twodevp {

struct BenchOptions {
  int grid = 20;        // basin-map points per axis
  int instances = 20;   // mimo-evopt
  Index m = 10;         // mimo-evopt channel dimension
  double evopt_tol = 1e-8;
  Index n = 1000;       // dti-orr
  double reynolds = 1000.0;
  double mu_lo = -60.0;  // dti-orr scan range
  double mu_hi = 60.0;
  int points = 2001;
  int maxit = 15;
  std::uint64_t seed = 0;
  bool timing = false;  // wall-clock columns break byte-identical output
};

struct BenchReport {
  std::string csv;
  Json summary;
};

const std::vector<std::string>& bench_names();

/// Throws ErrorCode::invalid_argument for an unknown name.
BenchReport run_bench(const std::string& name, const BenchOptions& opts);

}  // namespace twodevp
