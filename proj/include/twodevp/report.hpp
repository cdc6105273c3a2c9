// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "twodevp/dti.hpp"
#include "twodevp/oracles.hpp"
#include "twodevp/rqminmax.hpp"

namespace twodevp {

using Json = nlohmann::ordered_json;

const char* version();

/// %.17g, with "nan" and "inf" spelled out.
std::string format_double(double v);

/// Comma-joined row with a trailing newline.
std::string csv_row(const std::vector<std::string>& fields);

/// Columns k, mu, lambda, eta, c1, c2, abs_a12, branch (+ elapsed).
std::string history_csv(const ConvergenceHistory& h, bool timing = false);
Json history_json(const ConvergenceHistory& h, bool timing = false);

/// Real and imaginary parts as two arrays.
Json vector_json(const Vec& x);

Json solve_json(const HermitianPair& pair, const SolveResult& r,
                bool timing = false);
Json rqminmax_json(const RqMinmaxResult& r);
Json dti_json(const DtiResult& r, bool timing = false);
Json scan_json(const ScanResult& r);

/// mu followed by lambda_i and x_i^H C x_i per curve.
std::string eigencurve_csv(const std::vector<EigencurveSample>& samples);
Json curve_triplets_json(const std::vector<CurveTriplet>& t);

}  // namespace twodevp
