// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>

#include "twodevp/types.hpp"

namespace twodevp {

/// Reads a square Matrix Market matrix (coordinate or array; real, integer or
/// complex; general, symmetric, hermitian or skew-symmetric) into dense form.
Mat load_matrix_market(const std::string& path);
Mat read_matrix_market(std::istream& in, const std::string& source = "<stream>");

/// Writes m in array/complex/general format, or coordinate/complex/hermitian
/// (lower triangle) when hermitian is set. Values use 17 significant digits.
void save_matrix_market(const std::string& path, const Mat& m,
                        bool hermitian = false);
void write_matrix_market(std::ostream& out, const Mat& m,
                         bool hermitian = false);

}  // namespace twodevp
