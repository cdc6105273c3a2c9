// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#include "twodevp/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace twodevp {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void parse_fail(const std::string& source, long line,
                             const std::string& what) {
  fail(ErrorCode::parse_error,
       source + ":" + std::to_string(line) + ": " + what);
}

enum class Symmetry { general, symmetric, hermitian, skew };

}  // namespace

Mat read_matrix_market(std::istream& in, const std::string& source) {
  std::string line;
  long lineno = 0;
  if (!std::getline(in, line)) parse_fail(source, 1, "empty file");
  ++lineno;
  std::istringstream hs(line);
  std::string banner, object, format, field, symm;
  hs >> banner >> object >> format >> field >> symm;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    parse_fail(source, lineno, "missing %%MatrixMarket matrix banner");
  format = lower(format);
  field = lower(field);
  symm = lower(symm);
  const bool coordinate = format == "coordinate";
  if (!coordinate && format != "array")
    parse_fail(source, lineno, "unknown format '" + format + "'");
  const bool complex = field == "complex";
  if (!complex && field != "real" && field != "integer" && field != "double")
    parse_fail(source, lineno, "unsupported field '" + field + "'");
  Symmetry sym;
  if (symm == "general") sym = Symmetry::general;
  else if (symm == "symmetric") sym = Symmetry::symmetric;
  else if (symm == "hermitian") sym = Symmetry::hermitian;
  else if (symm == "skew-symmetric") sym = Symmetry::skew;
  else parse_fail(source, lineno, "unknown symmetry '" + symm + "'");

  // next non-comment line holds the size
  auto next_data_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      const auto p = out.find_first_not_of(" \t\r");
      if (p == std::string::npos || out[p] == '%') continue;
      return true;
    }
    return false;
  };
  if (!next_data_line(line)) parse_fail(source, lineno + 1, "missing size line");
  std::istringstream ss(line);
  long rows = 0, cols = 0, nnz = 0;
  ss >> rows >> cols;
  if (coordinate) ss >> nnz;
  if (ss.fail() || rows < 0 || cols < 0 || nnz < 0)
    parse_fail(source, lineno, "malformed size line");
  if (rows != cols) parse_fail(source, lineno, "matrix is not square");

  Mat m = Mat::Zero(rows, cols);
  auto read_value = [&](std::istringstream& s) {
    double re = 0.0, im = 0.0;
    s >> re;
    if (complex) s >> im;
    if (s.fail()) parse_fail(source, lineno, "malformed entry");
    return cplx(re, im);
  };
  auto mirror = [&](long i, long j, cplx v) {
    m(i, j) = v;
    if (i == j) return;
    switch (sym) {
      case Symmetry::general: break;
      case Symmetry::symmetric: m(j, i) = v; break;
      case Symmetry::hermitian: m(j, i) = std::conj(v); break;
      case Symmetry::skew: m(j, i) = -v; break;
    }
  };

  if (coordinate) {
    for (long k = 0; k < nnz; ++k) {
      if (!next_data_line(line))
        parse_fail(source, lineno + 1,
                   "expected " + std::to_string(nnz) + " entries, found " +
                       std::to_string(k));
      std::istringstream es(line);
      long i = 0, j = 0;
      es >> i >> j;
      if (es.fail()) parse_fail(source, lineno, "malformed entry");
      if (i < 1 || j < 1 || i > rows || j > cols)
        parse_fail(source, lineno, "index out of range");
      mirror(i - 1, j - 1, read_value(es));
    }
  } else {
    // column-major; symmetric storage lists the lower triangle only
    for (long j = 0; j < cols; ++j) {
      const long start = sym == Symmetry::general ? 0
                         : sym == Symmetry::skew  ? j + 1
                                                  : j;
      for (long i = start; i < rows; ++i) {
        if (!next_data_line(line))
          parse_fail(source, lineno + 1, "unexpected end of array data");
        std::istringstream es(line);
        mirror(i, j, read_value(es));
      }
    }
  }
  if (sym == Symmetry::hermitian) {
    for (long i = 0; i < rows; ++i)
      if (std::abs(m(i, i).imag()) > 0.0)
        parse_fail(source, lineno, "hermitian matrix with complex diagonal");
  }
  return m;
}

Mat load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io_error, "cannot open '" + path + "'");
  return read_matrix_market(in, path);
}

void write_matrix_market(std::ostream& out, const Mat& m, bool hermitian) {
  char buf[96];
  if (hermitian) {
    long nnz = 0;
    for (Index j = 0; j < m.cols(); ++j)
      for (Index i = j; i < m.rows(); ++i)
        if (m(i, j) != cplx(0.0)) ++nnz;
    out << "%%MatrixMarket matrix coordinate complex hermitian\n";
    out << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
    for (Index j = 0; j < m.cols(); ++j)
      for (Index i = j; i < m.rows(); ++i) {
        if (m(i, j) == cplx(0.0)) continue;
        std::snprintf(buf, sizeof buf, "%ld %ld %.17g %.17g\n",
                      static_cast<long>(i + 1), static_cast<long>(j + 1),
                      m(i, j).real(), i == j ? 0.0 : m(i, j).imag());
        out << buf;
      }
    return;
  }
  out << "%%MatrixMarket matrix array complex general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g\n", m(i, j).real(),
                    m(i, j).imag());
      out << buf;
    }
}

void save_matrix_market(const std::string& path, const Mat& m,
                        bool hermitian) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::io_error, "cannot write '" + path + "'");
  write_matrix_market(out, m, hermitian);
  require(out.good(), ErrorCode::io_error, "write to '" + path + "' failed");
}

}  // namespace twodevp
