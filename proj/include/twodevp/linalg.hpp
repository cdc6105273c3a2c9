// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "twodevp/types.hpp"

namespace twodevp::linalg {

/// Eigen-decomposition of a dense Hermitian matrix, eigenvalues ascending.
struct HermitianEig {
  RVec values;
  Mat vectors;
};

HermitianEig hermitian_eig(const Mat& h);

/// Spectral norm of a dense Hermitian matrix (max |eigenvalue|).
double hermitian_norm(const Mat& h);

/// Largest deviation from Hermitian symmetry, max |h_ij - conj(h_ji)|.
double hermitian_defect(const Mat& h);

/// All eigenvalues of a general complex matrix (LAPACK zgeev, values only).
Vec general_eigenvalues(const Mat& a);

/// Singular values, descending (zgesdd without vectors).
RVec singular_values(const Mat& a);

/// Compressed band storage for a complex n x n matrix with kl sub- and ku
/// super-diagonals.
class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(Index n, Index kl, Index ku);

  Index rows() const { return n_; }
  Index kl() const { return kl_; }
  Index ku() const { return ku_; }

  bool in_band(Index i, Index j) const {
    return j - i <= ku_ && i - j <= kl_ && i >= 0 && j >= 0 && i < n_ && j < n_;
  }
  cplx operator()(Index i, Index j) const;
  cplx& ref(Index i, Index j);

  Vec apply(const Vec& x) const;
  Vec apply_adjoint(const Vec& x) const;
  Mat dense() const;
  BandedMatrix adjoint() const;

  BandedMatrix& scale(cplx s);
  /// this += s * other; the band widens to cover both operands.
  BandedMatrix plus(const BandedMatrix& other, cplx s = 1.0) const;
  BandedMatrix times(const BandedMatrix& other) const;
  /// diag(d) * this
  BandedMatrix left_diagonal(const Vec& d) const;

  static BandedMatrix identity(Index n);

 private:
  Index n_ = 0, kl_ = 0, ku_ = 0;
  // column-major (kl + ku + 1) x n, entry (i, j) at row ku + i - j
  std::vector<cplx> data_;
};

/// LU factorization with partial pivoting of a banded matrix (zgbtrf).
class BandedLU {
 public:
  explicit BandedLU(const BandedMatrix& m);

  Index rows() const { return n_; }
  /// Smallest |u_ii| of the triangular factor; zero if exactly singular.
  double min_pivot() const { return min_pivot_; }
  double max_pivot() const { return max_pivot_; }

  void solve_in_place(Mat& rhs) const;
  void solve_adjoint_in_place(Mat& rhs) const;
  Vec solve(const Vec& b) const;
  Vec solve_adjoint(const Vec& b) const;

 private:
  void run(Mat& rhs, char trans) const;

  Index n_ = 0, kl_ = 0, ku_ = 0, ldab_ = 0;
  std::vector<cplx> ab_;
  std::vector<int> ipiv_;
  double min_pivot_ = 0.0, max_pivot_ = 0.0;
};

/// Solve a tridiagonal system with sub/diag/super vectors (Thomas algorithm,
/// requires a diagonally dominant matrix) for every column of rhs.
void tridiagonal_solve_in_place(const Vec& sub, const Vec& diag,
                                const Vec& super, Mat& rhs);

using LinearMap = std::function<void(const Vec& in, Vec& out)>;

struct LanczosResult {
  double value = 0.0;
  Vec vector;
  double residual = 0.0;
  int steps = 0;
};

/// Largest eigenpair of a Hermitian map by Lanczos with full
/// reorthogonalization and explicit restarts.
LanczosResult lanczos_largest(const LinearMap& op, Index n, Vec start,
                              int krylov_dim = 40, int max_restarts = 20,
                              double rel_tol = 1e-13);

/// Singular triplet (u, sigma, v) with M v = sigma u, M^H u = sigma v.
struct SingularTriplet {
  Vec u;
  double sigma = 0.0;
  Vec v;
};

/// Solver for M and M^H used by inverse-iteration style singular value
/// computations.
class ShiftedSolver {
 public:
  virtual ~ShiftedSolver() = default;
  virtual Index dim() const = 0;
  virtual Vec solve(const Vec& b) const = 0;          // M^{-1} b
  virtual Vec solve_adjoint(const Vec& b) const = 0;  // M^{-H} b
  virtual Vec apply(const Vec& x) const = 0;          // M x
  virtual Vec apply_adjoint(const Vec& x) const = 0;  // M^H x
};

/// Smallest singular triplet via Lanczos on (M^H M)^{-1}.
SingularTriplet smallest_singular_triplet(const ShiftedSolver& solver,
                                          const Vec* start = nullptr,
                                          double rel_tol = 1e-11);

/// Largest singular value of a dense matrix via Lanczos on M^H M.
double spectral_norm(const Mat& m);

/// Ritz values of largest magnitude of a general linear map, by Arnoldi with
/// full reorthogonalization and explicit restarts. Sorted by magnitude,
/// largest first.
struct ArnoldiResult {
  std::vector<cplx> values;
  std::vector<double> residuals;  // relative Ritz residuals
};

ArnoldiResult arnoldi_largest(const LinearMap& op, Index n, int nev,
                              int krylov_dim = 80, int max_restarts = 15,
                              double rel_tol = 1e-10);

/// Unitary Hessenberg reduction a = q h q^H.
struct HessenbergForm {
  Mat q, h;
};

HessenbergForm hessenberg(const Mat& a);

/// LU with partial pivoting of h - s I for upper Hessenberg h; O(m^2) per
/// factorization and per solve.
class HessenbergShiftedLU {
 public:
  HessenbergShiftedLU(const Mat& h, cplx shift);
  double min_pivot() const { return min_pivot_; }
  Vec solve(Vec b) const;
  Vec solve_adjoint(Vec b) const;

 private:
  Mat u_;
  Vec mult_;
  std::vector<char> swapped_;
  double min_pivot_ = 0.0;
};

}  // namespace twodevp::linalg
