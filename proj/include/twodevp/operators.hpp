// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "twodevp/linalg.hpp"
#include "twodevp/types.hpp"

namespace twodevp {

/// Immutable Hermitian linear operator. Matvecs are reentrant.
class HermitianOperator {
 public:
  virtual ~HermitianOperator() = default;
  virtual Index dim() const = 0;
  virtual void apply(const Vec& x, Vec& y) const = 0;
  /// Materializes the operator; dense-backed operators return their storage.
  virtual Mat dense() const;
  /// Spectral norm, or an upper estimate of it when not known exactly.
  virtual double norm() const;

  Vec operator*(const Vec& x) const {
    Vec y;
    apply(x, y);
    return y;
  }
};

using OperatorPtr = std::shared_ptr<const HermitianOperator>;

class DenseHermitian final : public HermitianOperator {
 public:
  /// Throws unless m is square and Hermitian to 1e-12 relative.
  explicit DenseHermitian(Mat m);
  Index dim() const override { return m_.rows(); }
  void apply(const Vec& x, Vec& y) const override;
  Mat dense() const override { return m_; }
  double norm() const override;
  const Mat& matrix() const { return m_; }

 private:
  Mat m_;
};

/// F kron (g g^H) with F Hermitian m x m and g in C^m. Acts on vectors of
/// length m^2 indexed x[i*m + j] (i runs over F, j over g g^H) in O(m^2).
class KroneckerRankOne final : public HermitianOperator {
 public:
  KroneckerRankOne(Mat f, Vec g);
  Index dim() const override { return f_.rows() * f_.rows(); }
  void apply(const Vec& x, Vec& y) const override;
  double norm() const override;
  const Mat& factor() const { return f_; }
  const Vec& vector() const { return g_; }

 private:
  Mat f_;
  Vec g_;
};

/// alpha * P + beta * Q for Hermitian P, Q and real alpha, beta.
class LinearCombination final : public HermitianOperator {
 public:
  LinearCombination(OperatorPtr p, double alpha, OperatorPtr q, double beta);
  Index dim() const override { return p_->dim(); }
  void apply(const Vec& x, Vec& y) const override;
  Mat dense() const override;

 private:
  OperatorPtr p_, q_;
  double alpha_, beta_;
};

/// A general complex m x m matrix, stored densely or as lhs^{-1} rhs with
/// lhs Hermitian banded (matvecs then cost O(m * bandwidth)).
class DtiMatrix {
 public:
  static std::shared_ptr<const DtiMatrix> from_dense(Mat a,
                                                    std::string name = "");
  static std::shared_ptr<const DtiMatrix> from_banded(
      linalg::BandedMatrix lhs, linalg::BandedMatrix rhs,
      std::string name = "");

  Index dim() const { return n_; }
  const std::string& name() const { return name_; }
  bool banded() const { return !dense_.has_value(); }

  Vec apply(const Vec& x) const;          // ahat x
  Vec apply_adjoint(const Vec& x) const;  // ahat^H x
  /// Dense form; forms lhs^{-1} rhs column by column in the banded case.
  Mat materialize() const;

  const linalg::BandedMatrix& lhs() const { return lhs_; }
  const linalg::BandedMatrix& rhs() const { return rhs_; }
  const Mat* dense() const { return dense_ ? &*dense_ : nullptr; }
  /// Hessenberg form of the dense matrix, computed on first use.
  const linalg::HessenbergForm& hessenberg() const;

 private:
  DtiMatrix() = default;

  mutable std::once_flag hess_once_;
  mutable linalg::HessenbergForm hess_;

  Index n_ = 0;
  std::string name_;
  std::optional<Mat> dense_;
  linalg::BandedMatrix lhs_, rhs_;
  std::shared_ptr<linalg::BandedLU> lhs_lu_;
};

/// Solver for ahat - s I used by singular value and eigenvalue routines.
class ShiftedDtiSolver final : public linalg::ShiftedSolver {
 public:
  ShiftedDtiSolver(std::shared_ptr<const DtiMatrix> src, cplx shift);
  Index dim() const override { return src_->dim(); }
  Vec solve(const Vec& b) const override;
  Vec solve_adjoint(const Vec& b) const override;
  Vec apply(const Vec& x) const override;
  Vec apply_adjoint(const Vec& x) const override;

 private:
  std::shared_ptr<const DtiMatrix> src_;
  cplx shift_;
  std::unique_ptr<linalg::BandedLU> banded_;  // rhs - s lhs
  std::unique_ptr<linalg::HessenbergShiftedLU> hess_;
};

/// [[0, ahat], [ahat^H, 0]]
class DtiBlockA final : public HermitianOperator {
 public:
  explicit DtiBlockA(std::shared_ptr<const DtiMatrix> src);
  Index dim() const override { return 2 * src_->dim(); }
  void apply(const Vec& x, Vec& y) const override;
  double norm() const override;

 private:
  std::shared_ptr<const DtiMatrix> src_;
};

/// [[0, jI], [-jI, 0]]
class DtiBlockC final : public HermitianOperator {
 public:
  explicit DtiBlockC(Index m) : m_(m) {}
  Index dim() const override { return 2 * m_; }
  void apply(const Vec& x, Vec& y) const override;
  double norm() const override { return 1.0; }

 private:
  Index m_;
};

enum class Structure { dense, kronecker_rank_one, dti_block };
enum class Which { A, C, shifted };

std::string to_string(Structure s);

/// The problem datum (A, C). Norms are cached at construction.
class HermitianPair {
 public:
  HermitianPair(OperatorPtr a, OperatorPtr c, Structure tag, double a_norm,
                double c_norm, std::shared_ptr<const DtiMatrix> dti = nullptr);

  /// Dense pair; norms are exact spectral norms.
  static HermitianPair from_dense(Mat a, Mat c);
  /// Structured pair; norms from HermitianOperator::norm.
  static HermitianPair from_operators(
      OperatorPtr a, OperatorPtr c, Structure tag,
      std::shared_ptr<const DtiMatrix> dti = nullptr);

  Index dim() const { return a_->dim(); }
  const HermitianOperator& a() const { return *a_; }
  const HermitianOperator& c() const { return *c_; }
  OperatorPtr a_ptr() const { return a_; }
  OperatorPtr c_ptr() const { return c_; }
  double a_norm() const { return a_norm_; }
  double c_norm() const { return c_norm_; }
  Structure structure() const { return tag_; }
  const DtiMatrix* dti() const { return dti_.get(); }

  /// A x, C x, or (A - mu C) x.
  Vec apply(Which which, double mu, const Vec& x) const;

  /// Dense materializations, computed once and shared between copies.
  const Mat& dense_a() const;
  const Mat& dense_c() const;

  /// Whether C has eigenvalues of both signs. Exact for dense operators up to
  /// the dense limit; dti-block C is always indefinite.
  bool c_indefinite() const;

 private:
  struct Cache {
    std::once_flag a_once, c_once, indef_once;
    Mat a, c;
    bool indefinite = false;
  };

  OperatorPtr a_, c_;
  Structure tag_;
  double a_norm_, c_norm_;
  std::shared_ptr<const DtiMatrix> dti_;
  std::shared_ptr<Cache> cache_;
};

/// The DTI embedding of a stable matrix, dim 2m.
struct DtiBlockPair {
  HermitianPair pair;
  std::shared_ptr<const DtiMatrix> source;
  double ahat_norm = 0.0;

  Index m() const { return source->dim(); }
};

/// Power-iteration estimate of the spectral norm of a Hermitian operator.
double estimate_norm(const HermitianOperator& op, int steps = 50,
                     double safety = 1.01);

// --- generators --------------------------------------------------------------

/// The 3 x 3 pair with the known 2D-eigentriplet (1, 1, [0, 1, 1]/sqrt 2).
HermitianPair build_example61();

DtiBlockPair build_dti_pair(std::shared_ptr<const DtiMatrix> ahat);
DtiBlockPair build_dti_pair(Mat ahat);

/// Orr-Sommerfeld matrix L^{-1} B for planar Poiseuille flow, kept as its
/// banded factors.
std::shared_ptr<const DtiMatrix> build_orr_sommerfeld(Index n,
                                                       double reynolds);

struct MimoPair {
  OperatorPtr a;
  OperatorPtr b;
  Mat f1, f2;
  Vec g1, g2;
};

/// MIMO relay precoder RQminmax matrices A = F1 kron g1 g1^H,
/// B = F2 kron g2 g2^H for channels h_up = [h1 h2], h_dl = [g1 g2].
MimoPair build_mimo_pair(const Mat& h_up, const Mat& h_dl, double gamma_th,
                         double sigma_r2, double sigma_d2);

/// Complex Gaussian channels (unit variance) drawn from the seed.
MimoPair random_mimo_pair(Index m, std::uint64_t seed,
                          double gamma_th = std::pow(10.0, 0.3),
                          double sigma_r2 = 0.1, double sigma_d2 = 0.1);

/// Random dense Hermitian pair with C indefinite, both of unit-order norm.
HermitianPair random_indefinite_pair(Index n, std::uint64_t seed);

/// Random complex Gaussian matrix shifted so that its rightmost eigenvalue
/// has real part -margin.
std::shared_ptr<const DtiMatrix> random_stable_matrix(Index m,
                                                      std::uint64_t seed,
                                                      double margin = 0.1);

}  // namespace twodevp
