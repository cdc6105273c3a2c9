// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#include "twodevp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace twodevp::linalg {

HermitianEig hermitian_eig(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  require(es.info() == Eigen::Success, ErrorCode::numerical,
          "Hermitian eigensolver failed to converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

double hermitian_norm(const Mat& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  require(es.info() == Eigen::Success, ErrorCode::numerical,
          "Hermitian eigensolver failed to converge");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double hermitian_defect(const Mat& h) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

Vec general_eigenvalues(const Mat& a) {
  require(a.rows() == a.cols(), ErrorCode::dimension_mismatch,
          "eigenvalues of a non-square matrix");
  const auto n = static_cast<lapack_int>(a.rows());
  if (n == 0) return {};
  Mat work = a;
  Vec w(n);
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, w.data(),
                    nullptr, 1, nullptr, 1);
  require(info == 0, ErrorCode::numerical,
          "zgeev failed with info=" + std::to_string(info));
  return w;
}

RVec singular_values(const Mat& a) {
  const auto m = static_cast<lapack_int>(a.rows());
  const auto n = static_cast<lapack_int>(a.cols());
  if (m == 0 || n == 0) return {};
  Mat work = a;
  RVec s(std::min(m, n));
  const lapack_int info =
      LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m, s.data(),
                     nullptr, 1, nullptr, 1);
  require(info == 0, ErrorCode::numerical,
          "zgesdd failed with info=" + std::to_string(info));
  return s;
}

// ---------------------------------------------------------------------------
// BandedMatrix

BandedMatrix::BandedMatrix(Index n, Index kl, Index ku)
    : n_(n), kl_(kl), ku_(ku),
      data_(static_cast<std::size_t>((kl + ku + 1) * n), cplx(0.0)) {
  require(n >= 0 && kl >= 0 && ku >= 0, ErrorCode::invalid_argument,
          "negative band dimensions");
}

cplx BandedMatrix::operator()(Index i, Index j) const {
  if (!in_band(i, j)) return 0.0;
  return data_[static_cast<std::size_t>(j * (kl_ + ku_ + 1) + ku_ + i - j)];
}

cplx& BandedMatrix::ref(Index i, Index j) {
  require(in_band(i, j), ErrorCode::invalid_argument,
          "banded entry outside of the band");
  return data_[static_cast<std::size_t>(j * (kl_ + ku_ + 1) + ku_ + i - j)];
}

Vec BandedMatrix::apply(const Vec& x) const {
  require(x.size() == n_, ErrorCode::dimension_mismatch, "banded matvec");
  Vec y = Vec::Zero(n_);
  for (Index j = 0; j < n_; ++j) {
    const Index lo = std::max<Index>(0, j - ku_);
    const Index hi = std::min<Index>(n_ - 1, j + kl_);
    for (Index i = lo; i <= hi; ++i) y(i) += (*this)(i, j) * x(j);
  }
  return y;
}

Vec BandedMatrix::apply_adjoint(const Vec& x) const {
  require(x.size() == n_, ErrorCode::dimension_mismatch, "banded matvec");
  Vec y = Vec::Zero(n_);
  for (Index j = 0; j < n_; ++j) {
    const Index lo = std::max<Index>(0, j - ku_);
    const Index hi = std::min<Index>(n_ - 1, j + kl_);
    cplx acc = 0.0;
    for (Index i = lo; i <= hi; ++i) acc += std::conj((*this)(i, j)) * x(i);
    y(j) = acc;
  }
  return y;
}

Mat BandedMatrix::dense() const {
  Mat d = Mat::Zero(n_, n_);
  for (Index j = 0; j < n_; ++j)
    for (Index i = std::max<Index>(0, j - ku_);
         i <= std::min<Index>(n_ - 1, j + kl_); ++i)
      d(i, j) = (*this)(i, j);
  return d;
}

BandedMatrix BandedMatrix::adjoint() const {
  BandedMatrix t(n_, ku_, kl_);
  for (Index j = 0; j < n_; ++j)
    for (Index i = std::max<Index>(0, j - ku_);
         i <= std::min<Index>(n_ - 1, j + kl_); ++i)
      t.ref(j, i) = std::conj((*this)(i, j));
  return t;
}

BandedMatrix& BandedMatrix::scale(cplx s) {
  for (auto& v : data_) v *= s;
  return *this;
}

BandedMatrix BandedMatrix::plus(const BandedMatrix& other, cplx s) const {
  require(other.n_ == n_, ErrorCode::dimension_mismatch, "banded sum");
  BandedMatrix r(n_, std::max(kl_, other.kl_), std::max(ku_, other.ku_));
  for (Index j = 0; j < n_; ++j)
    for (Index i = std::max<Index>(0, j - r.ku_);
         i <= std::min<Index>(n_ - 1, j + r.kl_); ++i)
      r.ref(i, j) = (*this)(i, j) + s * other(i, j);
  return r;
}

BandedMatrix BandedMatrix::times(const BandedMatrix& other) const {
  require(other.n_ == n_, ErrorCode::dimension_mismatch, "banded product");
  BandedMatrix r(n_, std::min(n_ - 1, kl_ + other.kl_),
                 std::min(n_ - 1, ku_ + other.ku_));
  if (n_ == 0) return r;
  for (Index j = 0; j < n_; ++j) {
    for (Index k = std::max<Index>(0, j - other.ku_);
         k <= std::min<Index>(n_ - 1, j + other.kl_); ++k) {
      const cplx b = other(k, j);
      if (b == cplx(0.0)) continue;
      for (Index i = std::max<Index>(0, k - ku_);
           i <= std::min<Index>(n_ - 1, k + kl_); ++i)
        r.ref(i, j) += (*this)(i, k) * b;
    }
  }
  return r;
}

BandedMatrix BandedMatrix::left_diagonal(const Vec& d) const {
  require(d.size() == n_, ErrorCode::dimension_mismatch, "diagonal scaling");
  BandedMatrix r = *this;
  for (Index j = 0; j < n_; ++j)
    for (Index i = std::max<Index>(0, j - ku_);
         i <= std::min<Index>(n_ - 1, j + kl_); ++i)
      r.ref(i, j) *= d(i);
  return r;
}

BandedMatrix BandedMatrix::identity(Index n) {
  BandedMatrix r(n, 0, 0);
  for (Index i = 0; i < n; ++i) r.ref(i, i) = 1.0;
  return r;
}

// ---------------------------------------------------------------------------
// BandedLU

BandedLU::BandedLU(const BandedMatrix& m)
    : n_(m.rows()), kl_(m.kl()), ku_(m.ku()), ldab_(2 * m.kl() + m.ku() + 1) {
  ab_.assign(static_cast<std::size_t>(ldab_ * std::max<Index>(n_, 1)), 0.0);
  ipiv_.assign(static_cast<std::size_t>(std::max<Index>(n_, 1)), 0);
  // zgbtrf layout: entry (i, j) at row kl + ku + i - j of column j
  for (Index j = 0; j < n_; ++j)
    for (Index i = std::max<Index>(0, j - ku_);
         i <= std::min<Index>(n_ - 1, j + kl_); ++i)
      ab_[static_cast<std::size_t>(j * ldab_ + kl_ + ku_ + i - j)] = m(i, j);
  if (n_ == 0) return;
  const lapack_int info = LAPACKE_zgbtrf(
      LAPACK_COL_MAJOR, static_cast<lapack_int>(n_),
      static_cast<lapack_int>(n_), static_cast<lapack_int>(kl_),
      static_cast<lapack_int>(ku_), ab_.data(),
      static_cast<lapack_int>(ldab_), ipiv_.data());
  require(info >= 0, ErrorCode::numerical, "zgbtrf argument error");
  min_pivot_ = std::numeric_limits<double>::infinity();
  max_pivot_ = 0.0;
  for (Index j = 0; j < n_; ++j) {
    const double p =
        std::abs(ab_[static_cast<std::size_t>(j * ldab_ + kl_ + ku_)]);
    min_pivot_ = std::min(min_pivot_, p);
    max_pivot_ = std::max(max_pivot_, p);
  }
  if (info > 0) min_pivot_ = 0.0;
}

void BandedLU::run(Mat& rhs, char trans) const {
  require(rhs.rows() == n_, ErrorCode::dimension_mismatch, "banded solve");
  require(min_pivot_ > 0.0, ErrorCode::singular, "banded matrix is singular");
  if (n_ == 0 || rhs.cols() == 0) return;
  const lapack_int info = LAPACKE_zgbtrs(
      LAPACK_COL_MAJOR, trans, static_cast<lapack_int>(n_),
      static_cast<lapack_int>(kl_), static_cast<lapack_int>(ku_),
      static_cast<lapack_int>(rhs.cols()), ab_.data(),
      static_cast<lapack_int>(ldab_), ipiv_.data(), rhs.data(),
      static_cast<lapack_int>(rhs.rows()));
  require(info == 0, ErrorCode::numerical, "zgbtrs failed");
}

void BandedLU::solve_in_place(Mat& rhs) const { run(rhs, 'N'); }
void BandedLU::solve_adjoint_in_place(Mat& rhs) const { run(rhs, 'C'); }

Vec BandedLU::solve(const Vec& b) const {
  Mat m = b;
  run(m, 'N');
  return m.col(0);
}

Vec BandedLU::solve_adjoint(const Vec& b) const {
  Mat m = b;
  run(m, 'C');
  return m.col(0);
}

void tridiagonal_solve_in_place(const Vec& sub, const Vec& diag,
                                const Vec& super, Mat& rhs) {
  const Index n = diag.size();
  require(rhs.rows() == n && sub.size() == n - 1 && super.size() == n - 1,
          ErrorCode::dimension_mismatch, "tridiagonal solve");
  if (n == 0) return;
  Vec c(n), d(n);
  // forward sweep on the coefficients once, then on every column
  d(0) = diag(0);
  for (Index i = 1; i < n; ++i) {
    c(i) = sub(i - 1) / d(i - 1);
    d(i) = diag(i) - c(i) * super(i - 1);
  }
  for (Index col = 0; col < rhs.cols(); ++col) {
    auto x = rhs.col(col);
    for (Index i = 1; i < n; ++i) x(i) -= c(i) * x(i - 1);
    x(n - 1) /= d(n - 1);
    for (Index i = n - 2; i >= 0; --i)
      x(i) = (x(i) - super(i) * x(i + 1)) / d(i);
  }
}

// ---------------------------------------------------------------------------
// Lanczos

namespace {

Vec deterministic_start(Index n) {
  std::mt19937_64 gen(0x2d5eed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vec v(n);
  for (Index i = 0; i < n; ++i) v(i) = cplx(dist(gen), dist(gen));
  return v.normalized();
}

}  // namespace

LanczosResult lanczos_largest(const LinearMap& op, Index n, Vec start,
                              int krylov_dim, int max_restarts,
                              double rel_tol) {
  require(n > 0, ErrorCode::invalid_argument, "Lanczos on an empty space");
  if (start.size() != n || start.norm() == 0.0) start = deterministic_start(n);
  Vec q = start.normalized();
  const Index kmax = std::min<Index>(krylov_dim, n);
  LanczosResult best;
  Vec w(n);
  for (int restart = 0; restart <= max_restarts; ++restart) {
    Mat basis(n, kmax);
    RVec alpha(kmax), beta(kmax);
    basis.col(0) = q;
    Index k = 0;
    for (; k < kmax; ++k) {
      op(basis.col(k), w);
      ++best.steps;
      alpha(k) = basis.col(k).dot(w).real();
      for (int pass = 0; pass < 2; ++pass) {
        Vec h = basis.leftCols(k + 1).adjoint() * w;
        w -= basis.leftCols(k + 1) * h;
      }
      beta(k) = w.norm();
      if ((k + 1) % 5 == 0 && k + 1 < kmax) {
        // residual estimate beta_k |e_k^T s| of the leading Ritz pair
        RMat tk = RMat::Zero(k + 1, k + 1);
        for (Index i = 0; i <= k; ++i) {
          tk(i, i) = alpha(i);
          if (i < k) tk(i, i + 1) = tk(i + 1, i) = beta(i);
        }
        Eigen::SelfAdjointEigenSolver<RMat> ek(tk);
        const double est = beta(k) * std::abs(ek.eigenvectors()(k, k));
        if (est <= rel_tol * std::abs(ek.eigenvalues()(k))) {
          ++k;
          break;
        }
      }
      if (k + 1 < kmax) {
        if (beta(k) <= 1e-14 * std::abs(alpha(k)) || beta(k) == 0.0) {
          ++k;
          break;
        }
        basis.col(k + 1) = w / beta(k);
      }
    }
    RMat t = RMat::Zero(k, k);
    for (Index i = 0; i < k; ++i) {
      t(i, i) = alpha(i);
      if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta(i);
    }
    Eigen::SelfAdjointEigenSolver<RMat> es(t);
    const double theta = es.eigenvalues()(k - 1);
    const RVec s = es.eigenvectors().col(k - 1);
    Vec ritz = basis.leftCols(k) * s.cast<cplx>();
    ritz.normalize();
    op(ritz, w);
    ++best.steps;
    const double res = (w - theta * ritz).norm();
    // a restart that fails to halve the residual has hit the roundoff floor
    const bool stalled = restart > 0 && res > 0.5 * best.residual;
    if (restart == 0 || res < best.residual) {
      best.value = theta;
      best.vector = ritz;
      best.residual = res;
    }
    if (res <= rel_tol * std::abs(theta) || k == n || stalled) break;
    q = ritz;
  }
  return best;
}

SingularTriplet smallest_singular_triplet(const ShiftedSolver& solver,
                                          const Vec* start, double rel_tol) {
  const Index n = solver.dim();
  const LinearMap inv_gram = [&solver](const Vec& in, Vec& out) {
    out = solver.solve(solver.solve_adjoint(in));
  };
  Vec v0 = start ? *start : Vec();
  const LanczosResult lr = lanczos_largest(inv_gram, n, v0, 40, 20, rel_tol);
  SingularTriplet t;
  t.v = lr.vector;
  // the Ritz value is more accurate than |M v| when M is applied implicitly
  t.sigma = lr.value > 0.0 ? 1.0 / std::sqrt(lr.value) : 0.0;
  const Vec mv = solver.apply(t.v);
  t.u = mv.norm() > 0.0 ? Vec(mv.normalized()) : Vec(solver.solve(t.v).normalized());
  return t;
}

double spectral_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  const LinearMap gram = [&m](const Vec& in, Vec& out) {
    out = m.adjoint() * (m * in);
  };
  const LanczosResult lr = lanczos_largest(gram, m.cols(), Vec(), 40, 20,
                                           1e-14);
  return std::sqrt(std::max(lr.value, 0.0));
}

}  // namespace twodevp::linalg

namespace twodevp::linalg {

ArnoldiResult arnoldi_largest(const LinearMap& op, Index n, int nev,
                              int krylov_dim, int max_restarts,
                              double rel_tol) {
  require(n > 0 && nev > 0, ErrorCode::invalid_argument, "Arnoldi sizes");
  const Index kmax = std::min<Index>(krylov_dim, n);
  const Index want = std::min<Index>(nev, kmax);
  Vec q = deterministic_start(n);
  ArnoldiResult out;
  Vec w(n);
  for (int restart = 0; restart <= max_restarts; ++restart) {
    Mat basis = Mat::Zero(n, kmax + 1);
    Mat h = Mat::Zero(kmax + 1, kmax);
    basis.col(0) = q;
    Index k = 0;
    for (; k < kmax; ++k) {
      op(basis.col(k), w);
      for (int pass = 0; pass < 2; ++pass) {
        const Vec c = basis.leftCols(k + 1).adjoint() * w;
        w -= basis.leftCols(k + 1) * c;
        h.col(k).head(k + 1) += c;
      }
      const double beta = w.norm();
      h(k + 1, k) = beta;
      if (beta <= 1e-14 * h.col(k).head(k + 1).norm()) {
        ++k;
        break;
      }
      basis.col(k + 1) = w / beta;
    }
    Eigen::ComplexEigenSolver<Mat> es(h.topLeftCorner(k, k));
    require(es.info() == Eigen::Success, ErrorCode::numerical,
            "Arnoldi Ritz values did not converge");
    std::vector<Index> order(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      return std::abs(es.eigenvalues()(a)) > std::abs(es.eigenvalues()(b));
    });
    out.values.clear();
    out.residuals.clear();
    bool done = true;
    Vec next = Vec::Zero(n);
    const double beta = std::abs(h(k, k - 1));
    for (Index t = 0; t < std::min(want, k); ++t) {
      const Index i = order[static_cast<std::size_t>(t)];
      const cplx theta = es.eigenvalues()(i);
      const Vec s = es.eigenvectors().col(i).normalized();
      const double res =
          (k == kmax ? beta : 0.0) * std::abs(s(k - 1)) /
          std::max(std::abs(theta), 1e-300);
      out.values.push_back(theta);
      out.residuals.push_back(res);
      if (res > rel_tol) {
        done = false;
        next += basis.leftCols(k) * s;
      }
    }
    if (done || k < kmax) break;
    q = next.normalized();
  }
  return out;
}

HessenbergForm hessenberg(const Mat& a) {
  Eigen::HessenbergDecomposition<Mat> hd(a);
  HessenbergForm f{hd.matrixQ(), hd.matrixH()};
  return f;
}

HessenbergShiftedLU::HessenbergShiftedLU(const Mat& h, cplx shift)
    : u_(h), mult_(Vec::Zero(std::max<Index>(h.rows() - 1, 0))),
      swapped_(static_cast<std::size_t>(std::max<Index>(h.rows() - 1, 0)), 0) {
  const Index m = u_.rows();
  u_.diagonal().array() -= shift;
  for (Index k = 0; k + 1 < m; ++k) {
    if (std::abs(u_(k + 1, k)) > std::abs(u_(k, k))) {
      u_.row(k).segment(k, m - k).swap(u_.row(k + 1).segment(k, m - k));
      swapped_[static_cast<std::size_t>(k)] = 1;
    }
    const cplx piv = u_(k, k);
    const cplx l = piv == cplx(0.0) ? cplx(0.0) : u_(k + 1, k) / piv;
    mult_(k) = l;
    u_.row(k + 1).segment(k, m - k) -= l * u_.row(k).segment(k, m - k);
    u_(k + 1, k) = 0.0;
  }
  min_pivot_ = m > 0 ? u_.diagonal().cwiseAbs().minCoeff() : 0.0;
}

Vec HessenbergShiftedLU::solve(Vec b) const {
  require(min_pivot_ > 0.0, ErrorCode::singular, "shifted matrix is singular");
  const Index m = u_.rows();
  for (Index k = 0; k + 1 < m; ++k) {
    if (swapped_[static_cast<std::size_t>(k)]) std::swap(b(k), b(k + 1));
    b(k + 1) -= mult_(k) * b(k);
  }
  u_.triangularView<Eigen::Upper>().solveInPlace(b);
  return b;
}

Vec HessenbergShiftedLU::solve_adjoint(Vec b) const {
  require(min_pivot_ > 0.0, ErrorCode::singular, "shifted matrix is singular");
  const Index m = u_.rows();
  u_.adjoint().triangularView<Eigen::Lower>().solveInPlace(b);
  for (Index k = m - 2; k >= 0; --k) {
    b(k) -= std::conj(mult_(k)) * b(k + 1);
    if (swapped_[static_cast<std::size_t>(k)]) std::swap(b(k), b(k + 1));
  }
  return b;
}

}  // namespace twodevp::linalg
