// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#include "twodevp/operators.hpp"

#include <algorithm>
#include <random>

namespace twodevp {

Mat HermitianOperator::dense() const {
  const Index n = dim();
  Mat d(n, n);
  Vec e = Vec::Zero(n), y;
  for (Index j = 0; j < n; ++j) {
    e(j) = 1.0;
    apply(e, y);
    d.col(j) = y;
    e(j) = 0.0;
  }
  return d;
}

double HermitianOperator::norm() const { return estimate_norm(*this); }

double estimate_norm(const HermitianOperator& op, int steps, double safety) {
  const Index n = op.dim();
  if (n == 0) return 0.0;
  std::mt19937_64 gen(0x6e6f726d);
  std::normal_distribution<double> dist;
  Vec v(n);
  for (Index i = 0; i < n; ++i) v(i) = cplx(dist(gen), dist(gen));
  v.normalize();
  Vec w;
  double est = 0.0;
  for (int s = 0; s < steps; ++s) {
    op.apply(v, w);
    est = w.norm();
    if (est == 0.0) return 0.0;
    v = w / est;
  }
  return safety * est;
}

// ---------------------------------------------------------------------------

DenseHermitian::DenseHermitian(Mat m) : m_(std::move(m)) {
  require(m_.rows() == m_.cols(), ErrorCode::dimension_mismatch,
          "Hermitian operator must be square");
  if (m_.size() == 0) return;
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  require(linalg::hermitian_defect(m_) <= 1e-12 * scale,
          ErrorCode::invalid_argument, "matrix is not Hermitian");
  m_ = (0.5 * (m_ + m_.adjoint())).eval();
}

void DenseHermitian::apply(const Vec& x, Vec& y) const {
  require(x.size() == m_.cols(), ErrorCode::dimension_mismatch,
          "operator dimension mismatch");
  y.noalias() = m_ * x;
}

double DenseHermitian::norm() const { return linalg::hermitian_norm(m_); }

KroneckerRankOne::KroneckerRankOne(Mat f, Vec g)
    : f_(std::move(f)), g_(std::move(g)) {
  require(f_.rows() == f_.cols() && f_.rows() == g_.size(),
          ErrorCode::dimension_mismatch, "Kronecker factor shapes");
  const double scale = std::max(1.0, f_.cwiseAbs().maxCoeff());
  require(linalg::hermitian_defect(f_) <= 1e-12 * scale,
          ErrorCode::invalid_argument, "Kronecker factor is not Hermitian");
  f_ = (0.5 * (f_ + f_.adjoint())).eval();
}

void KroneckerRankOne::apply(const Vec& x, Vec& y) const {
  const Index m = f_.rows();
  require(x.size() == m * m, ErrorCode::dimension_mismatch,
          "operator dimension mismatch");
  // with X(i, j) = x[i*m + j] the product is F X conj(g) g^T; the column-major
  // map below is X^T
  Eigen::Map<const Mat> xt(x.data(), m, m);
  const Vec s = xt.transpose() * g_.conjugate();  // X conj(g)
  const Vec t = f_ * s;
  y.resize(m * m);
  Eigen::Map<Mat> yt(y.data(), m, m);
  yt.noalias() = g_ * t.transpose();
}

double KroneckerRankOne::norm() const {
  return linalg::hermitian_norm(f_) * g_.squaredNorm();
}

LinearCombination::LinearCombination(OperatorPtr p, double alpha,
                                     OperatorPtr q, double beta)
    : p_(std::move(p)), q_(std::move(q)), alpha_(alpha), beta_(beta) {
  require(p_ && q_ && p_->dim() == q_->dim(), ErrorCode::dimension_mismatch,
          "operator dimension mismatch");
}

void LinearCombination::apply(const Vec& x, Vec& y) const {
  Vec t;
  p_->apply(x, y);
  q_->apply(x, t);
  y = alpha_ * y + beta_ * t;
}

Mat LinearCombination::dense() const {
  return alpha_ * p_->dense() + beta_ * q_->dense();
}

// ---------------------------------------------------------------------------

std::shared_ptr<const DtiMatrix> DtiMatrix::from_dense(Mat a,
                                                       std::string name) {
  require(a.rows() == a.cols(), ErrorCode::dimension_mismatch,
          "stable matrix must be square");
  std::shared_ptr<DtiMatrix> d(new DtiMatrix);
  d->n_ = a.rows();
  d->dense_ = std::move(a);
  d->name_ = std::move(name);
  return d;
}

std::shared_ptr<const DtiMatrix> DtiMatrix::from_banded(
    linalg::BandedMatrix lhs, linalg::BandedMatrix rhs, std::string name) {
  require(lhs.rows() == rhs.rows(), ErrorCode::dimension_mismatch,
          "banded factor shapes");
  std::shared_ptr<DtiMatrix> d(new DtiMatrix);
  d->n_ = lhs.rows();
  d->lhs_lu_ = std::make_shared<linalg::BandedLU>(lhs);
  require(d->lhs_lu_->min_pivot() > 0.0, ErrorCode::singular,
          "banded left factor is singular");
  d->lhs_ = std::move(lhs);
  d->rhs_ = std::move(rhs);
  d->name_ = std::move(name);
  return d;
}

Vec DtiMatrix::apply(const Vec& x) const {
  require(x.size() == n_, ErrorCode::dimension_mismatch, "matvec dimension");
  if (dense_) return *dense_ * x;
  return lhs_lu_->solve(rhs_.apply(x));
}

Vec DtiMatrix::apply_adjoint(const Vec& x) const {
  require(x.size() == n_, ErrorCode::dimension_mismatch, "matvec dimension");
  if (dense_) return dense_->adjoint() * x;
  return rhs_.apply_adjoint(lhs_lu_->solve(x));
}

Mat DtiMatrix::materialize() const {
  if (dense_) return *dense_;
  Mat m = rhs_.dense();
  lhs_lu_->solve_in_place(m);
  return m;
}

const linalg::HessenbergForm& DtiMatrix::hessenberg() const {
  std::call_once(hess_once_, [this] {
    hess_ = linalg::hessenberg(dense_ ? *dense_ : materialize());
  });
  return hess_;
}

ShiftedDtiSolver::ShiftedDtiSolver(std::shared_ptr<const DtiMatrix> src,
                                   cplx shift)
    : src_(std::move(src)), shift_(shift) {
  if (src_->banded()) {
    banded_ = std::make_unique<linalg::BandedLU>(
        src_->rhs().plus(src_->lhs(), -shift_));
    require(banded_->min_pivot() > 0.0, ErrorCode::singular,
            "shifted matrix is singular");
  } else {
    hess_ = std::make_unique<linalg::HessenbergShiftedLU>(
        src_->hessenberg().h, shift_);
    require(hess_->min_pivot() > 0.0, ErrorCode::singular,
            "shifted matrix is singular");
  }
}

// (L^{-1} B - s I)^{-1} = (B - s L)^{-1} L and its adjoint L (B - s L)^{-H}
Vec ShiftedDtiSolver::solve(const Vec& b) const {
  if (banded_) return banded_->solve(src_->lhs().apply(b));
  const Mat& q = src_->hessenberg().q;
  return q * hess_->solve(q.adjoint() * b);
}

Vec ShiftedDtiSolver::solve_adjoint(const Vec& b) const {
  if (banded_) return src_->lhs().apply_adjoint(banded_->solve_adjoint(b));
  const Mat& q = src_->hessenberg().q;
  return q * hess_->solve_adjoint(q.adjoint() * b);
}

Vec ShiftedDtiSolver::apply(const Vec& x) const {
  return src_->apply(x) - shift_ * x;
}

Vec ShiftedDtiSolver::apply_adjoint(const Vec& x) const {
  return src_->apply_adjoint(x) - std::conj(shift_) * x;
}

DtiBlockA::DtiBlockA(std::shared_ptr<const DtiMatrix> src)
    : src_(std::move(src)) {}

void DtiBlockA::apply(const Vec& x, Vec& y) const {
  const Index m = src_->dim();
  require(x.size() == 2 * m, ErrorCode::dimension_mismatch,
          "operator dimension mismatch");
  y.resize(2 * m);
  y.head(m) = src_->apply(x.tail(m));
  y.tail(m) = src_->apply_adjoint(x.head(m));
}

double DtiBlockA::norm() const {
  const DtiMatrix& s = *src_;
  const linalg::LinearMap gram = [&s](const Vec& in, Vec& out) {
    out = s.apply_adjoint(s.apply(in));
  };
  const auto lr = linalg::lanczos_largest(gram, s.dim(), Vec(), 40, 30, 1e-14);
  return std::sqrt(std::max(lr.value, 0.0));
}

void DtiBlockC::apply(const Vec& x, Vec& y) const {
  require(x.size() == 2 * m_, ErrorCode::dimension_mismatch,
          "operator dimension mismatch");
  y.resize(2 * m_);
  y.head(m_) = kI * x.tail(m_);
  y.tail(m_) = -kI * x.head(m_);
}

// ---------------------------------------------------------------------------

std::string to_string(Structure s) {
  switch (s) {
    case Structure::dense: return "dense";
    case Structure::kronecker_rank_one: return "kronecker-rank-one";
    case Structure::dti_block: return "dti-block";
  }
  return "unknown";
}

HermitianPair::HermitianPair(OperatorPtr a, OperatorPtr c, Structure tag,
                             double a_norm, double c_norm,
                             std::shared_ptr<const DtiMatrix> dti)
    : a_(std::move(a)), c_(std::move(c)), tag_(tag), a_norm_(a_norm),
      c_norm_(c_norm), dti_(std::move(dti)),
      cache_(std::make_shared<Cache>()) {
  require(a_ && c_, ErrorCode::invalid_argument, "null operator");
  require(a_->dim() == c_->dim() && a_->dim() > 0,
          ErrorCode::dimension_mismatch, "A and C dimensions differ");
}

HermitianPair HermitianPair::from_dense(Mat a, Mat c) {
  require(a.rows() == c.rows() && a.cols() == c.cols(),
          ErrorCode::dimension_mismatch, "A and C dimensions differ");
  auto ao = std::make_shared<DenseHermitian>(std::move(a));
  auto co = std::make_shared<DenseHermitian>(std::move(c));
  const double an = ao->norm(), cn = co->norm();
  return HermitianPair(ao, co, Structure::dense, an, cn);
}

HermitianPair HermitianPair::from_operators(
    OperatorPtr a, OperatorPtr c, Structure tag,
    std::shared_ptr<const DtiMatrix> dti) {
  require(a && c, ErrorCode::invalid_argument, "null operator");
  const double an = a->norm(), cn = c->norm();
  return HermitianPair(std::move(a), std::move(c), tag, an, cn,
                       std::move(dti));
}

Vec HermitianPair::apply(Which which, double mu, const Vec& x) const {
  require(x.size() == dim(), ErrorCode::dimension_mismatch,
          "vector length does not match the pair dimension");
  Vec y;
  switch (which) {
    case Which::A: a_->apply(x, y); break;
    case Which::C: c_->apply(x, y); break;
    case Which::shifted: {
      Vec t;
      a_->apply(x, y);
      if (mu != 0.0) {
        c_->apply(x, t);
        y -= mu * t;
      }
      break;
    }
  }
  return y;
}

namespace {

void check_materializable(const HermitianPair& p) {
  const Index limit =
      p.structure() == Structure::kronecker_rank_one ? 1024 : kDenseLimit;
  require(p.dim() <= limit, ErrorCode::unsupported,
          "pair of dimension " + std::to_string(p.dim()) +
              " is too large to materialize (limit " + std::to_string(limit) +
              " for " + to_string(p.structure()) + ")");
}

}  // namespace

const Mat& HermitianPair::dense_a() const {
  check_materializable(*this);
  std::call_once(cache_->a_once, [this] { cache_->a = a_->dense(); });
  return cache_->a;
}

const Mat& HermitianPair::dense_c() const {
  check_materializable(*this);
  std::call_once(cache_->c_once, [this] { cache_->c = c_->dense(); });
  return cache_->c;
}

bool HermitianPair::c_indefinite() const {
  std::call_once(cache_->indef_once, [this] {
    if (tag_ == Structure::dti_block) {
      cache_->indefinite = true;
      return;
    }
    if (tag_ == Structure::dense) {
      const auto eig = linalg::hermitian_eig(dense_c());
      const double tol = 1e-14 * std::max(c_norm_, 1e-300);
      cache_->indefinite = eig.values(0) < -tol &&
                           eig.values(eig.values.size() - 1) > tol;
      return;
    }
    const HermitianOperator& c = *c_;
    const double shift = c_norm_;
    // extreme eigenvalues from Lanczos on C + s I and s I - C
    const linalg::LinearMap up = [&](const Vec& in, Vec& out) {
      c.apply(in, out);
      out += shift * in;
    };
    const linalg::LinearMap down = [&](const Vec& in, Vec& out) {
      c.apply(in, out);
      out = shift * in - out;
    };
    const double top = linalg::lanczos_largest(up, dim(), Vec()).value - shift;
    const double bottom =
        shift - linalg::lanczos_largest(down, dim(), Vec()).value;
    const double tol = 1e-12 * c_norm_;
    cache_->indefinite = bottom < -tol && top > tol;
  });
  return cache_->indefinite;
}

// ---------------------------------------------------------------------------
// generators

HermitianPair build_example61() {
  Mat a(3, 3), c(3, 3);
  a << -0.7, 0.01, 0.2,
       0.01, 2.0, 0.0,
       0.2, 0.0, 0.0;
  c << 0.3, 0.01, 0.2,
       0.01, 1.0, 0.0,
       0.2, 0.0, -1.0;
  return HermitianPair::from_dense(a, c);
}

DtiBlockPair build_dti_pair(std::shared_ptr<const DtiMatrix> ahat) {
  require(ahat != nullptr && ahat->dim() > 0, ErrorCode::invalid_argument,
          "empty stable matrix");
  auto a = std::make_shared<DtiBlockA>(ahat);
  auto c = std::make_shared<DtiBlockC>(ahat->dim());
  const double an = a->norm();
  DtiBlockPair p{HermitianPair(a, c, Structure::dti_block, an, 1.0, ahat),
                 ahat, an};
  return p;
}

DtiBlockPair build_dti_pair(Mat ahat) {
  return build_dti_pair(DtiMatrix::from_dense(std::move(ahat)));
}

std::shared_ptr<const DtiMatrix> build_orr_sommerfeld(Index n,
                                                       double reynolds) {
  require(n >= 2, ErrorCode::invalid_argument,
          "Orr-Sommerfeld dimension must be at least 2");
  require(reynolds > 0.0, ErrorCode::invalid_argument,
          "Reynolds number must be positive");
  const double h = 2.0 / static_cast<double>(n + 1);
  const double ih2 = 1.0 / (h * h);
  linalg::BandedMatrix l(n, 1, 1);
  for (Index i = 0; i < n; ++i) {
    l.ref(i, i) = -(2.0 + h * h) * ih2;
    if (i + 1 < n) {
      l.ref(i + 1, i) = ih2;
      l.ref(i, i + 1) = ih2;
    }
  }
  Vec u(n);
  for (Index k = 0; k < n; ++k) {
    const double uk = -1.0 + static_cast<double>(k + 1) * h;
    u(k) = 1.0 - uk * uk;
  }
  // B = (1/Re) L^2 - i (U L + 2 I)
  linalg::BandedMatrix b = l.times(l).scale(1.0 / reynolds);
  b = b.plus(l.left_diagonal(u), -kI);
  b = b.plus(linalg::BandedMatrix::identity(n), -2.0 * kI);
  return DtiMatrix::from_banded(std::move(l), std::move(b),
                                "orr-sommerfeld");
}

namespace {

Mat inverse_sqrt_hpd(const Mat& m) {
  const auto eig = linalg::hermitian_eig(m);
  require(eig.values(0) > 0.0, ErrorCode::numerical,
          "matrix is not positive definite");
  const RVec s = eig.values.cwiseSqrt().cwiseInverse();
  return eig.vectors * s.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
}

Vec gaussian_vector(Index n, std::mt19937_64& gen) {
  std::normal_distribution<double> dist(0.0, std::sqrt(0.5));
  Vec v(n);
  for (Index i = 0; i < n; ++i) v(i) = cplx(dist(gen), dist(gen));
  return v;
}

}  // namespace

MimoPair build_mimo_pair(const Mat& h_up, const Mat& h_dl, double gamma_th,
                         double sigma_r2, double sigma_d2) {
  const Index m = h_up.rows();
  require(m >= 2, ErrorCode::invalid_argument, "need at least two antennas");
  require(h_up.cols() == 2 && h_dl.cols() == 2 && h_dl.rows() == m,
          ErrorCode::dimension_mismatch, "channels must be m x 2");
  require(gamma_th > 0.0 && sigma_r2 > 0.0 && sigma_d2 > 0.0,
          ErrorCode::invalid_argument, "MIMO parameters must be positive");
  const Vec h1 = h_up.col(0), h2 = h_up.col(1);
  const Mat r1 = h1.conjugate() * h1.transpose();
  const Mat r2 = h2.conjugate() * h2.transpose();
  const Mat id = Mat::Identity(m, m);
  const Mat f0 = r1 + r2 + sigma_r2 * id;
  const double s = 1.0 / (gamma_th * sigma_d2);
  const Mat fh1 = s * (gamma_th * r2 + gamma_th * sigma_r2 * id - r1);
  const Mat fh2 = s * (gamma_th * r1 + gamma_th * sigma_r2 * id - r2);
  const Mat w = inverse_sqrt_hpd(f0);
  MimoPair p;
  p.f1 = w * fh1 * w;
  p.f2 = w * fh2 * w;
  p.f1 = (0.5 * (p.f1 + p.f1.adjoint())).eval();
  p.f2 = (0.5 * (p.f2 + p.f2.adjoint())).eval();
  p.g1 = h_dl.col(0);
  p.g2 = h_dl.col(1);
  p.a = std::make_shared<KroneckerRankOne>(p.f1, p.g1);
  p.b = std::make_shared<KroneckerRankOne>(p.f2, p.g2);
  return p;
}

MimoPair random_mimo_pair(Index m, std::uint64_t seed, double gamma_th,
                          double sigma_r2, double sigma_d2) {
  std::mt19937_64 gen(seed);
  Mat up(m, 2), dl(m, 2);
  up.col(0) = gaussian_vector(m, gen);
  up.col(1) = gaussian_vector(m, gen);
  dl.col(0) = gaussian_vector(m, gen);
  dl.col(1) = gaussian_vector(m, gen);
  return build_mimo_pair(up, dl, gamma_th, sigma_r2, sigma_d2);
}

HermitianPair random_indefinite_pair(Index n, std::uint64_t seed) {
  require(n >= 2, ErrorCode::invalid_argument, "need n >= 2");
  std::mt19937_64 gen(seed);
  Mat a(n, n), c(n, n);
  for (Index j = 0; j < n; ++j) {
    a.col(j) = gaussian_vector(n, gen);
    c.col(j) = gaussian_vector(n, gen);
  }
  a = (0.5 * (a + a.adjoint()) / std::sqrt(double(n))).eval();
  c = (0.5 * (c + c.adjoint()) / std::sqrt(double(n))).eval();
  // a Wigner matrix is indefinite with overwhelming probability; force it
  const auto eig = linalg::hermitian_eig(c);
  if (eig.values(0) >= 0.0) c.diagonal().array() -= eig.values(0) + 0.5;
  if (eig.values(n - 1) <= 0.0) c.diagonal().array() -= eig.values(n - 1) - 0.5;
  return HermitianPair::from_dense(a, c);
}

std::shared_ptr<const DtiMatrix> random_stable_matrix(Index m,
                                                      std::uint64_t seed,
                                                      double margin) {
  require(m >= 1, ErrorCode::invalid_argument, "need m >= 1");
  std::mt19937_64 gen(seed);
  Mat a(m, m);
  for (Index j = 0; j < m; ++j) a.col(j) = gaussian_vector(m, gen);
  const Vec ev = linalg::general_eigenvalues(a);
  double right = ev(0).real();
  for (Index i = 1; i < ev.size(); ++i) right = std::max(right, ev(i).real());
  a.diagonal().array() -= right + margin;
  return DtiMatrix::from_dense(std::move(a), "random-stable");
}

}  // namespace twodevp
