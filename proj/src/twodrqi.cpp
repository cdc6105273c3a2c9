// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#include "twodevp/twodrqi.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "twodevp/backward_error.hpp"

namespace twodevp {

std::string to_string(Branch b) {
  switch (b) {
    case Branch::indefinite_simple: return "indefinite-simple";
    case Branch::indefinite_multiple: return "indefinite-multiple";
    case Branch::definite_distinct: return "definite-distinct";
    case Branch::definite_equal: return "definite-equal";
    case Branch::none: return "none";
  }
  return "none";
}

std::string to_string(Status s) {
  switch (s) {
    case Status::converged: return "converged";
    case Status::maxit: return "maxit";
    case Status::stagnated: return "stagnated";
    case Status::jacobian_singular: return "jacobian-singular";
    case Status::degenerate_basis: return "degenerate-basis";
  }
  return "unknown";
}

void check_unit_vector(const HermitianPair& pair, const Vec& x) {
  require(x.size() == pair.dim(), ErrorCode::dimension_mismatch,
          "vector length does not match the pair dimension");
  const double nrm = x.norm();
  require(std::isfinite(nrm) && nrm > 0.0, ErrorCode::invalid_argument,
          "vector must be nonzero and finite");
}

// ---------------------------------------------------------------------------
// Jacobian solvers

namespace {

class DenseJacobian final : public JacobianSolver {
 public:
  DenseJacobian(const HermitianPair& pair, const TwoDTriplet& t) : n_(pair.dim()) {
    require(n_ <= kDenseLimit, ErrorCode::unsupported,
            "dense Jacobian limited to n <= " + std::to_string(kDenseLimit));
    const Mat& a = pair.dense_a();
    const Mat& c = pair.dense_c();
    const Vec cx = c * t.x;
    j_.resize(n_ + 2, n_ + 2);
    j_.topLeftCorner(n_, n_) = a - t.mu * c;
    j_.topLeftCorner(n_, n_).diagonal().array() -= t.lambda;
    j_.block(0, n_, n_, 1) = -cx;
    j_.block(0, n_ + 1, n_, 1) = -t.x;
    j_.block(n_, 0, 1, n_) = -cx.adjoint();
    j_.block(n_ + 1, 0, 1, n_) = -t.x.adjoint();
    j_.bottomRightCorner(2, 2).setZero();
    lu_.compute(j_);
    const double scale = j_.cwiseAbs().maxCoeff();
    const double piv = lu_.matrixLU().diagonal().cwiseAbs().minCoeff();
    require(piv >= 1e-14 * scale, ErrorCode::singular, "Jacobian is singular");
  }

  Index dim() const override { return n_; }

  Mat solve(const Mat& f, const Mat& g) const override {
    Mat rhs(n_ + 2, f.cols());
    rhs.topRows(n_) = f;
    rhs.bottomRows(2) = g;
    Mat sol = lu_.solve(rhs);
    sol += lu_.solve(rhs - j_ * sol);
    return sol;
  }

  Mat apply(const Mat& x, const Mat& y) const override {
    Mat v(n_ + 2, x.cols());
    v.topRows(n_) = x;
    v.bottomRows(2) = y;
    return j_ * v;
  }

 private:
  Index n_;
  Mat j_;
  Eigen::PartialPivLU<Mat> lu_;
};

// H = [[-lambda I, K], [K^H, -lambda I]] with K = ahat - mu j I = L^{-1} Kt,
// Kt = B - mu j L. Substituting z1 = L w gives the banded system
// [[-lambda L^2, Kt], [Kt^H, -lambda I]] [w; z2] = [L f1; f2], interleaved
// so that it has bandwidth 2 * band(Kt) + 1. The two border columns are
// eliminated through a 2 x 2 Schur complement.
class BandedArrowJacobian final : public JacobianSolver {
 public:
  BandedArrowJacobian(const HermitianPair& pair, const TwoDTriplet& t)
      : pair_(pair), t_(t), m_(pair.dti()->dim()) {
    const DtiMatrix& src = *pair.dti();
    const linalg::BandedMatrix& l = src.lhs();
    const linalg::BandedMatrix kt = src.rhs().plus(l, -t.mu * kI);
    const linalg::BandedMatrix l2 = l.times(l);
    const Index bk = std::max(kt.kl(), kt.ku());
    const Index bl = std::max(l2.kl(), l2.ku());
    const Index band = std::max(2 * bk + 1, 2 * bl);
    linalg::BandedMatrix sys(2 * m_, band, band);
    for (Index j = 0; j < m_; ++j) {
      for (Index i = std::max<Index>(0, j - bl); i <= std::min(m_ - 1, j + bl);
           ++i)
        sys.ref(2 * i, 2 * j) = -t.lambda * l2(i, j);
      for (Index i = std::max<Index>(0, j - bk); i <= std::min(m_ - 1, j + bk);
           ++i) {
        const cplx v = kt(i, j);
        sys.ref(2 * i, 2 * j + 1) = v;
        sys.ref(2 * j + 1, 2 * i) = std::conj(v);
      }
      sys.ref(2 * j + 1, 2 * j + 1) = -t.lambda;
    }
    lu_ = std::make_unique<linalg::BandedLU>(sys);
    require(lu_->min_pivot() > 0.0, ErrorCode::singular,
            "shifted block matrix is singular");
    w_.resize(2 * m_, 2);
    w_.col(0) = -pair.apply(Which::C, 0.0, t.x);
    w_.col(1) = -t.x;
    z_ = solve_h(w_);
    s_ = w_.adjoint() * z_;
    Eigen::FullPivLU<Mat> slu(s_);
    require(z_.allFinite() && slu.rank() == 2, ErrorCode::singular,
            "Jacobian is singular");
    s_inv_ = slu.inverse();
    require(s_inv_.allFinite(), ErrorCode::singular, "Jacobian is singular");
  }

  Index dim() const override { return 2 * m_; }

  Mat solve(const Mat& f, const Mat& g) const override {
    Mat sol = schur_solve(f, g);
    for (int it = 0; it < 2; ++it) {
      const Mat r = apply(sol.topRows(2 * m_), sol.bottomRows(2));
      const Mat rf = f - r.topRows(2 * m_);
      const Mat rg = g - r.bottomRows(2);
      sol += schur_solve(rf, rg);
    }
    return sol;
  }

  Mat apply(const Mat& x, const Mat& y) const override {
    Mat out(2 * m_ + 2, x.cols());
    for (Index k = 0; k < x.cols(); ++k) {
      Vec hx = pair_.apply(Which::shifted, t_.mu, x.col(k));
      hx -= t_.lambda * x.col(k);
      out.col(k).head(2 * m_) = hx + w_ * y.col(k);
    }
    out.bottomRows(2) = w_.adjoint() * x;
    return out;
  }

 private:
  Mat solve_h(const Mat& f) const {
    const DtiMatrix& src = *pair_.dti();
    Mat rhs(2 * m_, f.cols());
    for (Index k = 0; k < f.cols(); ++k) {
      const Vec lf = src.lhs().apply(f.col(k).head(m_));
      for (Index i = 0; i < m_; ++i) {
        rhs(2 * i, k) = lf(i);
        rhs(2 * i + 1, k) = f(m_ + i, k);
      }
    }
    lu_->solve_in_place(rhs);
    Mat z(2 * m_, f.cols());
    for (Index k = 0; k < f.cols(); ++k) {
      Vec w(m_);
      for (Index i = 0; i < m_; ++i) {
        w(i) = rhs(2 * i, k);
        z(m_ + i, k) = rhs(2 * i + 1, k);
      }
      z.col(k).head(m_) = src.lhs().apply(w);
    }
    return z;
  }

  Mat schur_solve(const Mat& f, const Mat& g) const {
    const Mat p = solve_h(f);
    const Mat y = s_inv_ * (w_.adjoint() * p - g);
    Mat sol(2 * m_ + 2, f.cols());
    sol.topRows(2 * m_) = p - z_ * y;
    sol.bottomRows(2) = y;
    return sol;
  }

  const HermitianPair& pair_;
  TwoDTriplet t_;
  Index m_;
  std::unique_ptr<linalg::BandedLU> lu_;
  Mat w_, z_, s_, s_inv_;
};

}  // namespace

std::unique_ptr<JacobianSolver> build_jacobian(const HermitianPair& pair,
                                               const TwoDTriplet& t) {
  check_unit_vector(pair, t.x);
  if (pair.structure() == Structure::dti_block && pair.dti() != nullptr &&
      pair.dti()->banded())
    return std::make_unique<BandedArrowJacobian>(pair, t);
  return std::make_unique<DenseJacobian>(pair, t);
}

Mat solve_augmented(const HermitianPair& pair, const TwoDTriplet& t) {
  const auto jac = build_jacobian(pair, t);
  const Index n = pair.dim();
  const Mat sol = jac->solve(Mat::Zero(n, 2), Mat::Identity(2, 2));
  require(sol.allFinite(), ErrorCode::singular,
          "augmented solve produced non-finite values");
  return sol.topRows(n);
}

// ---------------------------------------------------------------------------
// projection

namespace {

ProjectedPair project(const HermitianPair& pair, const Mat& q) {
  Mat cq(q.rows(), 2), aq(q.rows(), 2);
  for (Index k = 0; k < 2; ++k) {
    cq.col(k) = pair.apply(Which::C, 0.0, q.col(k));
  }
  Eigen::Matrix2cd cc = q.adjoint() * cq;
  cc = (0.5 * (cc + cc.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(cc);
  // ascending eigenvalues; put the larger first
  Eigen::Matrix2cd e;
  e.col(0) = es.eigenvectors().col(1);
  e.col(1) = es.eigenvectors().col(0);
  ProjectedPair p;
  p.v = q * e;
  p.c1 = es.eigenvalues()(1);
  p.c2 = es.eigenvalues()(0);
  for (Index k = 0; k < 2; ++k) aq.col(k) = pair.apply(Which::A, 0.0, p.v.col(k));
  p.a_k = p.v.adjoint() * aq;
  p.a_k = (0.5 * (p.a_k + p.a_k.adjoint())).eval();
  return p;
}

}  // namespace

ProjectedPair orthonormalize_and_align(const HermitianPair& pair,
                                       const Mat& x_a) {
  require(x_a.rows() == pair.dim() && x_a.cols() == 2,
          ErrorCode::dimension_mismatch, "basis must be n x 2");
  require(x_a.allFinite(), ErrorCode::numerical, "non-finite basis");
  Eigen::ColPivHouseholderQR<Mat> qr(x_a);
  const double r11 = std::abs(qr.matrixR()(0, 0));
  const double r22 = std::abs(qr.matrixR()(1, 1));
  require(r11 > 0.0 && r22 > 1e-12 * r11, ErrorCode::numerical,
          "augmented solution has numerical rank < 2");
  const Mat q = qr.householderQ() * Mat::Identity(x_a.rows(), 2);
  return project(pair, q);
}

std::vector<ProjectedTriplet> solve_2x2_2devp(const Eigen::Matrix2cd& a_k,
                                              double c1, double c2) {
  require(c1 > 0.0 && c2 < 0.0, ErrorCode::not_indefinite,
          "projected C is not indefinite");
  const double d = c1 - c2;
  const cplx a12 = a_k(0, 1);
  const double scale = std::max(a_k.norm(), 1e-300);
  const double z1 = std::sqrt(-c2 / d), z2 = std::sqrt(c1 / d);
  std::vector<ProjectedTriplet> out;
  const Eigen::Vector2cd cdiag(c1, c2);
  if (std::abs(a12) < 1e-14 * scale) {
    ProjectedTriplet t;
    t.nu = (a_k(0, 0).real() - a_k(1, 1).real()) / d;
    t.theta = (a_k(1, 1).real() * c1 - a_k(0, 0).real() * c2) / d;
    t.z << z1, z2;
    out.push_back(t);
    return out;
  }
  const cplx unit = std::abs(a12) / a12;
  for (const cplx alpha : {unit, -unit}) {
    ProjectedTriplet t;
    t.z << z1, alpha * z2;
    const Eigen::Vector2cd az = a_k * t.z;
    const Eigen::Vector2cd cz = cdiag.cwiseProduct(t.z);
    const cplx theta = t.z.dot(az);
    const cplx nu = cz.dot(az) / cz.squaredNorm();
    const double tol = 1e-10 * scale;
    require(std::abs(theta.imag()) < tol && std::abs(nu.imag()) < tol,
            ErrorCode::numerical, "projected 2D-eigenvalue is not real");
    t.theta = theta.real();
    t.nu = nu.real();
    out.push_back(t);
  }
  return out;
}

std::size_t select_candidate(double mu, double lambda,
                             const std::vector<ProjectedTriplet>& candidates) {
  require(!candidates.empty(), ErrorCode::invalid_argument, "no candidates");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    const double d = std::abs(mu - candidates[j].nu) +
                     std::abs(lambda - candidates[j].theta);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

std::pair<double, double> fit_mu_lambda(const HermitianPair& pair,
                                        const Vec& x) {
  check_unit_vector(pair, x);
  const Index n = x.size();
  const Vec ax = pair.apply(Which::A, 0.0, x);
  const Vec cx = pair.apply(Which::C, 0.0, x);
  RMat m(2 * n, 2);
  RVec b(2 * n);
  m.col(0) << cx.real(), cx.imag();
  m.col(1) << x.real(), x.imag();
  b << ax.real(), ax.imag();
  Eigen::JacobiSVD<RMat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-12);
  const RVec sol = svd.solve(b);
  return {sol(0), sol(1)};
}

namespace {

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-14 * std::max(std::abs(a), std::abs(b));
}

Branch definite_branch(const ProjectedPair& p) {
  return nearly_equal(std::abs(p.c1), std::abs(p.c2)) ? Branch::definite_equal
                                                      : Branch::definite_distinct;
}

Branch branch_of(const ProjectedPair& p) {
  if (p.c1 > 0.0 && p.c2 < 0.0) {
    const double scale = std::max(p.a_k.norm(), 1e-300);
    return std::abs(p.a12()) < 1e-14 * scale ? Branch::indefinite_multiple
                                             : Branch::indefinite_simple;
  }
  return definite_branch(p);
}

}  // namespace

TwoDTriplet update_definite(const HermitianPair& pair,
                            const ProjectedPair& proj, std::mt19937_64& rng) {
  Vec x;
  const double a1 = std::abs(proj.c1), a2 = std::abs(proj.c2);
  if (definite_branch(proj) == Branch::definite_equal) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::Vector2cd w;
    w(0) = dist(rng);
    w(1) = dist(rng);
    x = proj.v * w;
    x.normalize();
  } else if (a1 < a2) {
    x = proj.v.col(0);
  } else {
    x = proj.v.col(1);
  }
  TwoDTriplet t;
  std::tie(t.mu, t.lambda) = fit_mu_lambda(pair, x);
  t.x = std::move(x);
  return t;
}

Vec initial_vector(const HermitianPair& pair, double mu0, double lambda0) {
  const Index n = pair.dim();
  require(n >= 2, ErrorCode::invalid_argument, "need n >= 2");
  require(n <= kDenseLimit, ErrorCode::unsupported,
          "initial_vector needs a dense eigendecomposition (n <= " +
              std::to_string(kDenseLimit) + ")");
  const Mat h = pair.dense_a() - mu0 * pair.dense_c();
  const auto eig = linalg::hermitian_eig(h);
  std::vector<Index> idx(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    return std::abs(eig.values(a) - lambda0) < std::abs(eig.values(b) - lambda0);
  });
  Mat x(n, 2);
  x.col(0) = eig.vectors.col(idx[0]);
  x.col(1) = eig.vectors.col(idx[1]);
  const ProjectedPair p = project(pair, x);
  if (p.c1 > 0.0 && p.c2 < 0.0) {
    const auto cands = solve_2x2_2devp(p.a_k, p.c1, p.c2);
    const std::size_t j = select_candidate(mu0, lambda0, cands);
    Vec x0 = p.v * cands[j].z;
    return x0.normalized();
  }
  std::mt19937_64 rng(0);
  return update_definite(pair, p, rng).x;
}

// ---------------------------------------------------------------------------
// driver

SolveResult two_drqi(const HermitianPair& pair, const TwoDTriplet& init,
                     const SolverOptions& opts) {
  require(opts.tol > 0.0, ErrorCode::invalid_argument, "tol must be positive");
  require(opts.maxit >= 1, ErrorCode::invalid_argument, "maxit must be >= 1");
  check_unit_vector(pair, init.x);
  const auto start = std::chrono::steady_clock::now();
  const ErrorMetric metric =
      opts.metric ? opts.metric
                  : ErrorMetric([](const HermitianPair& p,
                                   const TwoDTriplet& t) { return eta1(p, t).eta1; });
  const double tol = opts.tol;
  const StopTest stop =
      opts.stop ? opts.stop
                : StopTest([tol](const TwoDTriplet&, double e) { return e <= tol; });
  std::mt19937_64 rng(opts.rng_seed);

  SolveResult res;
  TwoDTriplet t = init;
  t.x.normalize();
  TwoDTriplet best = t;
  double best_eta = std::numeric_limits<double>::infinity();
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (int k = 0;; ++k) {
    const double eta = metric(pair, t);
    IterationRecord rec;
    rec.k = k;
    rec.mu = t.mu;
    rec.lambda = t.lambda;
    rec.eta = eta;
    rec.c1 = rec.c2 = rec.abs_a12 = nan;

    std::optional<ProjectedPair> proj;
    Status failure = Status::converged;
    try {
      proj = orthonormalize_and_align(pair, solve_augmented(pair, t));
    } catch (const Error& e) {
      failure = e.code() == ErrorCode::singular ? Status::jacobian_singular
                                                : Status::degenerate_basis;
    }
    if (proj) {
      rec.c1 = proj->c1;
      rec.c2 = proj->c2;
      rec.abs_a12 = std::abs(proj->a12());
      rec.branch = branch_of(*proj);
    }
    rec.elapsed = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    res.history.push_back(rec);
    if (eta < best_eta) {
      best_eta = eta;
      best = t;
    }

    auto finish = [&](const TwoDTriplet& out, double e, Status s) {
      res.triplet = out;
      res.eta = e;
      res.status = s;
      res.iterations = k;
      return res;
    };

    if (std::isfinite(eta) && stop(t, eta)) return finish(t, eta, Status::converged);
    if (opts.stagnation_check && k >= 2) {
      const double prev = 0.5 * (res.history[k - 1].eta + res.history[k - 2].eta);
      if (eta >= prev) return finish(best, best_eta, Status::stagnated);
    }
    if (k >= opts.maxit) return finish(t, eta, Status::maxit);
    if (!proj) return finish(t, eta, failure);

    TwoDTriplet next;
    try {
      if (rec.branch == Branch::indefinite_simple ||
          rec.branch == Branch::indefinite_multiple) {
        const auto cands = solve_2x2_2devp(proj->a_k, proj->c1, proj->c2);
        const std::size_t j = select_candidate(t.mu, t.lambda, cands);
        next.mu = cands[j].nu;
        next.lambda = cands[j].theta;
        next.x = proj->v * cands[j].z;
      } else {
        next = update_definite(pair, *proj, rng);
      }
      next.x.normalize();
    } catch (const Error&) {
      return finish(best, best_eta, Status::stagnated);
    }
    if (!next.x.allFinite() || !std::isfinite(next.mu) ||
        !std::isfinite(next.lambda))
      return finish(best, best_eta, Status::stagnated);
    if (opts.hook && !opts.hook(next))
      return finish(best, best_eta, Status::stagnated);
    t = std::move(next);
  }
}

}  // namespace twodevp
