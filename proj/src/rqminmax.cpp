// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#include "twodevp/rqminmax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace twodevp {

std::string to_string(MinmaxCase c) {
  switch (c) {
    case MinmaxCase::I: return "I";
    case MinmaxCase::II: return "II";
    case MinmaxCase::III_rqi: return "III-rqi";
    case MinmaxCase::III_recovery: return "III-recovery";
  }
  return "unknown";
}

linalg::HermitianEig smallest_eigenpairs(const Mat& h, Index k) {
  require(k >= 1 && k <= h.rows(), ErrorCode::invalid_argument,
          "bad eigenpair count");
  auto eig = linalg::hermitian_eig(h);
  linalg::HermitianEig out;
  out.values = eig.values.head(k);
  out.vectors = eig.vectors.leftCols(k);
  return out;
}

double lambda_min(const Mat& a, const Mat& c, double mu) {
  return linalg::hermitian_eig(a - mu * c).values(0);
}

namespace {

double rayleigh(const HermitianOperator& op, const Vec& x) {
  return x.dot(op * x).real() / x.squaredNorm();
}

Index materialize_limit(const HermitianOperator& op) {
  return dynamic_cast<const KroneckerRankOne*>(&op) ? 1024 : kDenseLimit;
}

Mat materialize(const HermitianOperator& op) {
  const Index limit = materialize_limit(op);
  require(op.dim() <= limit, ErrorCode::unsupported,
          "operator of dimension " + std::to_string(op.dim()) +
              " exceeds the dense limit " + std::to_string(limit));
  return op.dense();
}

}  // namespace

CaseCheck classify_cases(const HermitianOperator& a, const HermitianOperator& b) {
  require(a.dim() == b.dim(), ErrorCode::dimension_mismatch,
          "A and B must have equal dimension");
  CaseCheck out;
  const auto ea = smallest_eigenpairs(materialize(a), 1);
  const Vec xa = ea.vectors.col(0);
  if (ea.values(0) >= rayleigh(b, xa)) {
    out.which = MinmaxCase::I;
    out.value = ea.values(0);
    out.x = xa;
    return out;
  }
  const auto eb = smallest_eigenpairs(materialize(b), 1);
  const Vec xb = eb.vectors.col(0);
  if (eb.values(0) >= rayleigh(a, xb)) {
    out.which = MinmaxCase::II;
    out.value = eb.values(0);
    out.x = xb;
    return out;
  }
  out.which = MinmaxCase::III_rqi;
  return out;
}

Recovery recover_x(Vec x_a, Vec x_b, const HermitianOperator& c) {
  require(x_a.size() == c.dim() && x_b.size() == c.dim(),
          ErrorCode::dimension_mismatch, "vectors do not match C");
  require(x_a.norm() > 0.0 && x_b.norm() > 0.0, ErrorCode::invalid_argument,
          "zero vector");
  x_a.normalize();
  x_b.normalize();
  const cplx ip = x_a.dot(x_b);
  if (std::abs(ip) > 0.0) x_b *= std::conj(ip) / std::abs(ip);
  const double s = std::abs(ip);
  const double cn = c.norm();
  const double zero = 1e-12 * cn;
  Recovery r;
  const double ha = rayleigh(c, x_a), hb = rayleigh(c, x_b);
  if (std::abs(ha) <= zero) {
    r.x = x_a;
    return r;
  }
  if (std::abs(hb) <= zero) {
    r.x = x_b;
    r.theta = std::acos(std::min(1.0, s));
    return r;
  }
  Vec qb = x_b - s * x_a;
  const double qn = qb.norm();
  if (qn <= 1e-14) {
    r.x = x_a;
    return r;
  }
  qb /= qn;
  const double theta_b = std::atan2(qn, s);
  auto u = [&](double t) -> Vec { return std::cos(t) * x_a + std::sin(t) * qb; };
  if ((ha < 0.0) == (hb < 0.0)) {
    r.ok = false;
    r.x = std::abs(ha) <= std::abs(hb) ? x_a : x_b;
    r.theta = std::abs(ha) <= std::abs(hb) ? 0.0 : theta_b;
    return r;
  }
  double lo = 0.0, hi = theta_b;
  const bool neg_lo = ha < 0.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double hm = rayleigh(c, u(mid));
    if ((hm < 0.0) == neg_lo)
      lo = mid;
    else
      hi = mid;
  }
  r.theta = 0.5 * (lo + hi);
  r.x = u(r.theta).normalized();
  return r;
}

namespace {

// Minimum 2D-Ritz triplet on span(z); falls back to the definite choice.
TwoDTriplet ritz_start(const HermitianPair& pair, const Mat& z, double mu0,
                       double lambda0, std::mt19937_64& rng) {
  const ProjectedPair p = orthonormalize_and_align(pair, z);
  if (p.c1 > 0.0 && p.c2 < 0.0) {
    const auto cands = solve_2x2_2devp(p.a_k, p.c1, p.c2);
    std::size_t j = 0;
    for (std::size_t i = 1; i < cands.size(); ++i)
      if (cands[i].theta < cands[j].theta) j = i;
    return {mu0, lambda0, (p.v * cands[j].z).normalized()};
  }
  TwoDTriplet t = update_definite(pair, p, rng);
  return {mu0, lambda0, t.x};
}

}  // namespace

RqMinmaxResult rqminmax_solve(OperatorPtr a, OperatorPtr b,
                              const RqMinmaxOptions& opts) {
  require(a && b, ErrorCode::invalid_argument, "null operator");
  require(opts.reltol > 0.0 && opts.abstol > 0.0 && opts.max_outer >= 1,
          ErrorCode::invalid_argument, "tolerances must be positive");
  const Index n = a->dim();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  RqMinmaxResult res;
  res.mu_opt = nan;

  const CaseCheck cc = classify_cases(*a, *b);
  if (cc.which != MinmaxCase::III_rqi) {
    res.case_taken = cc.which;
    res.value = cc.value;
    res.x_opt = cc.x;
    res.converged = true;
    return res;
  }

  const Mat da = materialize(*a);
  const Mat db = materialize(*b);
  const Mat dc = da - db;
  const double an = a->norm(), bn = b->norm();
  auto c_op = std::make_shared<LinearCombination>(a, 1.0, b, -1.0);
  const bool kron = dynamic_cast<const KroneckerRankOne*>(a.get()) != nullptr;
  const HermitianPair pair(a, c_op,
                           kron ? Structure::kronecker_rank_one : Structure::dense,
                           an, linalg::hermitian_norm(dc));

  SolverOptions so;
  so.tol = opts.backtol > 0.0 ? opts.backtol : static_cast<double>(n) * kMachEps;
  so.maxit = opts.maxit;
  so.rng_seed = opts.rng_seed;
  std::mt19937_64 rng(opts.rng_seed);

  double lo = 0.0, hi = 1.0;
  for (int k = 0; k < opts.max_outer; ++k) {
    OuterStep step;
    step.a = lo;
    step.b = hi;
    step.mu0 = 0.5 * (lo + hi);
    const auto eig = smallest_eigenpairs(da - step.mu0 * dc, 2);
    step.lambda0 = eig.values(0);
    const Vec xn = eig.vectors.col(0);
    Mat z(n, 2);
    z.col(0) = eig.vectors.col(1);
    z.col(1) = xn;
    res.outer_iters = k + 1;

    bool accepted = false;
    try {
      const TwoDTriplet init = ritz_start(pair, z, step.mu0, step.lambda0, rng);
      const SolveResult sr = two_drqi(pair, init, so);
      step.drqi_status = sr.status;
      step.drqi_iterations = sr.iterations;
      step.mu_hat = sr.triplet.mu;
      step.lambda_hat = sr.triplet.lambda;
      if (sr.status == Status::converged) {
        const double mh = sr.triplet.mu;
        const double gap = std::abs(sr.triplet.lambda - lambda_min(da, dc, mh));
        if (gap < opts.reltol * (std::abs(1.0 - mh) * an + std::abs(mh) * bn)) {
          accepted = true;
          res.x_opt = sr.triplet.x;
          res.value = sr.triplet.lambda;
          res.mu_opt = mh;
        }
      }
    } catch (const Error&) {
      step.drqi_status = Status::degenerate_basis;
    }
    step.accepted = accepted;
    res.outer.push_back(step);
    if (accepted) {
      res.case_taken = MinmaxCase::III_rqi;
      res.converged = true;
      return res;
    }

    if (xn.dot(dc * xn).real() <= 0.0)
      lo = step.mu0;
    else
      hi = step.mu0;

    if (hi - lo < opts.abstol) {
      const double mh = 0.5 * (lo + hi);
      const Vec xa = smallest_eigenpairs(da - lo * dc, 1).vectors.col(0);
      const Vec xb = smallest_eigenpairs(da - hi * dc, 1).vectors.col(0);
      const Recovery rec = recover_x(xa, xb, *c_op);
      res.case_taken = MinmaxCase::III_recovery;
      res.mu_opt = mh;
      res.value = lambda_min(da, dc, mh);
      res.x_opt = rec.x;
      res.converged = rec.ok;
      return res;
    }
  }
  // max_outer exhausted: report the midpoint of the final bracket
  const double mh = 0.5 * (lo + hi);
  res.case_taken = MinmaxCase::III_recovery;
  res.mu_opt = mh;
  res.value = lambda_min(da, dc, mh);
  res.x_opt = smallest_eigenpairs(da - mh * dc, 1).vectors.col(0);
  res.converged = false;
  return res;
}

}  // namespace twodevp
