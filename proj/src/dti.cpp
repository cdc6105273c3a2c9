// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#include "twodevp/dti.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace twodevp {

std::string to_string(Validation v) {
  switch (v) {
    case Validation::passed: return "passed";
    case Validation::failed: return "failed";
    case Validation::skipped: return "skipped";
  }
  return "skipped";
}

namespace {

// Ritz values nearest the shift, mapped back to eigenvalues of ahat.
std::vector<cplx> eigenvalues_near(const std::shared_ptr<const DtiMatrix>& src,
                                   cplx shift, int nev) {
  const ShiftedDtiSolver solver(src, shift);
  const linalg::LinearMap op = [&solver](const Vec& in, Vec& out) {
    out = solver.solve(in);
  };
  const auto ar = linalg::arnoldi_largest(op, src->dim(), nev);
  std::vector<cplx> out;
  for (std::size_t i = 0; i < ar.values.size(); ++i) {
    if (ar.residuals[i] > 1e-6 || std::abs(ar.values[i]) == 0.0) continue;
    out.push_back(shift + 1.0 / ar.values[i]);
  }
  return out;
}

cplx rightmost_of(const std::vector<cplx>& v) {
  require(!v.empty(), ErrorCode::numerical, "no converged eigenvalues");
  return *std::max_element(v.begin(), v.end(), [](cplx a, cplx b) {
    return a.real() < b.real();
  });
}

cplx rightmost_banded(const DtiMatrix& ahat) {
  // non-owning handle for the shifted solver
  const std::shared_ptr<const DtiMatrix> src(&ahat, [](const DtiMatrix*) {});
  const int nev = static_cast<int>(std::min<Index>(30, ahat.dim() - 1));
  cplx best = rightmost_of(eigenvalues_near(src, 0.0, nev));
  // second pass centred on the imaginary part of the first candidate
  const auto again = eigenvalues_near(src, cplx(0.0, best.imag()), nev);
  if (!again.empty()) {
    const cplx c = rightmost_of(again);
    if (c.real() > best.real()) best = c;
  }
  return best;
}

}  // namespace

cplx rightmost_eigenvalue(const DtiMatrix& ahat) {
  cplx r;
  if (const Mat* d = ahat.dense()) {
    require(ahat.dim() <= kDenseLimit, ErrorCode::unsupported,
            "dense eigenvalues limited to m <= " + std::to_string(kDenseLimit));
    const Vec ev = linalg::general_eigenvalues(*d);
    r = ev(0);
    for (Index i = 1; i < ev.size(); ++i)
      if (ev(i).real() > r.real()) r = ev(i);
  } else {
    r = rightmost_banded(ahat);
  }
  require(r.real() < 0.0, ErrorCode::unstable,
          "matrix is not stable: rightmost eigenvalue has real part " +
              std::to_string(r.real()));
  return r;
}

DtiStart dti_initial(const std::shared_ptr<const DtiMatrix>& ahat) {
  require(ahat != nullptr, ErrorCode::invalid_argument, "null matrix");
  DtiStart s;
  s.rightmost = rightmost_eigenvalue(*ahat);
  s.mu0 = s.rightmost.imag();
  const Index m = ahat->dim();
  Vec u, v;
  if (const Mat* d = ahat->dense(); d != nullptr && m <= 400) {
    Mat shifted = *d;
    shifted.diagonal().array() -= s.mu0 * kI;
    Eigen::JacobiSVD<Mat> svd(shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
    s.lambda0 = svd.singularValues()(m - 1);
    u = svd.matrixU().col(m - 1);
    v = svd.matrixV().col(m - 1);
  } else {
    const ShiftedDtiSolver solver(ahat, s.mu0 * kI);
    const auto t = linalg::smallest_singular_triplet(solver);
    s.lambda0 = t.sigma;
    u = t.u;
    v = t.v;
  }
  s.x0.resize(2 * m);
  s.x0 << u, v;
  s.x0 /= std::sqrt(2.0);
  return s;
}

DtiResult dti_solve(const std::shared_ptr<const DtiMatrix>& ahat,
                    const DtiOptions& opts) {
  require(ahat != nullptr, ErrorCode::invalid_argument, "null matrix");
  require(opts.reltol > 0.0 && opts.maxit >= 1, ErrorCode::invalid_argument,
          "reltol must be positive and maxit >= 1");
  const Index m = ahat->dim();
  const double tol = opts.tol > 0.0 ? opts.tol : static_cast<double>(m) * kMachEps;
  const DtiBlockPair bp = build_dti_pair(ahat);
  const double an = bp.ahat_norm;

  DtiResult res;
  res.ahat_norm = an;
  res.start = dti_initial(ahat);

  SolverOptions so;
  so.tol = tol;
  so.maxit = opts.maxit;
  so.stagnation_check = opts.stagnation_check;
  so.metric = [&](const HermitianPair&, const TwoDTriplet& t) {
    const double e = eta2_dti(*ahat, an, t).eta2;
    if (opts.on_iterate) opts.on_iterate(t, e);
    return e;
  };
  so.stop = [m, tol](const TwoDTriplet& t, double eta) {
    const cplx ip = t.x.head(m).dot(t.x.tail(m));
    return std::abs(ip.imag()) <= tol && eta <= tol;
  };
  so.hook = [m](TwoDTriplet& t) {
    const double n1 = t.x.head(m).norm(), n2 = t.x.tail(m).norm();
    if (!(n1 > 0.0) || !(n2 > 0.0)) return false;
    const double h = std::sqrt(2.0) / 2.0;
    t.x.head(m) *= h / n1;
    t.x.tail(m) *= h / n2;
    return true;
  };

  const TwoDTriplet init{res.start.mu0, res.start.lambda0, res.start.x0};
  const SolveResult sr = two_drqi(bp.pair, init, so);
  res.status = sr.status;
  res.iterations = sr.iterations;
  res.history = sr.history;
  res.mu_hat = sr.triplet.mu;
  res.lambda_hat = sr.triplet.lambda;
  res.beta_hat = std::abs(sr.triplet.lambda);
  res.negative_branch = sr.triplet.lambda < 0.0;
  res.x_hat = sr.triplet.x;
  res.eta2 = sr.eta;
  res.eta1 = eta1(bp.pair, sr.triplet).eta1;
  if (opts.validate)
    res.validated = validate_dti(*ahat, an, res.beta_hat, opts.reltol);
  return res;
}

Validation validate_dti(const DtiMatrix& ahat, double ahat_norm,
                        double lambda_hat, double reltol) {
  require(reltol > 0.0 && reltol < 1.0, ErrorCode::invalid_argument,
          "reltol must lie in (0, 1)");
  const Index m = ahat.dim();
  if (m > 1000) return Validation::skipped;
  const double l = (1.0 - reltol) * lambda_hat;
  const Mat a = ahat.materialize();
  Mat g(2 * m, 2 * m);
  g.topLeftCorner(m, m) = a;
  g.topRightCorner(m, m) = -l * Mat::Identity(m, m);
  g.bottomLeftCorner(m, m) = l * Mat::Identity(m, m);
  g.bottomRightCorner(m, m) = -a.adjoint();
  const Vec ev = linalg::general_eigenvalues(g);
  const double thr = 1e-8 * ahat_norm;
  for (Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i).real()) <= thr) return Validation::failed;
  return Validation::passed;
}

double naive_backward_error_doc(double ahat_norm, double beta_true,
                                double beta_hat) {
  require(ahat_norm > 0.0, ErrorCode::invalid_argument, "zero matrix norm");
  require(beta_true >= beta_hat, ErrorCode::invalid_argument,
          "beta_true must not be below beta_hat");
  return (beta_true - beta_hat) / ahat_norm;
}

}  // namespace twodevp
