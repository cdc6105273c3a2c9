// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#include "twodevp/backward_error.hpp"

#include <algorithm>
#include <cmath>

namespace twodevp {

BackwardErrorReport eta1(const HermitianPair& pair, const TwoDTriplet& t) {
  check_unit_vector(pair, t.x);
  const Vec ax = pair.apply(Which::A, 0.0, t.x);
  const Vec cx = pair.apply(Which::C, 0.0, t.x);
  BackwardErrorReport rep;
  rep.gamma_a = t.x.dot(ax).real() - t.lambda;
  rep.gamma_c = t.x.dot(cx).real();
  rep.r_norm = (ax - t.mu * cx - t.lambda * t.x).norm();
  const double an = pair.a_norm(), cn = pair.c_norm();
  const double ta = an > 0.0 ? std::abs(rep.gamma_a) / an : 0.0;
  const double tc = cn > 0.0 ? std::abs(rep.gamma_c) / cn : 0.0;
  const double scale = an + std::abs(t.mu) * cn;
  const double tr = scale > 0.0 ? rep.r_norm / scale : 0.0;
  rep.eta1 = std::max({ta, tc, tr});
  return rep;
}

Mat hermitian_reflector(const Vec& x, const Vec& a) {
  const Index n = x.size();
  const double s = a.norm();
  if (s == 0.0) return Mat::Zero(n, n);
  const Vec y = a / s;
  Vec w = x - y;
  const double wn = w.norm();
  Mat h = Mat::Identity(n, n);
  if (wn > 0.0) {
    w /= wn;
    h -= 2.0 * w * w.adjoint();
  }
  return s * h;
}

Perturbation construct_perturbation(const HermitianPair& pair,
                                    const TwoDTriplet& t) {
  require(pair.dim() <= 2000, ErrorCode::unsupported,
          "constructive perturbation is limited to n <= 2000");
  check_unit_vector(pair, t.x);
  const Vec& x = t.x;
  const Vec ax = pair.apply(Which::A, 0.0, x);
  const Vec cx = pair.apply(Which::C, 0.0, x);
  const Vec r = ax - t.mu * cx - t.lambda * x;
  const double gamma_c = x.dot(cx).real();
  const double an = pair.a_norm(), cn = pair.c_norm();
  const double denom = an + std::abs(t.mu) * cn;
  const Vec r_perp = r - x * x.dot(r);
  const Vec at = denom > 0.0 ? Vec(-(an / denom) * r_perp) : Vec(-r_perp);
  // sign(mu) is undefined at mu = 0; the c-part then vanishes and at absorbs
  // all of r_perp
  Vec ct = Vec::Zero(x.size());
  if (t.mu != 0.0 && denom > 0.0)
    ct = (std::copysign(1.0, t.mu) * cn / denom) * r_perp;
  // x^H r + mu gamma_c = gamma_a is real; drop the roundoff imaginary part
  const double gamma_a = (x.dot(r) + t.mu * gamma_c).real();
  const Vec a = -gamma_a * x + at;
  const Vec c = -gamma_c * x + ct;
  Perturbation p;
  p.delta_a = hermitian_reflector(x, a);
  p.delta_c = hermitian_reflector(x, c);
  p.a_norm = a.norm();
  p.c_norm = c.norm();
  return p;
}

bool repair_indefiniteness(const HermitianPair& pair, const Vec& x,
                           Mat& delta_c, double delta) {
  const Mat pert = pair.dense_c() + delta_c;
  const auto eig = linalg::hermitian_eig(pert);
  const double tol = 1e-14 * std::max(pair.c_norm(), 1.0);
  const Index n = pert.rows();
  if (eig.values(0) < -tol && eig.values(n - 1) > tol) return false;
  // q: unit vector orthogonal to x; prefer the null space of pert
  Vec q = Vec::Zero(n);
  for (Index i = 0; i < n && q.norm() == 0.0; ++i) {
    Vec cand = eig.vectors.col(i);
    cand -= x * x.dot(cand);
    if (cand.norm() > 1e-8) q = cand.normalized();
  }
  require(q.norm() > 0.0, ErrorCode::numerical,
          "no direction orthogonal to x");
  delta_c += delta * (x * q.adjoint() + q * x.adjoint());
  return true;
}

Eta2Report eta2_dti(const DtiMatrix& ahat, double ahat_norm,
                    const TwoDTriplet& t) {
  require(ahat_norm > 0.0, ErrorCode::invalid_argument,
          "eta2 needs a nonzero matrix norm");
  const Index m = ahat.dim();
  require(t.x.size() == 2 * m, ErrorCode::dimension_mismatch,
          "triplet does not live on the block pair");
  const Vec x1 = t.x.head(m), x2 = t.x.tail(m);
  Eta2Report rep;
  rep.r1 = ahat.apply(x2) - (t.mu * kI) * x2 - t.lambda * x1;
  rep.r2 = ahat.apply_adjoint(x1) + (t.mu * kI) * x1 - t.lambda * x2;
  const double rn =
      std::sqrt(rep.r1.squaredNorm() + rep.r2.squaredNorm());
  rep.eta2 = std::sqrt(2.0) * rn / ahat_norm;
  return rep;
}

}  // namespace twodevp
