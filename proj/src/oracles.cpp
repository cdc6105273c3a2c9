// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#include "twodevp/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace twodevp {

namespace {

struct SortedEig {
  RVec values;  // descending
  Mat vectors;
};

SortedEig sorted_eig(const Mat& a, const Mat& c, double mu) {
  const auto e = linalg::hermitian_eig(a - mu * c);
  SortedEig s;
  s.values = e.values.reverse();
  s.vectors = e.vectors.rowwise().reverse();
  return s;
}

double xcx(const Mat& c, const Vec& x) { return x.dot(c * x).real(); }

}  // namespace

std::vector<EigencurveSample> eigencurve_samples(const HermitianPair& pair,
                                                 double mu_lo, double mu_hi,
                                                 int points) {
  require(pair.dim() <= 200, ErrorCode::unsupported,
          "eigencurve scan is limited to n <= 200");
  require(points >= 10 && mu_hi > mu_lo, ErrorCode::invalid_argument,
          "need at least 10 grid points on a nonempty range");
  const Mat& a = pair.dense_a();
  const Mat& c = pair.dense_c();
  std::vector<EigencurveSample> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double mu = mu_lo + (mu_hi - mu_lo) * i / (points - 1);
    const SortedEig e = sorted_eig(a, c, mu);
    EigencurveSample s;
    s.mu = mu;
    s.lambda = e.values;
    s.xcx.resize(e.values.size());
    for (Index j = 0; j < e.values.size(); ++j)
      s.xcx(j) = xcx(c, e.vectors.col(j));
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<CurveTriplet> eigencurve_scan(const HermitianPair& pair,
                                          double mu_lo, double mu_hi,
                                          int points, double refine_tol) {
  const auto samples = eigencurve_samples(pair, mu_lo, mu_hi, points);
  const Mat& a = pair.dense_a();
  const Mat& c = pair.dense_c();
  const Index n = pair.dim();
  const double cn = pair.c_norm();
  const double scale = pair.a_norm() + std::max(std::abs(mu_lo), std::abs(mu_hi)) * cn;
  std::vector<CurveTriplet> out;

  for (Index i = 0; i < n; ++i) {
    for (std::size_t g = 0; g + 1 < samples.size(); ++g) {
      const double f0 = samples[g].xcx(i), f1 = samples[g + 1].xcx(i);
      double lo = samples[g].mu, hi = samples[g + 1].mu;
      double flo = f0;
      TwoDTriplet t;
      if (f0 == 0.0) {
        // exact zero on a grid point, reported once from the left interval
        if (g > 0) continue;
      } else if (f1 == 0.0 || (f0 < 0.0) == (f1 < 0.0)) {
        continue;
      }
      bool found = false;
      if (f0 == 0.0) {
        const SortedEig e = sorted_eig(a, c, lo);
        t = {lo, e.values(i), e.vectors.col(i)};
        found = true;
      }
      // bisect to full width; refine_tol only decides acceptance
      double best_f = std::numeric_limits<double>::infinity();
      for (int it = 0; it < 200 && !found; ++it) {
        const double mid = 0.5 * (lo + hi);
        const SortedEig e = sorted_eig(a, c, mid);
        const double fm = xcx(c, e.vectors.col(i));
        if (std::abs(fm) < best_f) {
          best_f = std::abs(fm);
          t = {mid, e.values(i), e.vectors.col(i)};
        }
        if (fm == 0.0) break;
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
        if (hi - lo <= 2.0 * kMachEps * std::max(1.0, std::abs(mid))) break;
      }
      if (!found && best_f <= refine_tol * cn) found = true;
      if (!found) {
        // sign jump without a zero: a crossing of curve i with a neighbour
        const double mu = 0.5 * (lo + hi);
        const SortedEig e = sorted_eig(a, c, mu);
        const double lam = e.values(i);
        const double tol = 1e-7 * std::max(scale, 1.0);
        std::vector<Index> cluster;
        for (Index j = 0; j < n; ++j)
          if (std::abs(e.values(j) - lam) <= tol) cluster.push_back(j);
        if (cluster.size() < 2) continue;
        Mat x(n, static_cast<Index>(cluster.size()));
        for (std::size_t j = 0; j < cluster.size(); ++j)
          x.col(static_cast<Index>(j)) = e.vectors.col(cluster[j]);
        const Mat cc = x.adjoint() * c * x;
        const auto ce = linalg::hermitian_eig(0.5 * (cc + cc.adjoint()));
        const double lo_c = ce.values(0), hi_c = ce.values(ce.values.size() - 1);
        if (!(lo_c < 0.0 && hi_c > 0.0)) continue;
        // combine the extreme C-directions so that z^H cc z = 0
        const double w = std::sqrt(hi_c / (hi_c - lo_c));
        const double v = std::sqrt(-lo_c / (hi_c - lo_c));
        const Vec z = w * ce.vectors.col(0) + v * ce.vectors.col(ce.values.size() - 1);
        t = {mu, lam, (x * z).normalized()};
      }
      bool dup = false;
      for (const auto& o : out)
        if (std::abs(o.t.mu - t.mu) <= 1e-8 * std::max(1.0, std::abs(t.mu)) &&
            std::abs(o.t.lambda - t.lambda) <= 1e-8 * std::max(1.0, scale))
          dup = true;
      if (!dup) out.push_back({t, static_cast<int>(i)});
    }
  }
  std::sort(out.begin(), out.end(), [](const CurveTriplet& x, const CurveTriplet& y) {
    return x.t.lambda > y.t.lambda;
  });
  return out;
}

EvoptResult dichotomous_evopt(const Mat& a, const Mat& b, double lo, double hi,
                              double tol_width, double eps_r) {
  require(a.rows() == b.rows() && a.rows() == a.cols() && b.rows() == b.cols(),
          ErrorCode::dimension_mismatch, "A and B must be square and equal");
  require(hi > lo && tol_width > 0.0, ErrorCode::invalid_argument,
          "need a nonempty interval and a positive width");
  if (eps_r <= 0.0) eps_r = tol_width / 4.0;
  require(2.0 * eps_r < tol_width, ErrorCode::invalid_argument,
          "eps_r must be below half the target width");
  const Mat c = a - b;
  auto g = [&](double mu) { return linalg::hermitian_eig(a - mu * c).values(0); };
  EvoptResult r;
  while (hi - lo >= tol_width) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid - eps_r) < g(mid + eps_r))
      lo = mid - eps_r;
    else
      hi = mid + eps_r;
    ++r.iterations;
  }
  r.mu = 0.5 * (lo + hi);
  r.value = g(r.mu);
  return r;
}

namespace {

double sigma_min_at(const std::shared_ptr<const DtiMatrix>& ahat, double mu,
                    double rel_tol, int max_restarts) {
  if (const Mat* d = ahat->dense()) {
    Mat m = *d;
    m.diagonal().array() -= mu * kI;
    const RVec sv = linalg::singular_values(m);
    return sv(sv.size() - 1);
  }
  const ShiftedDtiSolver solver(ahat, mu * kI);
  const linalg::LinearMap inv_gram = [&solver](const Vec& in, Vec& out) {
    out = solver.solve(solver.solve_adjoint(in));
  };
  const auto lr = linalg::lanczos_largest(inv_gram, ahat->dim(), Vec(), 40,
                                          max_restarts, rel_tol);
  return 1.0 / std::sqrt(lr.value);
}

}  // namespace

double sigma_min_shifted(const std::shared_ptr<const DtiMatrix>& ahat,
                         double mu) {
  return sigma_min_at(ahat, mu, 1e-11, 20);
}

ScanResult sigma_min_scan_dti(const std::shared_ptr<const DtiMatrix>& ahat,
                              double mu_lo, double mu_hi, int points) {
  require(ahat != nullptr, ErrorCode::invalid_argument, "null matrix");
  require(ahat->dim() <= 1200 || ahat->banded(), ErrorCode::unsupported,
          "dense scan limited to m <= 1200");
  require(points >= 3 && mu_hi > mu_lo, ErrorCode::invalid_argument,
          "need at least 3 grid points on a nonempty range");
  ScanResult r;
  std::vector<double> mu(static_cast<std::size_t>(points));
  std::vector<double> s(mu.size());
  for (int i = 0; i < points; ++i) {
    mu[i] = mu_lo + (mu_hi - mu_lo) * i / (points - 1);
    // the grid only has to locate brackets
    s[i] = sigma_min_at(ahat, mu[i], 1e-3, 1);
    ++r.evaluations;
  }
  r.grid_min = *std::min_element(s.begin(), s.end());
  // local minima of the grid, best first
  std::vector<int> mins;
  for (int i = 0; i < points; ++i) {
    const bool left = i == 0 || s[i] <= s[i - 1];
    const bool right = i == points - 1 || s[i] <= s[i + 1];
    if (left && right) mins.push_back(i);
  }
  std::sort(mins.begin(), mins.end(), [&](int x, int y) { return s[x] < s[y]; });
  if (mins.size() > 4) mins.resize(4);

  r.beta = std::numeric_limits<double>::infinity();
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (const int i : mins) {
    double lo = mu[std::max(0, i - 1)], hi = mu[std::min(points - 1, i + 1)];
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = sigma_min_shifted(ahat, x1), f2 = sigma_min_shifted(ahat, x2);
    r.evaluations += 2;
    while (hi - lo > 1e-10) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = sigma_min_shifted(ahat, x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = sigma_min_shifted(ahat, x2);
      }
      ++r.evaluations;
    }
    double best_mu = f1 < f2 ? x1 : x2, best = std::min(f1, f2);
    const double at_grid = sigma_min_shifted(ahat, mu[i]);
    ++r.evaluations;
    if (at_grid < best) {
      best = at_grid;
      best_mu = mu[i];
    }
    if (best < r.beta) {
      r.beta = best;
      r.mu = best_mu;
    }
  }
  return r;
}

}  // namespace twodevp
