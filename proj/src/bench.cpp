// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#include "twodevp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace twodevp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// the three 2D-eigentriplets of the 3 x 3 example, highest lambda first
std::vector<CurveTriplet> example61_reference(const HermitianPair& pair) {
  return eigencurve_scan(pair, -1.5, 1.5, 300);
}

BenchReport table_run(const HermitianPair& pair, const CurveTriplet& ref,
                      double mu0, double lambda0, const BenchOptions& opts) {
  SolverOptions so;
  so.tol = static_cast<double>(pair.dim()) * kMachEps;
  so.maxit = opts.maxit;
  so.rng_seed = opts.seed;
  const TwoDTriplet init{mu0, lambda0, initial_vector(pair, mu0, lambda0)};
  const SolveResult r = two_drqi(pair, init, so);

  std::vector<std::string> head{"k", "mu", "lambda", "eta", "c1", "c2",
                                "abs_a12", "branch", "err_mu", "err_lambda"};
  if (opts.timing) head.push_back("elapsed");
  BenchReport rep;
  rep.csv = csv_row(head);
  for (const auto& h : r.history) {
    std::vector<std::string> row{
        std::to_string(h.k),        format_double(h.mu),
        format_double(h.lambda),    format_double(h.eta),
        format_double(h.c1),        format_double(h.c2),
        format_double(h.abs_a12),   to_string(h.branch),
        format_double(std::abs(h.mu - ref.t.mu)),
        format_double(std::abs(h.lambda - ref.t.lambda))};
    if (opts.timing) row.push_back(format_double(h.elapsed));
    rep.csv += csv_row(row);
  }
  rep.summary = Json{{"reference", {{"mu", ref.t.mu}, {"lambda", ref.t.lambda}}},
                     {"mu0", mu0},
                     {"lambda0", lambda0},
                     {"status", to_string(r.status)},
                     {"iterations", r.iterations},
                     {"mu", r.triplet.mu},
                     {"lambda", r.triplet.lambda},
                     {"eta1", r.eta}};
  return rep;
}

BenchReport table61(const BenchOptions& opts) {
  const HermitianPair pair = build_example61();
  const auto refs = example61_reference(pair);
  require(!refs.empty(), ErrorCode::numerical, "eigencurve scan found nothing");
  // lowest 2D-eigenvalue; the initial sits 1.6 and 0.89 above it
  const CurveTriplet& ref = refs.back();
  return table_run(pair, ref, ref.t.mu + 1.6, ref.t.lambda + 0.89, opts);
}

BenchReport table62(const BenchOptions& opts) {
  const HermitianPair pair = build_example61();
  const auto refs = example61_reference(pair);
  require(!refs.empty(), ErrorCode::numerical, "eigencurve scan found nothing");
  const CurveTriplet& ref = refs.front();  // (1, 1), multiplicity two
  return table_run(pair, ref, ref.t.mu + 1.0, ref.t.lambda + 1.0, opts);
}

BenchReport basin_map(const BenchOptions& opts) {
  require(opts.grid >= 2, ErrorCode::invalid_argument, "grid must be >= 2");
  const HermitianPair pair = build_example61();
  const auto refs = example61_reference(pair);
  BenchReport rep;
  rep.csv = csv_row({"i", "j", "mu0", "lambda0", "status", "iterations", "mu",
                     "lambda", "eta1", "target"});
  int converged = 0;
  std::vector<int> hits(refs.size(), 0);
  for (int i = 0; i < opts.grid; ++i) {
    for (int j = 0; j < opts.grid; ++j) {
      const double mu0 = -1.5 + 3.0 * i / (opts.grid - 1);
      const double lambda0 = -2.0 + 4.0 * j / (opts.grid - 1);
      SolverOptions so;
      so.tol = static_cast<double>(pair.dim()) * kMachEps;
      so.maxit = opts.maxit;
      so.rng_seed = opts.seed + static_cast<std::uint64_t>(i * opts.grid + j);
      const TwoDTriplet init{mu0, lambda0, initial_vector(pair, mu0, lambda0)};
      const SolveResult r = two_drqi(pair, init, so);
      int target = -1;
      for (std::size_t t = 0; t < refs.size(); ++t)
        if (std::abs(r.triplet.mu - refs[t].t.mu) <= 1e-8 &&
            std::abs(r.triplet.lambda - refs[t].t.lambda) <= 1e-8)
          target = static_cast<int>(t);
      if (r.status == Status::converged) ++converged;
      if (target >= 0) ++hits[static_cast<std::size_t>(target)];
      rep.csv += csv_row({std::to_string(i), std::to_string(j),
                          format_double(mu0), format_double(lambda0),
                          to_string(r.status), std::to_string(r.iterations),
                          format_double(r.triplet.mu),
                          format_double(r.triplet.lambda), format_double(r.eta),
                          std::to_string(target)});
    }
  }
  Json targets = Json::array();
  for (std::size_t t = 0; t < refs.size(); ++t)
    targets.push_back(
        Json{{"mu", refs[t].t.mu}, {"lambda", refs[t].t.lambda}, {"runs", hits[t]}});
  rep.summary = Json{{"runs", opts.grid * opts.grid},
                     {"converged", converged},
                     {"targets", targets}};
  return rep;
}

BenchReport mimo_evopt(const BenchOptions& opts) {
  require(opts.instances >= 1 && opts.m >= 2, ErrorCode::invalid_argument,
          "need instances >= 1 and m >= 2");
  std::vector<std::string> head{"instance", "seed", "case", "mu_rqminmax",
                                "value_rqminmax", "outer_iters", "drqi_iters",
                                "mu_dichotomous", "value_dichotomous",
                                "dichotomous_iters", "rel_diff"};
  if (opts.timing) {
    head.push_back("time_rqminmax");
    head.push_back("time_dichotomous");
  }
  BenchReport rep;
  rep.csv = csv_row(head);
  double outer_sum = 0.0, worst = 0.0;
  int case3 = 0;
  for (int i = 0; i < opts.instances; ++i) {
    const std::uint64_t seed = opts.seed + static_cast<std::uint64_t>(i);
    const MimoPair mp = random_mimo_pair(opts.m, seed);
    RqMinmaxOptions ro;
    ro.maxit = opts.maxit;
    ro.rng_seed = seed;
    const auto t0 = Clock::now();
    const RqMinmaxResult rr = rqminmax_solve(mp.a, mp.b, ro);
    const double t_rq = seconds_since(t0);
    int drqi = 0;
    for (const auto& s : rr.outer) drqi += s.drqi_iterations;

    const auto t1 = Clock::now();
    const EvoptResult er = dichotomous_evopt(mp.a->dense(), mp.b->dense(), 0.0,
                                             1.0, opts.evopt_tol);
    const double t_di = seconds_since(t1);

    const bool third = rr.case_taken == MinmaxCase::III_rqi ||
                       rr.case_taken == MinmaxCase::III_recovery;
    const double rel = third ? std::abs(rr.mu_opt - er.mu) / std::abs(er.mu)
                             : std::numeric_limits<double>::quiet_NaN();
    if (third) {
      ++case3;
      outer_sum += rr.outer_iters;
      worst = std::max(worst, rel);
    }
    std::vector<std::string> row{
        std::to_string(i),          std::to_string(seed),
        to_string(rr.case_taken),   format_double(rr.mu_opt),
        format_double(rr.value),    std::to_string(rr.outer_iters),
        std::to_string(drqi),       format_double(er.mu),
        format_double(er.value),    std::to_string(er.iterations),
        format_double(rel)};
    if (opts.timing) {
      row.push_back(format_double(t_rq));
      row.push_back(format_double(t_di));
    }
    rep.csv += csv_row(row);
  }
  rep.summary = Json{{"instances", opts.instances},
                     {"m", opts.m},
                     {"case_iii", case3},
                     {"mean_outer_iters", case3 ? outer_sum / case3 : 0.0},
                     {"max_rel_diff", worst}};
  return rep;
}

BenchReport dti_orr(const BenchOptions& opts) {
  const auto ahat = build_orr_sommerfeld(opts.n, opts.reynolds);
  DtiOptions dopt;
  dopt.maxit = opts.maxit;
  const auto t0 = Clock::now();
  const DtiResult dr = dti_solve(ahat, dopt);
  const double t_dti = seconds_since(t0);
  const auto t1 = Clock::now();
  const ScanResult sr =
      sigma_min_scan_dti(ahat, opts.mu_lo, opts.mu_hi, opts.points);
  const double t_scan = seconds_since(t1);

  std::vector<std::string> head{"method", "n", "beta", "mu", "iterations",
                                "eta2", "status"};
  if (opts.timing) head.push_back("time");
  BenchReport rep;
  rep.csv = csv_row(head);
  std::vector<std::string> a{"2drqi",
                             std::to_string(opts.n),
                             format_double(dr.beta_hat),
                             format_double(dr.mu_hat),
                             std::to_string(dr.iterations),
                             format_double(dr.eta2),
                             to_string(dr.status)};
  std::vector<std::string> b{"sigma-min-scan",       std::to_string(opts.n),
                             format_double(sr.beta), format_double(sr.mu),
                             std::to_string(sr.evaluations), "nan", "done"};
  if (opts.timing) {
    a.push_back(format_double(t_dti));
    b.push_back(format_double(t_scan));
  }
  rep.csv += csv_row(a) + csv_row(b);
  const double rel = std::abs(dr.beta_hat - sr.beta) / sr.beta;
  rep.summary = Json{{"n", opts.n},
                     {"beta_2drqi", dr.beta_hat},
                     {"beta_scan", sr.beta},
                     {"rel_diff", rel},
                     {"agreeing_digits", rel > 0.0 ? -std::log10(rel) : 17.0}};
  return rep;
}

}  // namespace

const std::vector<std::string>& bench_names() {
  static const std::vector<std::string> names{"table61", "table62", "basin-map",
                                              "mimo-evopt", "dti-orr"};
  return names;
}

BenchReport run_bench(const std::string& name, const BenchOptions& opts) {
  if (name == "table61") return table61(opts);
  if (name == "table62") return table62(opts);
  if (name == "basin-map") return basin_map(opts);
  if (name == "mimo-evopt") return mimo_evopt(opts);
  if (name == "dti-orr") return dti_orr(opts);
  fail(ErrorCode::invalid_argument, "unknown bench '" + name + "'");
}

}  // namespace twodevp
