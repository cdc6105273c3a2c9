// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#include "twodevp/report.hpp"

#include <cmath>
#include <cstdio>

#ifndef TWODEVP_VERSION
#define TWODEVP_VERSION "0.0.0"
#endif

namespace twodevp {

const char* version() { return TWODEVP_VERSION; }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  out += '\n';
  return out;
}

namespace {

// JSON has no NaN; null stands in for it
Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

std::string history_csv(const ConvergenceHistory& h, bool timing) {
  std::vector<std::string> head{"k", "mu", "lambda", "eta", "c1",
                                "c2", "abs_a12", "branch"};
  if (timing) head.push_back("elapsed");
  std::string out = csv_row(head);
  for (const auto& r : h) {
    std::vector<std::string> row{std::to_string(r.k), format_double(r.mu),
                                 format_double(r.lambda), format_double(r.eta),
                                 format_double(r.c1), format_double(r.c2),
                                 format_double(r.abs_a12), to_string(r.branch)};
    if (timing) row.push_back(format_double(r.elapsed));
    out += csv_row(row);
  }
  return out;
}

Json history_json(const ConvergenceHistory& h, bool timing) {
  Json arr = Json::array();
  for (const auto& r : h) {
    Json j{{"k", r.k},           {"mu", num(r.mu)}, {"lambda", num(r.lambda)},
           {"eta", num(r.eta)},  {"c1", num(r.c1)}, {"c2", num(r.c2)},
           {"abs_a12", num(r.abs_a12)}, {"branch", to_string(r.branch)}};
    if (timing) j["elapsed"] = r.elapsed;
    arr.push_back(std::move(j));
  }
  return arr;
}

Json vector_json(const Vec& x) {
  Json re = Json::array(), im = Json::array();
  for (Index i = 0; i < x.size(); ++i) {
    re.push_back(num(x(i).real()));
    im.push_back(num(x(i).imag()));
  }
  return Json{{"re", re}, {"im", im}};
}

Json solve_json(const HermitianPair& pair, const SolveResult& r, bool timing) {
  const BackwardErrorReport be = eta1(pair, r.triplet);
  return Json{{"status", to_string(r.status)},
              {"iterations", r.iterations},
              {"mu", num(r.triplet.mu)},
              {"lambda", num(r.triplet.lambda)},
              {"eta1", num(be.eta1)},
              {"eta_bracket", {num(be.eta1), num(std::sqrt(2.0) * be.eta1)}},
              {"gamma_a", num(be.gamma_a)},
              {"gamma_c", num(be.gamma_c)},
              {"r_norm", num(be.r_norm)},
              {"x", vector_json(r.triplet.x)},
              {"history", history_json(r.history, timing)}};
}

Json rqminmax_json(const RqMinmaxResult& r) {
  Json outer = Json::array();
  for (const auto& s : r.outer)
    outer.push_back(Json{{"a", num(s.a)},
                         {"b", num(s.b)},
                         {"mu0", num(s.mu0)},
                         {"lambda0", num(s.lambda0)},
                         {"drqi_status", to_string(s.drqi_status)},
                         {"drqi_iterations", s.drqi_iterations},
                         {"mu_hat", num(s.mu_hat)},
                         {"lambda_hat", num(s.lambda_hat)},
                         {"accepted", s.accepted}});
  return Json{{"case", to_string(r.case_taken)},
              {"converged", r.converged},
              {"value", num(r.value)},
              {"mu", num(r.mu_opt)},
              {"outer_iters", r.outer_iters},
              {"x", vector_json(r.x_opt)},
              {"outer", outer}};
}

Json dti_json(const DtiResult& r, bool timing) {
  return Json{{"status", to_string(r.status)},
              {"iterations", r.iterations},
              {"beta", num(r.beta_hat)},
              {"mu", num(r.mu_hat)},
              {"lambda", num(r.lambda_hat)},
              {"negative_branch", r.negative_branch},
              {"eta2", num(r.eta2)},
              {"eta1", num(r.eta1)},
              {"eta_bracket", {num(r.eta1), num(std::sqrt(2.0) * r.eta1)}},
              {"ahat_norm", num(r.ahat_norm)},
              {"validated", to_string(r.validated)},
              {"start",
               {{"rightmost_re", num(r.start.rightmost.real())},
                {"rightmost_im", num(r.start.rightmost.imag())},
                {"mu0", num(r.start.mu0)},
                {"lambda0", num(r.start.lambda0)}}},
              {"x", vector_json(r.x_hat)},
              {"history", history_json(r.history, timing)}};
}

Json scan_json(const ScanResult& r) {
  return Json{{"beta", num(r.beta)},
              {"mu", num(r.mu)},
              {"grid_min", num(r.grid_min)},
              {"evaluations", r.evaluations}};
}

std::string eigencurve_csv(const std::vector<EigencurveSample>& samples) {
  if (samples.empty()) return "mu\n";
  const Index n = samples.front().lambda.size();
  std::vector<std::string> head{"mu"};
  for (Index i = 1; i <= n; ++i) head.push_back("lambda" + std::to_string(i));
  for (Index i = 1; i <= n; ++i) head.push_back("xcx" + std::to_string(i));
  std::string out = csv_row(head);
  for (const auto& s : samples) {
    std::vector<std::string> row{format_double(s.mu)};
    for (Index i = 0; i < n; ++i) row.push_back(format_double(s.lambda(i)));
    for (Index i = 0; i < n; ++i) row.push_back(format_double(s.xcx(i)));
    out += csv_row(row);
  }
  return out;
}

Json curve_triplets_json(const std::vector<CurveTriplet>& t) {
  Json arr = Json::array();
  for (const auto& c : t)
    arr.push_back(Json{{"curve", c.curve},
                       {"mu", num(c.t.mu)},
                       {"lambda", num(c.t.lambda)},
                       {"x", vector_json(c.t.x)}});
  return arr;
}

}  // namespace twodevp
