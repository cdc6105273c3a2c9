// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the solvers through the C interface only.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "twodevp/twodevp.h"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNoConvergence = 2;

// thrown for anything the user got wrong; maps to exit code 1
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(twodevp_status s) {
  if (s == TWODEVP_OK) return;
  std::string msg = twodevp_status_string(s);
  const std::string detail = twodevp_last_error();
  if (!detail.empty()) msg += ": " + detail;
  throw InputError(msg);
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using PairPtr = std::unique_ptr<twodevp_pair, Deleter<twodevp_pair, twodevp_pair_free>>;
using MinmaxPtr =
    std::unique_ptr<twodevp_minmax, Deleter<twodevp_minmax, twodevp_minmax_free>>;
using MatrixPtr =
    std::unique_ptr<twodevp_matrix, Deleter<twodevp_matrix, twodevp_matrix_free>>;
using ResultPtr =
    std::unique_ptr<twodevp_result, Deleter<twodevp_result, twodevp_result_free>>;

struct Source {
  std::string generator;
  std::string a, b, c, ahat;
  std::size_t n = 0;
  std::size_t m = 0;
  double reynolds = 1000.0;
  std::uint64_t seed = 0;

  void add_to(CLI::App* app, const std::string& gens, bool pair_files,
              bool minmax_files, bool matrix_file) {
    app->add_option("--generator", generator, "Built-in problem: " + gens);
    if (pair_files) {
      app->add_option("--a", a, "Matrix Market file for A");
      app->add_option("--c", c, "Matrix Market file for C");
    }
    if (minmax_files) {
      app->add_option("--a", a, "Matrix Market file for A");
      app->add_option("--b", b, "Matrix Market file for B");
    }
    if (matrix_file) app->add_option("--ahat", ahat, "Matrix Market file");
    app->add_option("--n", n, "Dimension for generators that take one");
    app->add_option("--m", m, "Channel or matrix dimension for generators");
    app->add_option("--re", reynolds, "Reynolds number (orr)");
    app->add_option("--seed", seed, "Master seed, recorded in every output");
  }

  Json echo() const {
    Json j;
    if (!generator.empty()) {
      j["generator"] = generator;
      if (n) j["n"] = n;
      if (m) j["m"] = m;
      if (generator == "orr") j["re"] = reynolds;
    }
    if (!a.empty()) j["a"] = a;
    if (!b.empty()) j["b"] = b;
    if (!c.empty()) j["c"] = c;
    if (!ahat.empty()) j["ahat"] = ahat;
    j["seed"] = seed;
    return j;
  }

  void one_source(bool has_files) const {
    if (generator.empty() == !has_files)
      throw InputError("give exactly one problem source: --generator or files");
  }

  PairPtr pair() const {
    const bool files = !a.empty() || !c.empty();
    one_source(files);
    twodevp_pair* p = nullptr;
    if (files) {
      if (a.empty() || c.empty()) throw InputError("need both --a and --c");
      check(twodevp_pair_load(a.c_str(), c.c_str(), &p));
    } else if (generator == "example61") {
      check(twodevp_pair_example61(&p));
    } else if (generator == "random") {
      check(twodevp_pair_random(n ? n : 20, seed, &p));
    } else {
      throw InputError("unknown pair generator '" + generator + "'");
    }
    return PairPtr(p);
  }

  MinmaxPtr minmax() const {
    const bool files = !a.empty() || !b.empty();
    one_source(files);
    twodevp_minmax* p = nullptr;
    if (files) {
      if (a.empty() || b.empty()) throw InputError("need both --a and --b");
      check(twodevp_minmax_load(a.c_str(), b.c_str(), &p));
    } else if (generator == "mimo") {
      check(twodevp_minmax_mimo(m ? m : 10, seed, &p));
    } else {
      throw InputError("unknown minmax generator '" + generator + "'");
    }
    return MinmaxPtr(p);
  }

  MatrixPtr matrix() const {
    one_source(!ahat.empty());
    twodevp_matrix* p = nullptr;
    if (!ahat.empty()) {
      check(twodevp_matrix_load(ahat.c_str(), &p));
    } else if (generator == "orr") {
      check(twodevp_matrix_orr_sommerfeld(n ? n : 1000, reynolds, &p));
    } else if (generator == "random-stable") {
      check(twodevp_matrix_random_stable(m ? m : 20, seed, &p));
    } else {
      throw InputError("unknown matrix generator '" + generator + "'");
    }
    return MatrixPtr(p);
  }
};

struct Output {
  std::string dir;
  std::string prefix;

  void add_to(CLI::App* app) {
    app->add_option("--out-dir", dir,
                    "Output directory (default $TWODEVP_OUTPUT_DIR, else .)");
    app->add_option("--prefix", prefix, "Base name of the output files");
  }

  fs::path base(const std::string& fallback) const {
    std::string d = dir;
    if (d.empty()) {
      const char* env = std::getenv("TWODEVP_OUTPUT_DIR");
      d = env && *env ? env : ".";
    }
    std::error_code ec;
    fs::create_directories(d, ec);
    if (ec) throw InputError("cannot create output directory " + d);
    return fs::path(d) / (prefix.empty() ? fallback : prefix);
  }
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write " + p.string());
  out << text;
}

// Library JSON plus the config echo; written to disk and echoed to stdout.
void emit(const twodevp_result* r, const Json& config, const fs::path& base,
          const std::string& csv_suffix) {
  Json doc = Json::parse(twodevp_result_json(r));
  Json out{{"version", doc["version"]}, {"config", config}};
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (it.key() != "version") out[it.key()] = it.value();
  const std::string text = out.dump(2) + "\n";
  write_file(base.string() + ".json", text);
  const std::string csv = twodevp_result_csv(r);
  if (!csv.empty()) write_file(base.string() + csv_suffix + ".csv", csv);
  std::cout << text;
}

std::string result_string(const twodevp_result* r, const char* key) {
  const char* s = twodevp_result_string(r, key);
  return s ? s : "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-parameter Hermitian eigenvalue solvers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(twodevp_version()));

  // solve
  Source solve_src;
  Output solve_out;
  double mu0 = 0.0, lambda0 = 0.0;
  twodevp_solve_options sopt;
  twodevp_solve_options_init(&sopt);
  bool s_stag = false, s_timing = false;
  auto* solve = app.add_subcommand("solve", "Run the 2D Rayleigh quotient iteration");
  solve_src.add_to(solve, "example61, random", true, false, false);
  solve->add_option("--mu0", mu0, "Initial mu")->required();
  solve->add_option("--lambda0", lambda0, "Initial lambda")->required();
  solve->add_option("--tol", sopt.tol, "Stopping tolerance (default n*eps)");
  solve->add_option("--maxit", sopt.maxit, "Iteration limit");
  solve->add_flag("--stagnation", s_stag, "Stop when the error stops decreasing");
  solve->add_flag("--timing", s_timing, "Record elapsed seconds");
  solve_out.add_to(solve);

  // rqminmax
  Source rq_src;
  Output rq_out;
  twodevp_rqminmax_options ropt;
  twodevp_rqminmax_options_init(&ropt);
  auto* rq = app.add_subcommand("rqminmax", "Minimize the larger of two Rayleigh quotients");
  rq_src.add_to(rq, "mimo", false, true, false);
  rq->add_option("--reltol", ropt.reltol, "Eigenvalue acceptance tolerance");
  rq->add_option("--backtol", ropt.backtol, "Inner tolerance (default n*eps)");
  rq->add_option("--abstol", ropt.abstol, "Bisection width floor");
  rq->add_option("--max-outer", ropt.max_outer, "Outer iteration limit");
  rq->add_option("--maxit", ropt.maxit, "Inner iteration limit");
  rq_out.add_to(rq);

  // dti
  Source dti_src;
  Output dti_out;
  twodevp_dti_options dopt;
  twodevp_dti_options_init(&dopt);
  bool d_validate = false, d_no_stag = false, d_timing = false;
  auto* dti = app.add_subcommand("dti", "Distance to instability of a stable matrix");
  dti_src.add_to(dti, "orr, random-stable", false, false, true);
  dti->add_option("--tol", dopt.tol, "Stopping tolerance (default m*eps)");
  dti->add_option("--reltol", dopt.reltol, "Validation margin");
  dti->add_option("--maxit", dopt.maxit, "Iteration limit");
  dti->add_flag("--validate", d_validate, "Check the result against the Hamiltonian");
  dti->add_flag("--no-stagnation", d_no_stag, "Disable the stagnation stop");
  dti->add_flag("--timing", d_timing, "Record elapsed seconds");
  dti_out.add_to(dti);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Brute-force reference methods");
  oracle->require_subcommand(1);
  Source ec_src, ev_src, ds_src;
  Output ec_out, ev_out, ds_out;
  std::vector<double> ec_range{-1.5, 1.5}, ev_range{0.0, 1.0}, ds_range{-60.0, 60.0};
  int ec_points = 300, ds_points = 2001;
  double ev_tol = 1e-8, ev_eps = 0.0;
  auto* ec = oracle->add_subcommand("eigencurves", "Sorted eigencurves and their 2D-eigenvalues");
  ec_src.add_to(ec, "example61, random", true, false, false);
  ec->add_option("--range", ec_range, "mu interval")->expected(2);
  ec->add_option("--points", ec_points, "Grid points");
  ec_out.add_to(ec);
  auto* ev = oracle->add_subcommand("evopt-dichotomous", "Dichotomous maximization of lambda_min");
  ev_src.add_to(ev, "mimo", false, true, false);
  ev->add_option("--range", ev_range, "mu interval")->expected(2);
  ev->add_option("--tol", ev_tol, "Target interval width");
  ev->add_option("--eps-r", ev_eps, "Probe offset (default tol/4)");
  ev_out.add_to(ev);
  auto* ds = oracle->add_subcommand("dti-scan", "Grid and golden-section minimization of sigma_min");
  ds_src.add_to(ds, "orr, random-stable", false, false, true);
  ds->add_option("--range", ds_range, "mu interval")->expected(2);
  ds->add_option("--points", ds_points, "Grid points");
  ds_out.add_to(ds);

  // bench
  std::string bench_name;
  Output bench_out;
  twodevp_bench_options bopt;
  twodevp_bench_options_init(&bopt);
  std::vector<double> b_range{bopt.mu_lo, bopt.mu_hi};
  bool b_timing = false;
  auto* bench = app.add_subcommand("bench", "Reproduce the reference experiments");
  bench->add_option("name", bench_name,
                    "table61, table62, basin-map, mimo-evopt or dti-orr")
      ->required();
  bench->add_option("--grid", bopt.grid, "basin-map points per axis");
  bench->add_option("--instances", bopt.instances, "mimo-evopt instances");
  bench->add_option("--m", bopt.m, "mimo-evopt channel dimension");
  bench->add_option("--evopt-tol", bopt.evopt_tol, "Dichotomous target width");
  bench->add_option("--n", bopt.n, "dti-orr dimension");
  bench->add_option("--re", bopt.reynolds, "dti-orr Reynolds number");
  bench->add_option("--range", b_range, "dti-orr scan interval")->expected(2);
  bench->add_option("--points", bopt.points, "dti-orr scan grid points");
  bench->add_option("--maxit", bopt.maxit, "Iteration limit per run");
  bench->add_option("--seed", bopt.seed, "Master seed");
  bench->add_flag("--timing", b_timing, "Add wall-clock columns");
  bench_out.add_to(bench);

  // generate
  Source gen_src;
  std::string gen_dir = ".";
  auto* gen = app.add_subcommand("generate", "Write a built-in problem as Matrix Market");
  gen_src.add_to(gen, "example61, random, mimo, orr, random-stable", false,
                 false, false);
  gen->add_option("--out-dir", gen_dir, "Directory for the .mtx files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*solve) {
      sopt.stagnation_check = s_stag;
      sopt.timing = s_timing;
      sopt.rng_seed = solve_src.seed;
      const PairPtr p = solve_src.pair();
      twodevp_result* r = nullptr;
      check(twodevp_solve(p.get(), mu0, lambda0, &sopt, &r));
      const ResultPtr res(r);
      Json cfg{{"command", "solve"}, {"source", solve_src.echo()},
               {"mu0", mu0},         {"lambda0", lambda0},
               {"tol", sopt.tol},    {"maxit", sopt.maxit},
               {"stagnation_check", s_stag}};
      emit(res.get(), cfg, solve_out.base("solve"), "_history");
      return twodevp_result_converged(res.get()) ? kExitOk : kExitNoConvergence;
    }
    if (*rq) {
      ropt.rng_seed = rq_src.seed;
      const MinmaxPtr p = rq_src.minmax();
      twodevp_result* r = nullptr;
      check(twodevp_rqminmax(p.get(), &ropt, &r));
      const ResultPtr res(r);
      Json cfg{{"command", "rqminmax"},  {"source", rq_src.echo()},
               {"reltol", ropt.reltol},  {"backtol", ropt.backtol},
               {"abstol", ropt.abstol},  {"max_outer", ropt.max_outer},
               {"maxit", ropt.maxit}};
      emit(res.get(), cfg, rq_out.base("rqminmax"), "_outer");
      return twodevp_result_converged(res.get()) ? kExitOk : kExitNoConvergence;
    }
    if (*dti) {
      dopt.validate = d_validate;
      dopt.stagnation_check = !d_no_stag;
      dopt.timing = d_timing;
      const MatrixPtr p = dti_src.matrix();
      twodevp_result* r = nullptr;
      check(twodevp_dti(p.get(), &dopt, &r));
      const ResultPtr res(r);
      Json cfg{{"command", "dti"},      {"source", dti_src.echo()},
               {"tol", dopt.tol},       {"reltol", dopt.reltol},
               {"maxit", dopt.maxit},   {"validate", d_validate},
               {"stagnation_check", !d_no_stag}};
      emit(res.get(), cfg, dti_out.base("dti"), "_history");
      // the stagnation stop is a designed termination that returns the best
      // iterate, so it counts as success here
      const std::string status = result_string(res.get(), "status");
      return status == "converged" || status == "stagnated" ? kExitOk
                                                            : kExitNoConvergence;
    }
    if (*ec) {
      const PairPtr p = ec_src.pair();
      twodevp_result* r = nullptr;
      check(twodevp_oracle_eigencurves(p.get(), ec_range[0], ec_range[1],
                                       ec_points, &r));
      const ResultPtr res(r);
      Json cfg{{"command", "oracle eigencurves"}, {"source", ec_src.echo()},
               {"range", ec_range}, {"points", ec_points}};
      emit(res.get(), cfg, ec_out.base("eigencurves"), "");
      return kExitOk;
    }
    if (*ev) {
      const MinmaxPtr p = ev_src.minmax();
      twodevp_result* r = nullptr;
      check(twodevp_oracle_evopt(p.get(), ev_range[0], ev_range[1], ev_tol,
                                 ev_eps, &r));
      const ResultPtr res(r);
      Json cfg{{"command", "oracle evopt-dichotomous"}, {"source", ev_src.echo()},
               {"range", ev_range}, {"tol", ev_tol}, {"eps_r", ev_eps}};
      emit(res.get(), cfg, ev_out.base("evopt"), "");
      return kExitOk;
    }
    if (*ds) {
      const MatrixPtr p = ds_src.matrix();
      twodevp_result* r = nullptr;
      check(twodevp_oracle_dti_scan(p.get(), ds_range[0], ds_range[1],
                                    ds_points, &r));
      const ResultPtr res(r);
      Json cfg{{"command", "oracle dti-scan"}, {"source", ds_src.echo()},
               {"range", ds_range}, {"points", ds_points}};
      emit(res.get(), cfg, ds_out.base("dti_scan"), "");
      return kExitOk;
    }
    if (*bench) {
      bopt.mu_lo = b_range[0];
      bopt.mu_hi = b_range[1];
      bopt.timing = b_timing;
      twodevp_result* r = nullptr;
      check(twodevp_bench(bench_name.c_str(), &bopt, &r));
      const ResultPtr res(r);
      Json cfg{{"command", "bench"},      {"name", bench_name},
               {"grid", bopt.grid},       {"instances", bopt.instances},
               {"m", bopt.m},             {"evopt_tol", bopt.evopt_tol},
               {"n", bopt.n},             {"re", bopt.reynolds},
               {"range", b_range},        {"points", bopt.points},
               {"maxit", bopt.maxit},     {"seed", bopt.seed},
               {"timing", b_timing}};
      emit(res.get(), cfg, bench_out.base(bench_name), "");
      return kExitOk;
    }
    if (*gen) {
      const fs::path dir(gen_dir);
      std::error_code ec_;
      fs::create_directories(dir, ec_);
      if (ec_) throw InputError("cannot create " + gen_dir);
      const std::string g = gen_src.generator;
      if (g == "example61" || g == "random") {
        const PairPtr p = gen_src.pair();
        check(twodevp_pair_save(p.get(), (dir / "A.mtx").c_str(),
                                (dir / "C.mtx").c_str()));
      } else if (g == "mimo") {
        const MinmaxPtr p = gen_src.minmax();
        check(twodevp_minmax_save(p.get(), (dir / "A.mtx").c_str(),
                                  (dir / "B.mtx").c_str()));
      } else if (g == "orr" || g == "random-stable") {
        const MatrixPtr p = gen_src.matrix();
        check(twodevp_matrix_save(p.get(), (dir / "ahat.mtx").c_str()));
      } else {
        throw InputError("unknown generator '" + g + "'");
      }
      return kExitOk;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
