// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

#include "twodevp/twodevp.h"

#include <cmath>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "twodevp/bench.hpp"
#include "twodevp/matrix_market.hpp"
#include "twodevp/report.hpp"

using namespace twodevp;

struct twodevp_pair {
  HermitianPair pair;
};

struct twodevp_minmax {
  OperatorPtr a, b;
};

struct twodevp_matrix {
  std::shared_ptr<const DtiMatrix> m;
};

struct twodevp_result {
  Json doc;
  std::string json;
  std::string csv;
  bool converged = false;
};

namespace {

thread_local std::string last_error;

template <class F>
twodevp_status guard(F&& f) {
  last_error.clear();
  try {
    f();
    return TWODEVP_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return static_cast<twodevp_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return TWODEVP_INTERNAL;
}

template <class T>
void check_out(T** out) {
  require(out != nullptr, ErrorCode::invalid_argument, "null output pointer");
  *out = nullptr;
}

template <class T>
const T& deref(const T* p, const char* what) {
  require(p != nullptr, ErrorCode::invalid_argument,
          std::string("null ") + what + " handle");
  return *p;
}

Mat from_interleaved(size_t n, const double* data) {
  require(data != nullptr && n > 0, ErrorCode::invalid_argument,
          "null or empty matrix data");
  const auto m = static_cast<Index>(n);
  Mat out(m, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i) {
      const size_t k = 2 * static_cast<size_t>(j * m + i);
      out(i, j) = cplx(data[k], data[k + 1]);
    }
  return out;
}

std::string path_arg(const char* p, const char* what) {
  require(p != nullptr && *p != '\0', ErrorCode::invalid_argument,
          std::string("missing ") + what + " path");
  return p;
}

twodevp_result* make_result(Json doc, std::string csv, bool converged) {
  auto* r = new twodevp_result;
  Json full{{"version", version()}};
  for (auto it = doc.begin(); it != doc.end(); ++it) full[it.key()] = it.value();
  r->doc = std::move(full);
  r->json = r->doc.dump(2) + "\n";
  r->csv = std::move(csv);
  r->converged = converged;
  return r;
}

}  // namespace

extern "C" {

const char* twodevp_version(void) { return version(); }

const char* twodevp_status_string(twodevp_status s) {
  switch (s) {
    case TWODEVP_OK: return "ok";
    case TWODEVP_INVALID_ARGUMENT: return "invalid argument";
    case TWODEVP_DIMENSION_MISMATCH: return "dimension mismatch";
    case TWODEVP_PARSE_ERROR: return "parse error";
    case TWODEVP_IO_ERROR: return "i/o error";
    case TWODEVP_NOT_INDEFINITE: return "C is not indefinite";
    case TWODEVP_SINGULAR: return "singular matrix";
    case TWODEVP_UNSTABLE: return "matrix is not stable";
    case TWODEVP_NUMERICAL: return "numerical failure";
    case TWODEVP_UNSUPPORTED: return "unsupported";
    case TWODEVP_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* twodevp_last_error(void) { return last_error.c_str(); }

// --- pairs -------------------------------------------------------------------

twodevp_status twodevp_pair_example61(twodevp_pair** out) {
  return guard([&] {
    check_out(out);
    *out = new twodevp_pair{build_example61()};
  });
}

twodevp_status twodevp_pair_random(size_t n, uint64_t seed, twodevp_pair** out) {
  return guard([&] {
    check_out(out);
    *out = new twodevp_pair{random_indefinite_pair(static_cast<Index>(n), seed)};
  });
}

twodevp_status twodevp_pair_load(const char* a_path, const char* c_path,
                                 twodevp_pair** out) {
  return guard([&] {
    check_out(out);
    Mat a = load_matrix_market(path_arg(a_path, "A"));
    Mat c = load_matrix_market(path_arg(c_path, "C"));
    *out = new twodevp_pair{HermitianPair::from_dense(std::move(a), std::move(c))};
  });
}

twodevp_status twodevp_pair_from_dense(size_t n, const double* a,
                                       const double* c, twodevp_pair** out) {
  return guard([&] {
    check_out(out);
    *out = new twodevp_pair{
        HermitianPair::from_dense(from_interleaved(n, a), from_interleaved(n, c))};
  });
}

twodevp_status twodevp_pair_save(const twodevp_pair* p, const char* a_path,
                                 const char* c_path) {
  return guard([&] {
    const auto& pair = deref(p, "pair").pair;
    save_matrix_market(path_arg(a_path, "A"), pair.dense_a(), true);
    save_matrix_market(path_arg(c_path, "C"), pair.dense_c(), true);
  });
}

size_t twodevp_pair_dim(const twodevp_pair* p) {
  return p ? static_cast<size_t>(p->pair.dim()) : 0;
}

void twodevp_pair_free(twodevp_pair* p) { delete p; }

// --- minmax ------------------------------------------------------------------

twodevp_status twodevp_minmax_mimo(size_t m, uint64_t seed,
                                   twodevp_minmax** out) {
  return guard([&] {
    check_out(out);
    const MimoPair mp = random_mimo_pair(static_cast<Index>(m), seed);
    *out = new twodevp_minmax{mp.a, mp.b};
  });
}

twodevp_status twodevp_minmax_load(const char* a_path, const char* b_path,
                                   twodevp_minmax** out) {
  return guard([&] {
    check_out(out);
    auto a = std::make_shared<DenseHermitian>(
        load_matrix_market(path_arg(a_path, "A")));
    auto b = std::make_shared<DenseHermitian>(
        load_matrix_market(path_arg(b_path, "B")));
    require(a->dim() == b->dim(), ErrorCode::dimension_mismatch,
            "A and B differ in size");
    *out = new twodevp_minmax{a, b};
  });
}

twodevp_status twodevp_minmax_save(const twodevp_minmax* p, const char* a_path,
                                   const char* b_path) {
  return guard([&] {
    const auto& mm = deref(p, "minmax");
    save_matrix_market(path_arg(a_path, "A"), mm.a->dense(), true);
    save_matrix_market(path_arg(b_path, "B"), mm.b->dense(), true);
  });
}

size_t twodevp_minmax_dim(const twodevp_minmax* p) {
  return p ? static_cast<size_t>(p->a->dim()) : 0;
}

void twodevp_minmax_free(twodevp_minmax* p) { delete p; }

// --- matrices ----------------------------------------------------------------

twodevp_status twodevp_matrix_orr_sommerfeld(size_t n, double reynolds,
                                             twodevp_matrix** out) {
  return guard([&] {
    check_out(out);
    *out = new twodevp_matrix{build_orr_sommerfeld(static_cast<Index>(n), reynolds)};
  });
}

twodevp_status twodevp_matrix_random_stable(size_t m, uint64_t seed,
                                            twodevp_matrix** out) {
  return guard([&] {
    check_out(out);
    *out = new twodevp_matrix{random_stable_matrix(static_cast<Index>(m), seed)};
  });
}

twodevp_status twodevp_matrix_load(const char* path, twodevp_matrix** out) {
  return guard([&] {
    check_out(out);
    *out = new twodevp_matrix{
        DtiMatrix::from_dense(load_matrix_market(path_arg(path, "matrix")))};
  });
}

twodevp_status twodevp_matrix_from_dense(size_t m, const double* data,
                                         twodevp_matrix** out) {
  return guard([&] {
    check_out(out);
    *out = new twodevp_matrix{DtiMatrix::from_dense(from_interleaved(m, data))};
  });
}

twodevp_status twodevp_matrix_save(const twodevp_matrix* p, const char* path) {
  return guard([&] {
    const auto& m = deref(p, "matrix").m;
    save_matrix_market(path_arg(path, "matrix"), m->materialize(), false);
  });
}

size_t twodevp_matrix_dim(const twodevp_matrix* p) {
  return p ? static_cast<size_t>(p->m->dim()) : 0;
}

void twodevp_matrix_free(twodevp_matrix* p) { delete p; }

// --- solvers -----------------------------------------------------------------

void twodevp_solve_options_init(twodevp_solve_options* o) {
  if (!o) return;
  *o = {};
  o->tol = 0.0;
  o->maxit = 15;
}

twodevp_status twodevp_solve(const twodevp_pair* p, double mu0, double lambda0,
                             const twodevp_solve_options* o,
                             twodevp_result** out) {
  return guard([&] {
    check_out(out);
    const auto& pair = deref(p, "pair").pair;
    twodevp_solve_options opt;
    twodevp_solve_options_init(&opt);
    if (o) opt = *o;
    require(std::isfinite(mu0) && std::isfinite(lambda0),
            ErrorCode::invalid_argument, "mu0 and lambda0 must be finite");
    require(opt.maxit >= 1, ErrorCode::invalid_argument, "maxit must be >= 1");
    SolverOptions so;
    so.tol = opt.tol > 0.0 ? opt.tol : static_cast<double>(pair.dim()) * kMachEps;
    so.maxit = opt.maxit;
    so.stagnation_check = opt.stagnation_check != 0;
    so.rng_seed = opt.rng_seed;
    const TwoDTriplet init{mu0, lambda0, initial_vector(pair, mu0, lambda0)};
    const SolveResult r = two_drqi(pair, init, so);
    Json doc = solve_json(pair, r, opt.timing != 0);
    doc["tol"] = so.tol;
    *out = make_result(std::move(doc), history_csv(r.history, opt.timing != 0),
                       r.status == Status::converged);
  });
}

void twodevp_rqminmax_options_init(twodevp_rqminmax_options* o) {
  if (!o) return;
  const RqMinmaxOptions d;
  *o = {d.reltol, d.backtol, d.abstol, d.max_outer, d.maxit, d.rng_seed};
}

twodevp_status twodevp_rqminmax(const twodevp_minmax* p,
                                const twodevp_rqminmax_options* o,
                                twodevp_result** out) {
  return guard([&] {
    check_out(out);
    const auto& mm = deref(p, "minmax");
    twodevp_rqminmax_options opt;
    twodevp_rqminmax_options_init(&opt);
    if (o) opt = *o;
    RqMinmaxOptions ro;
    ro.reltol = opt.reltol;
    ro.backtol = opt.backtol;
    ro.abstol = opt.abstol;
    ro.max_outer = opt.max_outer;
    ro.maxit = opt.maxit;
    ro.rng_seed = opt.rng_seed;
    const RqMinmaxResult r = rqminmax_solve(mm.a, mm.b, ro);
    std::string csv = csv_row({"outer", "a", "b", "mu0", "lambda0", "drqi_status",
                               "drqi_iterations", "mu_hat", "lambda_hat",
                               "accepted"});
    int k = 0;
    for (const auto& s : r.outer)
      csv += csv_row({std::to_string(k++), format_double(s.a), format_double(s.b),
                      format_double(s.mu0), format_double(s.lambda0),
                      to_string(s.drqi_status),
                      std::to_string(s.drqi_iterations), format_double(s.mu_hat),
                      format_double(s.lambda_hat), s.accepted ? "1" : "0"});
    *out = make_result(rqminmax_json(r), std::move(csv), r.converged);
  });
}

void twodevp_dti_options_init(twodevp_dti_options* o) {
  if (!o) return;
  const DtiOptions d;
  *o = {d.tol, d.reltol, d.maxit, d.validate ? 1 : 0,
        d.stagnation_check ? 1 : 0, 0};
}

twodevp_status twodevp_dti(const twodevp_matrix* p, const twodevp_dti_options* o,
                           twodevp_result** out) {
  return guard([&] {
    check_out(out);
    const auto& m = deref(p, "matrix").m;
    twodevp_dti_options opt;
    twodevp_dti_options_init(&opt);
    if (o) opt = *o;
    DtiOptions d;
    d.tol = opt.tol;
    d.reltol = opt.reltol;
    d.maxit = opt.maxit;
    d.validate = opt.validate != 0;
    d.stagnation_check = opt.stagnation_check != 0;
    const DtiResult r = dti_solve(m, d);
    Json doc = dti_json(r, opt.timing != 0);
    doc["tol"] = d.tol > 0.0 ? d.tol : static_cast<double>(m->dim()) * kMachEps;
    *out = make_result(std::move(doc), history_csv(r.history, opt.timing != 0),
                       r.status == Status::converged);
  });
}

twodevp_status twodevp_dti_validate(const twodevp_matrix* p, double lambda,
                                    double reltol, twodevp_result** out) {
  return guard([&] {
    check_out(out);
    const auto& m = deref(p, "matrix").m;
    const double an = build_dti_pair(m).ahat_norm;
    const Validation v = validate_dti(*m, an, lambda, reltol);
    *out = make_result(Json{{"lambda", lambda},
                            {"reltol", reltol},
                            {"validated", to_string(v)}},
                       "", v == Validation::passed);
  });
}

// --- oracles -----------------------------------------------------------------

twodevp_status twodevp_oracle_eigencurves(const twodevp_pair* p, double mu_lo,
                                          double mu_hi, int points,
                                          twodevp_result** out) {
  return guard([&] {
    check_out(out);
    const auto& pair = deref(p, "pair").pair;
    const auto samples = eigencurve_samples(pair, mu_lo, mu_hi, points);
    const auto triplets = eigencurve_scan(pair, mu_lo, mu_hi, points);
    *out = make_result(Json{{"points", points},
                            {"triplets", curve_triplets_json(triplets)}},
                       eigencurve_csv(samples), true);
  });
}

twodevp_status twodevp_oracle_evopt(const twodevp_minmax* p, double lo,
                                    double hi, double tol_width, double eps_r,
                                    twodevp_result** out) {
  return guard([&] {
    check_out(out);
    const auto& mm = deref(p, "minmax");
    const EvoptResult r =
        dichotomous_evopt(mm.a->dense(), mm.b->dense(), lo, hi, tol_width, eps_r);
    *out = make_result(Json{{"mu", r.mu},
                            {"value", r.value},
                            {"iterations", r.iterations}},
                       csv_row({"mu", "value", "iterations"}) +
                           csv_row({format_double(r.mu), format_double(r.value),
                                    std::to_string(r.iterations)}),
                       true);
  });
}

twodevp_status twodevp_oracle_dti_scan(const twodevp_matrix* p, double mu_lo,
                                       double mu_hi, int points,
                                       twodevp_result** out) {
  return guard([&] {
    check_out(out);
    const auto& m = deref(p, "matrix").m;
    const ScanResult r = sigma_min_scan_dti(m, mu_lo, mu_hi, points);
    *out = make_result(scan_json(r),
                       csv_row({"beta", "mu", "grid_min", "evaluations"}) +
                           csv_row({format_double(r.beta), format_double(r.mu),
                                    format_double(r.grid_min),
                                    std::to_string(r.evaluations)}),
                       true);
  });
}

// --- bench -------------------------------------------------------------------

void twodevp_bench_options_init(twodevp_bench_options* o) {
  if (!o) return;
  const BenchOptions d;
  *o = {d.grid,     d.instances,
        static_cast<size_t>(d.m), d.evopt_tol,
        static_cast<size_t>(d.n), d.reynolds,
        d.mu_lo,    d.mu_hi,
        d.points,   d.maxit,
        d.seed,     d.timing ? 1 : 0};
}

twodevp_status twodevp_bench(const char* name, const twodevp_bench_options* o,
                             twodevp_result** out) {
  return guard([&] {
    check_out(out);
    require(name != nullptr, ErrorCode::invalid_argument, "null bench name");
    twodevp_bench_options opt;
    twodevp_bench_options_init(&opt);
    if (o) opt = *o;
    BenchOptions b;
    b.grid = opt.grid;
    b.instances = opt.instances;
    b.m = static_cast<Index>(opt.m);
    b.evopt_tol = opt.evopt_tol;
    b.n = static_cast<Index>(opt.n);
    b.reynolds = opt.reynolds;
    b.mu_lo = opt.mu_lo;
    b.mu_hi = opt.mu_hi;
    b.points = opt.points;
    b.maxit = opt.maxit;
    b.seed = opt.seed;
    b.timing = opt.timing != 0;
    BenchReport r = run_bench(name, b);
    *out = make_result(Json{{"bench", name}, {"summary", r.summary}},
                       std::move(r.csv), true);
  });
}

// --- results -----------------------------------------------------------------

const char* twodevp_result_json(const twodevp_result* r) {
  return r ? r->json.c_str() : "";
}

const char* twodevp_result_csv(const twodevp_result* r) {
  return r ? r->csv.c_str() : "";
}

twodevp_status twodevp_result_number(const twodevp_result* r, const char* key,
                                     double* out) {
  return guard([&] {
    require(r != nullptr && key != nullptr && out != nullptr,
            ErrorCode::invalid_argument, "null argument");
    const auto it = r->doc.find(key);
    require(it != r->doc.end(), ErrorCode::invalid_argument,
            std::string("no field '") + key + "'");
    if (it->is_boolean())
      *out = it->get<bool>() ? 1.0 : 0.0;
    else if (it->is_number())
      *out = it->get<double>();
    else if (it->is_null())
      *out = std::nan("");
    else
      fail(ErrorCode::invalid_argument, std::string("field '") + key +
                                            "' is not a number");
  });
}

const char* twodevp_result_string(const twodevp_result* r, const char* key) {
  if (!r || !key) return nullptr;
  const auto it = r->doc.find(key);
  if (it == r->doc.end() || !it->is_string()) return nullptr;
  return it->get_ref<const std::string&>().c_str();
}

int twodevp_result_converged(const twodevp_result* r) {
  return r && r->converged ? 1 : 0;
}

void twodevp_result_free(twodevp_result* r) { delete r; }

}  // extern "C"
