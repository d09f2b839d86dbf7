#include "weyldens/weyldens.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <thread>
#include <vector>

#include "weyldens/density.hpp"
#include "weyldens/error.hpp"
#include "weyldens/oracle.hpp"
#include "weyldens/resonance.hpp"
#include "weyldens/sweep.hpp"
#include "weyldens/verify.hpp"

using namespace weyldens;

struct wd_context {
  BoundaryParam bp;
  Constants constants;
  resonance::Tolerances tol;
  double drift_const = verify::Settings{}.drift_const;
};

struct wd_report {
  verify::Report report;
};

namespace {

thread_local std::string g_last_error;

wd_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return WD_INVALID_ARGUMENT;
    case ErrorCode::DomainError: return WD_DOMAIN_ERROR;
    case ErrorCode::NonConvergence: return WD_NON_CONVERGENCE;
    case ErrorCode::InvalidDecayHint: return WD_INVALID_DECAY_HINT;
    case ErrorCode::RangeError: return WD_RANGE_ERROR;
    case ErrorCode::PoleProximity: return WD_POLE_PROXIMITY;
    case ErrorCode::RegionError: return WD_REGION_ERROR;
    case ErrorCode::NoBracket: return WD_NO_BRACKET;
    case ErrorCode::ModelMismatch: return WD_MODEL_MISMATCH;
    case ErrorCode::CrossCheckMismatch: return WD_CROSS_CHECK_MISMATCH;
  }
  return WD_INTERNAL_ERROR;
}

wd_status failure(wd_status s, const char* msg) {
  g_last_error = msg;
  return s;
}

// Runs body and converts anything thrown into a status plus message.
template <class F>
wd_status guard(F&& body) noexcept {
  try {
    body();
    g_last_error.clear();
    return WD_OK;
  } catch (const Error& e) {
    return failure(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return failure(WD_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return failure(WD_INTERNAL_ERROR, e.what());
  } catch (...) {
    return failure(WD_INTERNAL_ERROR, "unknown exception");
  }
}

#define WD_REQUIRE(cond, what) \
  if (!(cond)) return failure(WD_INVALID_ARGUMENT, what)

wd_scaled to_c(ScaledReal x) { return {x.sign(), x.is_zero() ? 0.0 : x.log_mag()}; }

wd_region to_c(Region r) {
  switch (r) {
    case Region::DeepLeft: return WD_REGION_DEEP_LEFT;
    case Region::Gap: return WD_REGION_GAP;
    case Region::Intermediate: return WD_REGION_INTERMEDIATE;
    case Region::NearZero: return WD_REGION_NEAR_ZERO;
  }
  return WD_REGION_GAP;
}

wd_status create(BoundaryParam (*make)(double), double arg, wd_context** out) {
  WD_REQUIRE(out, "null output pointer");
  *out = nullptr;
  return guard([&] { *out = new wd_context{make(arg), {}, {}}; });
}

unsigned thread_cap() {
  const char* env = std::getenv("WEYL_DENS_THREADS");
  if (!env) return 0;
  unsigned value = 0;
  const char* end = env + std::strlen(env);
  auto [ptr, ec] = std::from_chars(env, end, value);
  if (ec != std::errc{} || ptr != end) return 0;
  return value;
}

verify::Settings settings_of(const wd_context* ctx) {
  verify::Settings s;
  s.constants = ctx->constants;
  s.tol = ctx->tol;
  s.drift_const = ctx->drift_const;
  return s;
}

}  // namespace

extern "C" {

const char* wd_version(void) { return "1.0.0"; }

unsigned wd_thread_cap(void) { return thread_cap(); }

const char* wd_status_name(wd_status status) {
  switch (status) {
    case WD_OK: return "ok";
    case WD_INVALID_ARGUMENT: return "invalid_argument";
    case WD_DOMAIN_ERROR: return "domain_error";
    case WD_NON_CONVERGENCE: return "non_convergence";
    case WD_INVALID_DECAY_HINT: return "invalid_decay_hint";
    case WD_RANGE_ERROR: return "range_error";
    case WD_POLE_PROXIMITY: return "pole_proximity";
    case WD_REGION_ERROR: return "region_error";
    case WD_NO_BRACKET: return "no_bracket";
    case WD_MODEL_MISMATCH: return "model_mismatch";
    case WD_CROSS_CHECK_MISMATCH: return "cross_check_mismatch";
    case WD_INTERNAL_ERROR: return "internal_error";
  }
  return "unknown";
}

const char* wd_region_name(wd_region region) {
  switch (region) {
    case WD_REGION_DEEP_LEFT: return "deep_left";
    case WD_REGION_GAP: return "gap";
    case WD_REGION_INTERMEDIATE: return "intermediate";
    case WD_REGION_NEAR_ZERO: return "near_zero";
  }
  return "unknown";
}

const char* wd_last_error(void) { return g_last_error.c_str(); }

wd_status wd_context_create_alpha(double alpha, wd_context** out) {
  return create(&BoundaryParam::from_alpha, alpha, out);
}

wd_status wd_context_create_cot(double cot_alpha, wd_context** out) {
  return create(&BoundaryParam::from_cot, cot_alpha, out);
}

void wd_context_destroy(wd_context* ctx) { delete ctx; }

wd_status wd_boundary(const wd_context* ctx, double* alpha, double* cot_alpha) {
  WD_REQUIRE(ctx, "null context");
  if (alpha) *alpha = ctx->bp.alpha();
  if (cot_alpha) *cot_alpha = ctx->bp.cot_alpha();
  return WD_OK;
}

void wd_default_constants(wd_constants* out) {
  if (!out) return;
  const Constants c;
  *out = {c.c1, c.c2, c.c3, c.big_o_const};
}

void wd_default_tolerances(wd_tolerances* out) {
  if (!out) return;
  const resonance::Tolerances t;
  *out = {t.root_rel, t.kernel_rel, t.mass_rel, t.cross_check_rel};
}

double wd_default_drift_const(void) { return verify::Settings{}.drift_const; }

wd_status wd_set_constants(wd_context* ctx, const wd_constants* c) {
  WD_REQUIRE(ctx && c, "null argument");
  WD_REQUIRE(c->c1 > 0 && c->c2 > 0 && c->c3 > 0 && c->big_o_const > 0, "constants must all be positive");
  ctx->constants = {c->c1, c->c2, c->c3, c->big_o_const};
  return WD_OK;
}

wd_status wd_get_constants(const wd_context* ctx, wd_constants* out) {
  WD_REQUIRE(ctx && out, "null argument");
  const auto& c = ctx->constants;
  *out = {c.c1, c.c2, c.c3, c.big_o_const};
  return WD_OK;
}

wd_status wd_set_tolerances(wd_context* ctx, const wd_tolerances* t) {
  WD_REQUIRE(ctx && t, "null argument");
  WD_REQUIRE(t->root_rel > 0 && t->root_rel < 1e-2, "root_rel must lie in (0, 1e-2)");
  WD_REQUIRE(t->kernel_rel > 1e-15 && t->kernel_rel < 1e-2, "kernel_rel must lie in (1e-15, 1e-2)");
  WD_REQUIRE(t->mass_rel > 1e-15 && t->mass_rel < 1e-2, "mass_rel must lie in (1e-15, 1e-2)");
  WD_REQUIRE(t->cross_check_rel > 0 && t->cross_check_rel < 1, "cross_check_rel must lie in (0, 1)");
  ctx->tol = {t->root_rel, t->kernel_rel, t->mass_rel, t->cross_check_rel};
  return WD_OK;
}

wd_status wd_get_tolerances(const wd_context* ctx, wd_tolerances* out) {
  WD_REQUIRE(ctx && out, "null argument");
  const auto& t = ctx->tol;
  *out = {t.root_rel, t.kernel_rel, t.mass_rel, t.cross_check_rel};
  return WD_OK;
}

wd_status wd_set_drift_const(wd_context* ctx, double c) {
  WD_REQUIRE(ctx, "null context");
  WD_REQUIRE(c > 0, "drift constant must be positive");
  ctx->drift_const = c;
  return WD_OK;
}

wd_status wd_rho_prime(const wd_context* ctx, double lambda, double eps, wd_scaled* out, wd_region* region) {
  WD_REQUIRE(ctx && out, "null argument");
  return guard([&] {
    const auto p = density::rho_prime(ctx->bp, lambda, eps, ctx->constants.c2, ctx->tol.kernel_rel);
    *out = to_c(p.rho_prime);
    if (region) *region = to_c(p.region);
  });
}

wd_status wd_region_of(const wd_context* ctx, double lambda, double eps, wd_region* out) {
  WD_REQUIRE(ctx && out, "null argument");
  return guard([&] {
    SpectralPoint::make(lambda, eps);
    *out = to_c(density::thm2_region(ctx->bp, lambda, eps, ctx->constants.c2));
  });
}

wd_status wd_t_function(const wd_context* ctx, double lambda, double eps, double* out) {
  WD_REQUIRE(ctx && out, "null argument");
  return guard([&] { *out = density::t_function(ctx->bp, lambda, eps, ctx->tol.kernel_rel); });
}

wd_status wd_asymptote(const wd_context* ctx, double lambda, double eps, wd_scaled* out) {
  WD_REQUIRE(ctx && out, "null argument");
  return guard([&] { *out = to_c(density::asymptote_thm1(ctx->bp, lambda, eps)); });
}

wd_status wd_bound_check_at(const wd_context* ctx, double lambda, double eps, wd_bound_check* out) {
  WD_REQUIRE(ctx && out, "null argument");
  return guard([&] {
    const auto bc = density::thm2_bound_check(ctx->bp, lambda, eps, ctx->constants.c2, ctx->constants.big_o_const,
                                              ctx->tol.kernel_rel);
    *out = {bc.pass ? 1 : 0, bc.margin, to_c(bc.region), to_c(bc.rho_prime), to_c(bc.envelope)};
  });
}

wd_status wd_baseline_positive(const wd_context* ctx, double lambda, double* out) {
  WD_REQUIRE(ctx && out, "null argument");
  return guard([&] { *out = density::baseline_positive(ctx->bp, lambda); });
}

wd_status wd_baseline_point_mass(const wd_context* ctx, double* location, double* mass) {
  WD_REQUIRE(ctx, "null context");
  const auto pm = density::baseline_negative_mass(ctx->bp);
  if (location) *location = pm.location;
  if (mass) *mass = pm.mass;
  return WD_OK;
}

wd_status wd_oracle_m(const wd_context* ctx, double lambda, double eps, double* re, double* im) {
  WD_REQUIRE(ctx && re && im, "null argument");
  return guard([&] {
    const auto m = oracle::m_weyl(ctx->bp, lambda, eps);
    *re = m.real();
    *im = m.imag();
  });
}

wd_status wd_oracle_rho_prime(const wd_context* ctx, double lambda, double eps, double* out) {
  WD_REQUIRE(ctx && out, "null argument");
  return guard([&] { *out = oracle::rho_prime_oracle(ctx->bp, lambda, eps); });
}

wd_status wd_locate_zero(const wd_context* ctx, double eps, double* lambda1) {
  WD_REQUIRE(ctx && lambda1, "null argument");
  return guard([&] { *lambda1 = resonance::locate_zero(ctx->bp, eps, ctx->tol, ctx->constants.c3); });
}

wd_status wd_peak_width(const wd_context* ctx, double eps, double lambda1, double* width) {
  WD_REQUIRE(ctx && width, "null argument");
  return guard([&] { *width = resonance::peak_width(ctx->bp, eps, lambda1, ctx->tol); });
}

wd_status wd_peak_mass_compute(const wd_context* ctx, double eps, double d, wd_peak_mass* out) {
  WD_REQUIRE(ctx && out, "null argument");
  return guard([&] {
    const auto pm = resonance::peak_mass(ctx->bp, eps, d > 0 ? d : eps * eps, ctx->tol, ctx->constants.c3);
    *out = {pm.mass, pm.mass_unsubstituted, pm.lambda1, pm.width, pm.d, pm.in_admissible_window ? 1 : 0,
            pm.achieved_rel_tol};
  });
}

wd_status wd_analyze(const wd_context* ctx, double eps, double d, wd_resonance_report* out) {
  WD_REQUIRE(ctx && out, "null argument");
  return guard([&] {
    const auto r = resonance::analyze(ctx->bp, eps, d, ctx->tol, ctx->constants.c3);
    *out = {r.eps, r.lambda1, r.width, r.mass, r.d_used, r.drift_prediction, r.drift_residual};
  });
}

wd_status wd_drift(const wd_context* ctx, const double* eps, size_t n, wd_drift_fit* out, double* lambda1) {
  WD_REQUIRE(ctx && eps && out, "null argument");
  return guard([&] {
    const auto fit = resonance::drift_fit(ctx->bp, {eps, n}, ctx->tol, ctx->constants.c3);
    *out = {fit.slope, fit.curvature, fit.quadratic_residual_bound};
    if (lambda1) std::copy(fit.lambda1.begin(), fit.lambda1.end(), lambda1);
  });
}

wd_status wd_weak_convergence(const wd_context* ctx, double eps, wd_test_function g, void* user, double d,
                              wd_weak_pairing* out) {
  WD_REQUIRE(ctx && g && out, "null argument");
  return guard([&] {
    const auto w = resonance::weak_convergence_test(
        ctx->bp, eps, [g, user](double lambda) { return g(lambda, user); }, d, ctx->tol, ctx->constants.c3);
    *out = {w.total, w.peak_part, w.off_peak_part, w.d, w.achieved_rel_tol};
  });
}

wd_status wd_sweep(const wd_context* ctx, double eps, double lmin, double lmax, size_t n, unsigned threads,
                   wd_sweep_row* rows) {
  WD_REQUIRE(ctx && rows, "null argument");
  return guard([&] {
    unsigned count = threads;
    if (count == 0) {
      count = std::max(1u, std::thread::hardware_concurrency());
      if (const unsigned cap = thread_cap(); cap > 0) count = std::min(count, cap);
    }
    const auto result = sweep::run(ctx->bp, eps, {lmin, lmax, n}, ctx->constants.c2, ctx->tol.kernel_rel, count);
    for (size_t i = 0; i < n; ++i) {
      const auto& r = result[i];
      rows[i] = {r.lambda, to_c(r.rho_prime), to_c(r.region), r.error ? to_status(*r.error) : WD_OK};
    }
  });
}

size_t wd_suite_count(void) { return verify::suite_names().size(); }

const char* wd_suite_name(size_t i) {
  const auto names = verify::suite_names();
  return i < names.size() ? names[i].data() : nullptr;
}

wd_status wd_verify(const wd_context* ctx, const char* suite, wd_report** out) {
  WD_REQUIRE(ctx && suite && out, "null argument");
  *out = nullptr;
  return guard([&] { *out = new wd_report{verify::run(suite, settings_of(ctx))}; });
}

void wd_report_destroy(wd_report* report) { delete report; }

const char* wd_report_suite(const wd_report* report) { return report ? report->report.suite.c_str() : ""; }

int wd_report_pass(const wd_report* report) { return report && report->report.pass() ? 1 : 0; }

double wd_report_seconds(const wd_report* report) { return report ? report->report.seconds : 0.0; }

size_t wd_report_check_count(const wd_report* report) { return report ? report->report.checks.size() : 0; }

wd_status wd_report_check(const wd_report* report, size_t i, wd_check* out) {
  WD_REQUIRE(report && out, "null argument");
  WD_REQUIRE(i < report->report.checks.size(), "check index out of range");
  const auto& c = report->report.checks[i];
  *out = {c.name.c_str(), c.criterion, c.pass ? 1 : 0, c.value, c.threshold,
          c.relation == verify::Relation::LessEqual ? WD_LESS_EQUAL : WD_GREATER_EQUAL, c.detail.c_str()};
  return WD_OK;
}

}  // extern "C"
