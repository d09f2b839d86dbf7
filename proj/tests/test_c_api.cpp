#include <cmath>
#include <cstdlib>
#include <cstring>
#include <numbers>
#include <string>
#include <vector>

#include "doctest.h"
#include "weyldens/weyldens.h"

namespace {

struct Ctx {
  wd_context* p = nullptr;
  explicit Ctx(double alpha) { REQUIRE(wd_context_create_alpha(alpha, &p) == WD_OK); }
  ~Ctx() { wd_context_destroy(p); }
};

double identity(double lambda, void* calls) {
  ++*static_cast<int*>(calls);
  return lambda;
}

}  // namespace

TEST_CASE("context creation and configuration") {
  wd_context* ctx = nullptr;
  CHECK(wd_context_create_alpha(2.0, &ctx) == WD_INVALID_ARGUMENT);
  CHECK(ctx == nullptr);
  CHECK(std::strlen(wd_last_error()) > 0);
  CHECK(wd_context_create_cot(1.0, &ctx) == WD_OK);
  double alpha = 0.0;
  double cot = 0.0;
  CHECK(wd_boundary(ctx, &alpha, &cot) == WD_OK);
  CHECK(alpha == doctest::Approx(std::numbers::pi / 4));
  CHECK(cot == doctest::Approx(1.0));

  wd_constants c{};
  wd_default_constants(&c);
  CHECK(c.c2 == 1.0);
  CHECK(c.big_o_const == 10.0);
  c.c2 = -1.0;
  CHECK(wd_set_constants(ctx, &c) == WD_INVALID_ARGUMENT);
  c.c2 = 2.0;
  CHECK(wd_set_constants(ctx, &c) == WD_OK);
  wd_constants back{};
  CHECK(wd_get_constants(ctx, &back) == WD_OK);
  CHECK(back.c2 == 2.0);

  wd_tolerances t{};
  wd_default_tolerances(&t);
  t.kernel_rel = 1e-20;
  CHECK(wd_set_tolerances(ctx, &t) == WD_INVALID_ARGUMENT);
  CHECK(wd_set_drift_const(ctx, 0.0) == WD_INVALID_ARGUMENT);
  wd_context_destroy(ctx);
  CHECK(wd_context_create_alpha(1.0, nullptr) == WD_INVALID_ARGUMENT);
}

TEST_CASE("status and region names") {
  CHECK(std::string(wd_status_name(WD_NO_BRACKET)) == "no_bracket");
  CHECK(std::string(wd_status_name(WD_OK)) == "ok");
  CHECK(std::string(wd_region_name(WD_REGION_NEAR_ZERO)) == "near_zero");
  CHECK(std::string(wd_version()).size() > 0);
}

TEST_CASE("density and oracle through the C interface") {
  Ctx ctx(std::numbers::pi / 4);
  wd_scaled rho{};
  wd_region region{};
  REQUIRE(wd_rho_prime(ctx.p, -2.0, 0.5, &rho, &region) == WD_OK);
  double ref = 0.0;
  REQUIRE(wd_oracle_rho_prime(ctx.p, -2.0, 0.5, &ref) == WD_OK);
  CHECK(std::exp(rho.log_mag) == doctest::Approx(ref).epsilon(1e-8));
  CHECK(region == WD_REGION_GAP);

  CHECK(wd_rho_prime(ctx.p, 1.0, 0.5, &rho, nullptr) == WD_DOMAIN_ERROR);
  CHECK(wd_oracle_rho_prime(ctx.p, -25.0, 1.0, &ref) == WD_RANGE_ERROR);
  CHECK(wd_rho_prime(nullptr, -1.0, 0.5, &rho, nullptr) == WD_INVALID_ARGUMENT);

  double re = 0.0;
  double im = 0.0;
  REQUIRE(wd_oracle_m(ctx.p, -2.0, 0.5, &re, &im) == WD_OK);
  CHECK(im < 0.0);

  wd_bound_check bc{};
  CHECK(wd_bound_check_at(ctx.p, -3.0, 0.05, &bc) == WD_OK);
  CHECK(bc.pass == 1);
  CHECK(wd_bound_check_at(ctx.p, -1.0, 0.05, &bc) == WD_REGION_ERROR);

  double base = 0.0;
  CHECK(wd_baseline_positive(ctx.p, 1.0, &base) == WD_OK);
  CHECK(base == doctest::Approx(1.0 / std::numbers::pi));
  double loc = 0.0;
  double mass = 0.0;
  CHECK(wd_baseline_point_mass(ctx.p, &loc, &mass) == WD_OK);
  CHECK(mass == doctest::Approx(4.0));

  wd_scaled asym{};
  CHECK(wd_asymptote(ctx.p, -4.0, 1.0, &asym) == WD_OK);
  CHECK(asym.log_mag == doctest::Approx(-32.0 / 3.0 - std::log(std::numbers::pi)));
  double t = 0.0;
  CHECK(wd_t_function(ctx.p, -1.0, 1e-4, &t) == WD_OK);
  CHECK(std::fabs(t) < 1e-4);
  CHECK(wd_region_of(ctx.p, -3.0, 0.05, &region) == WD_OK);
  CHECK(region == WD_REGION_DEEP_LEFT);
}

TEST_CASE("resonance through the C interface") {
  Ctx ctx(std::numbers::pi / 4);
  double l1 = 0.0;
  REQUIRE(wd_locate_zero(ctx.p, 0.1, &l1) == WD_OK);
  CHECK(l1 == doctest::Approx(-1.05).epsilon(0.01));
  CHECK(wd_locate_zero(ctx.p, 10.0, &l1) == WD_NO_BRACKET);
  CHECK(std::string(wd_last_error()).size() > 0);

  wd_resonance_report r{};
  REQUIRE(wd_analyze(ctx.p, 0.1, 0.0, &r) == WD_OK);
  CHECK(r.mass == doctest::Approx(4.0).epsilon(0.125));
  CHECK(r.d_used == doctest::Approx(0.01));

  wd_peak_mass pm{};
  REQUIRE(wd_peak_mass_compute(ctx.p, 0.1, 0.0, &pm) == WD_OK);
  CHECK(pm.mass == doctest::Approx(r.mass));
  double w = 0.0;
  CHECK(wd_peak_width(ctx.p, 0.1, pm.lambda1, &w) == WD_OK);
  CHECK(w == doctest::Approx(pm.width));

  const double grid[] = {0.02, 0.05, 0.08, 0.11, 0.14};
  wd_drift_fit fit{};
  double l1s[5] = {};
  REQUIRE(wd_drift(ctx.p, grid, 5, &fit, l1s) == WD_OK);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(0.05));
  CHECK(l1s[1] < l1s[0]);

  int calls = 0;
  wd_weak_pairing wp{};
  REQUIRE(wd_weak_convergence(ctx.p, 0.2, identity, &calls, 0.0, &wp) == WD_OK);
  CHECK(calls > 0);
  CHECK(wp.total == doctest::Approx(-4.0).epsilon(0.1));
}

TEST_CASE("sweep through the C interface") {
  Ctx ctx(std::numbers::pi / 4);
  std::vector<wd_sweep_row> rows(500);
  REQUIRE(wd_sweep(ctx.p, 0.1, -3.0, -0.01, rows.size(), 0, rows.data()) == WD_OK);
  CHECK(rows.front().lambda == -3.0);
  CHECK(rows.back().lambda == -0.01);
  for (const auto& r : rows) {
    CHECK(r.status == WD_OK);
    CHECK(r.rho_prime.sign == 1);
  }
  CHECK(wd_sweep(ctx.p, 0.1, -1.0, 1.0, 3, 1, rows.data()) == WD_INVALID_ARGUMENT);
}

TEST_CASE("thread cap from the environment") {
  ::setenv("WEYL_DENS_THREADS", "3", 1);
  CHECK(wd_thread_cap() == 3u);
  for (const char* bad : {"", "x", "2x", "-1"}) {
    ::setenv("WEYL_DENS_THREADS", bad, 1);
    CHECK(wd_thread_cap() == 0u);
  }
  ::unsetenv("WEYL_DENS_THREADS");
  CHECK(wd_thread_cap() == 0u);
}

TEST_CASE("verification reports") {
  Ctx ctx(std::numbers::pi / 4);
  CHECK(wd_suite_count() == 7);
  CHECK(std::string(wd_suite_name(0)) == "oracle");
  CHECK(wd_suite_name(99) == nullptr);
  wd_report* rep = nullptr;
  CHECK(wd_verify(ctx.p, "bogus", &rep) == WD_INVALID_ARGUMENT);
  CHECK(rep == nullptr);
  REQUIRE(wd_verify(ctx.p, "baseline", &rep) == WD_OK);
  CHECK(std::string(wd_report_suite(rep)) == "baseline");
  CHECK(wd_report_pass(rep) == 1);
  REQUIRE(wd_report_check_count(rep) > 0);
  wd_check c{};
  CHECK(wd_report_check(rep, 0, &c) == WD_OK);
  CHECK(c.criterion == 7);
  CHECK(c.pass == 1);
  CHECK(std::strlen(c.name) > 0);
  CHECK(wd_report_check(rep, 1000, &c) == WD_INVALID_ARGUMENT);
  wd_report_destroy(rep);
}
