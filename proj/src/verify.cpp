#include "weyldens/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "weyldens/error.hpp"
#include "weyldens/kernel.hpp"
#include "weyldens/oracle.hpp"
#include "weyldens/quad.hpp"
#include "weyldens/sweep.hpp"

namespace weyldens::verify {
namespace {

using std::numbers::pi;

constexpr std::array<std::string_view, 7> kSuites = {"oracle", "thm1", "thm2", "thm3", "corollary", "baseline", "quad"};

std::string fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, x);
  return buf;
}

std::string sci(double x) { return fmt("%.6e", x); }

Check make_check(std::string name, int criterion, double value, double threshold,
                 Relation rel = Relation::LessEqual, std::string detail = {}) {
  Check c;
  c.name = std::move(name);
  c.criterion = criterion;
  c.value = value;
  c.threshold = threshold;
  c.relation = rel;
  c.detail = std::move(detail);
  // NaN compares false either way, so a broken computation never passes.
  c.pass = rel == Relation::LessEqual ? value <= threshold : value >= threshold;
  return c;
}

// Runs body; a thrown library error turns into a failing check of that name.
void guarded(Report& report, const std::string& name, int criterion, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    Check c;
    c.name = name;
    c.criterion = criterion;
    c.value = std::numeric_limits<double>::quiet_NaN();
    c.threshold = std::numeric_limits<double>::quiet_NaN();
    c.detail = std::string("error: ") + e.what();
    report.checks.push_back(std::move(c));
  }
}

// Midpoints of n equal cells of (lo, hi); never touches an open endpoint.
std::vector<double> cell_midpoints(double lo, double hi, std::size_t n) {
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  return xs;
}

// Number of steps along which |err| fails to decrease strictly.
double non_decreasing_steps(const std::vector<double>& errs) {
  int bad = 0;
  for (std::size_t i = 1; i < errs.size(); ++i)
    if (!(errs[i] < errs[i - 1])) ++bad;
  return bad;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + sci(xs[i]);
  return out;
}

void oracle_suite(Report& r, const Settings& s) {
  guarded(r, "oracle_max_rel_deviation", 1, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    double max_rel = 0.0;
    std::string worst;
    int compared = 0;
    int out_of_range = 0;
    int near_pole = 0;
    for (double alpha : {pi / 3, pi / 4, 1.0}) {
      const auto bp = BoundaryParam::from_alpha(alpha);
      for (double eps : {0.1, 0.5, 1.0}) {
        for (int i = 0; i < 50; ++i) {
          const double lambda = -5.0 + (5.0 - 0.05) * i / 49.0;
          if (SpectralPoint::make(lambda, eps).a > oracle::kSeriesRange) {
            ++out_of_range;
            continue;
          }
          double ref = 0.0;
          try {
            ref = oracle::rho_prime_oracle(bp, lambda, eps);
          } catch (const Error& e) {
            if (e.code() != ErrorCode::PoleProximity) throw;
            ++near_pole;
            continue;
          }
          const double got = density::rho_prime(bp, lambda, eps, s.constants.c2, s.tol.kernel_rel).rho_prime.to_double();
          const double rel = std::fabs(got - ref) / std::fabs(ref);
          ++compared;
          if (!(rel <= max_rel)) {
            max_rel = rel;
            worst = "alpha=" + fmt("%.6g", alpha) + " eps=" + fmt("%g", eps) + " lambda=" + fmt("%.6g", lambda);
          }
        }
      }
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.checks.push_back(make_check("oracle_max_rel_deviation", 1, max_rel, 1e-8, Relation::LessEqual,
                                  "worst at " + worst + "; " + std::to_string(compared) + " points compared, " +
                                      std::to_string(out_of_range) + " outside the series range, " +
                                      std::to_string(near_pole) + " skipped near a pole"));
    r.checks.push_back(make_check("oracle_points_compared", 1, compared, 300, Relation::GreaterEqual));
    r.checks.push_back(make_check("oracle_runtime_seconds", 1, seconds, 60.0, Relation::LessEqual, "single thread"));
  });
}

void thm1_suite(Report& r, const Settings& s) {
  guarded(r, "thm1_ratio_error_at_-25", 3, [&] {
    const auto bp = BoundaryParam::from_alpha(pi / 4);
    std::vector<double> ratios;
    std::vector<double> errs;
    for (double lambda : {-9.0, -16.0, -25.0}) {
      const ScaledReal rho = density::rho_prime(bp, lambda, 1.0, s.constants.c2, s.tol.kernel_rel).rho_prime;
      const double q = ratio(rho, density::asymptote_thm1(bp, lambda, 1.0));
      ratios.push_back(q);
      errs.push_back(std::fabs(q - 1.0));
    }
    const std::string detail = "rho'/asymptote at lambda = -9, -16, -25: " + join(ratios);
    r.checks.push_back(make_check("thm1_ratio_error_at_-25", 3, errs.back(), 0.05, Relation::LessEqual, detail));
    r.checks.push_back(make_check("thm1_monotone_approach", 3, non_decreasing_steps(errs), 0.0,
                                  Relation::LessEqual, "|ratio - 1|: " + join(errs)));
  });
}

void thm2_suite(Report& r, const Settings& s) {
  const auto bp = BoundaryParam::from_alpha(pi / 4);

  guarded(r, "sweep_positivity_failures", 2, [&] {
    const double eps = 0.1;
    const auto rows = sweep::run(bp, eps, {-5.0, -0.01, 10000}, s.constants.c2, s.tol.kernel_rel, 1);
    int bad = 0;
    for (const auto& row : rows)
      if (row.error || row.rho_prime.sign() <= 0) ++bad;
    r.checks.push_back(make_check("sweep_positivity_failures", 2, bad, 0.0, Relation::LessEqual,
                                  std::to_string(rows.size()) + " points, eps = 0.1"));

    const double lambda1 = resonance::locate_zero(bp, eps, s.tol, s.constants.c3);
    const double d = eps * eps;
    double max_jump = 0.0;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
      const auto& p = rows[i];
      const auto& q = rows[i + 1];
      if (p.error || q.error) continue;
      const bool in_window = std::fabs(p.lambda - lambda1) <= d || std::fabs(q.lambda - lambda1) <= d;
      if (in_window) continue;
      max_jump = std::max(max_jump, std::fabs(p.rho_prime.log_mag() - q.rho_prime.log_mag()));
    }
    r.checks.push_back(make_check("sweep_max_adjacent_ratio", 2, std::exp(max_jump), 10.0, Relation::LessEqual,
                                  "peak window excluded: |lambda - " + fmt("%.10g", lambda1) + "| <= " + sci(d)));
  });

  const double eps = 0.05;
  const double ctg2 = bp.cot_alpha() * bp.cot_alpha();
  const double near_zero = -s.constants.c2 * std::pow(eps, 2.0 / 3.0);
  struct Band {
    const char* name;
    Region region;
    double lo, hi;
  };
  const Band bands[] = {
      {"thm2_min_margin_deep_left", Region::DeepLeft, -5.0 * ctg2 - 5.0, -2.0 * ctg2},
      {"thm2_min_margin_intermediate", Region::Intermediate, -0.5 * ctg2, near_zero},
      {"thm2_min_margin_near_zero", Region::NearZero, near_zero, 0.0},
  };
  for (const auto& band : bands) {
    guarded(r, band.name, 8, [&] {
      double min_margin = std::numeric_limits<double>::infinity();
      int misclassified = 0;
      for (double lambda : cell_midpoints(band.lo, band.hi, 100)) {
        const auto bc = density::thm2_bound_check(bp, lambda, eps, s.constants.c2, s.constants.big_o_const,
                                                  s.tol.kernel_rel);
        if (bc.region != band.region) ++misclassified;
        min_margin = std::min(min_margin, bc.margin);
      }
      if (misclassified) min_margin = -std::numeric_limits<double>::infinity();
      r.checks.push_back(make_check(band.name, 8, min_margin, 0.0, Relation::GreaterEqual,
                                    "100 points in (" + fmt("%.6g", band.lo) + ", " + fmt("%.6g", band.hi) +
                                        "), eps = 0.05, margin = ln(C envelope / rho')"));
    });
  }
}

void thm3_suite(Report& r, const Settings& s) {
  const std::array<double, 5> grid = {0.02, 0.05, 0.08, 0.11, 0.14};
  for (auto [alpha, label] : {std::pair{pi / 4, "pi/4"}, std::pair{pi / 3, "pi/3"}}) {
    const std::string suffix = std::string("_alpha_") + label;
    guarded(r, "drift_slope" + suffix, 4, [&] {
      const auto bp = BoundaryParam::from_alpha(alpha);
      const auto fit = resonance::drift_fit(bp, grid, s.tol, s.constants.c3);
      const double expected = -bp.tan_alpha() / 2.0;
      r.checks.push_back(make_check("drift_slope" + suffix, 4, std::fabs(fit.slope / expected - 1.0), 0.05,
                                    Relation::LessEqual, "slope " + sci(fit.slope) + " vs " + sci(expected)));
      // lambda1(eps; ctg) = ctg^2 F(eps / ctg^3) exactly, so the eps^2 coefficient carries a factor ctg^-4.
      const double ctg4 = std::pow(bp.cot_alpha(), 4);
      r.checks.push_back(make_check("drift_residual_over_eps2" + suffix, 4, fit.quadratic_residual_bound * ctg4,
                                    s.drift_const, Relation::LessEqual,
                                    "ctg^4 max |lambda1 - lambda0 + eps tan(alpha)/2| / eps^2 over eps in {0.02..0.14}; "
                                    "unscaled " + sci(fit.quadratic_residual_bound)));
    });
  }

  guarded(r, "peak_mass_error", 5, [&] {
    const auto bp = BoundaryParam::from_alpha(pi / 4);
    const double eps = 0.1;
    const auto pm = resonance::peak_mass(bp, eps, eps * eps, s.tol, s.constants.c3);
    const auto pm3 = resonance::peak_mass_at(bp, eps, eps * eps / 3.0, pm.lambda1, pm.width, s.tol);
    const double expected = 2.0 * bp.cot_alpha() / (bp.sin_alpha() * bp.sin_alpha());
    const std::string window = pm.in_admissible_window ? "inside" : "outside";
    r.checks.push_back(make_check("peak_mass_error", 5, std::fabs(pm.mass - expected), 0.5, Relation::LessEqual,
                                  "mass " + fmt("%.10g", pm.mass) + " (plain pass " + fmt("%.10g", pm.mass_unsubstituted) +
                                      ") vs " + fmt("%g", expected) + ", d = eps^2"));
    r.checks.push_back(make_check("peak_mass_rel_change_d_over_3", 5, std::fabs(pm3.mass - pm.mass) / pm.mass, 1e-3,
                                  Relation::LessEqual,
                                  "mass(d/3) = " + fmt("%.10g", pm3.mass) + "; d = eps^2 is " + window +
                                      " the window [exp(-ctg^3/(3 eps)), eps^2]"));
  });
}

void corollary_suite(Report& r, const Settings& s) {
  const auto bp = BoundaryParam::from_alpha(pi / 4);
  const double lambda0 = bp.lambda0();
  const double mass0 = 2.0 * bp.cot_alpha() / (bp.sin_alpha() * bp.sin_alpha());
  const double sigma = 0.3;
  struct Probe {
    const char* name;
    resonance::TestFunction g;
  };
  const Probe probes[] = {
      {"weak_linear_monotone", [](double l) { return l; }},
      {"weak_gaussian_monotone",
       [=](double l) { return std::exp(-(l - lambda0) * (l - lambda0) / (2.0 * sigma * sigma)); }},
  };
  for (const auto& probe : probes) {
    guarded(r, probe.name, 6, [&] {
      std::vector<double> errs;
      for (double eps : {0.2, 0.1, 0.05}) {
        const auto w = resonance::weak_convergence_test(bp, eps, probe.g, 0.0, s.tol, s.constants.c3);
        errs.push_back(std::fabs(w.total - mass0 * probe.g(lambda0)));
      }
      r.checks.push_back(make_check(probe.name, 6, non_decreasing_steps(errs), 0.0, Relation::LessEqual,
                                    "|pairing - 4 g(-1)| at eps = 0.2, 0.1, 0.05: " + join(errs)));
    });
  }
}

void baseline_suite(Report& r, const Settings&) {
  const auto bp = BoundaryParam::from_alpha(pi / 4);
  for (double lambda : {0.5, 1.0, 2.0}) {
    const std::string name = "baseline_rel_error_lambda_" + fmt("%g", lambda);
    guarded(r, name, 7, [&] {
      const double got = oracle::rho_prime_oracle(bp, lambda, 1e-3);
      const double want = density::baseline_positive(bp, lambda);
      r.checks.push_back(make_check(name, 7, std::fabs(got - want) / want, 0.01, Relation::LessEqual,
                                    "oracle " + fmt("%.10g", got) + " vs " + fmt("%.10g", want) + ", eps = 1e-3"));
    });
  }
  guarded(r, "baseline_spot_value", 7, [&] {
    const double got = oracle::rho_prime_oracle(bp, 1.0, 1e-3);
    r.checks.push_back(make_check("baseline_spot_value", 7, std::fabs(got * pi - 1.0), 0.01, Relation::LessEqual,
                                  "oracle rho'(1) = " + fmt("%.10g", got) + " vs 1/pi"));
  });
}

struct ClosedForm {
  const char* name;
  quad::Integrand f;
  double lo;
  double hi;  // infinity selects the semi-infinite driver
  double exact;
  double decay;
};

void quad_suite(Report& r, const Settings& s) {
  guarded(r, "kernel_bplus_vs_k", 9, [&] {
    double worst_k = 0.0;
    double worst_i = 0.0;
    const int n = 30;
    for (int i = 0; i < n; ++i) {
      const double a = 0.1 * std::pow(300.0, static_cast<double>(i) / (n - 1));
      for (auto [p, nu] : {std::pair{kernel::Order::OneThird, oracle::kOneThird},
                           std::pair{kernel::Order::TwoThirds, oracle::Order{2, 3}}}) {
        const double pv = kernel::value_of(p);
        const double k = oracle::modified_bessel_k(nu, a);
        const double bplus = kernel::b_plus(p, a, s.tol.kernel_rel).to_double();
        worst_k = std::max(worst_k, std::fabs(pi * bplus - k) / k);

        // Omega_p - (sin p pi / pi) int_0^inf exp(-a ch t - p t) dt = I_p
        const auto corr = quad::integrate_semiinf(
            [=](double t) { return std::exp(-a * std::cosh(t) - pv * t); }, 1e-12, pv + a);
        const double lhs = kernel::omega(p, a, s.tol.kernel_rel).to_double() - std::sin(pv * pi) / pi * corr.value;
        const double ip = oracle::modified_bessel_i(nu, a);
        worst_i = std::max(worst_i, std::fabs(lhs - ip) / ip);
      }
    }
    r.checks.push_back(make_check("kernel_bplus_vs_k", 9, worst_k, 1e-9, Relation::LessEqual,
                                  "max |pi B+_p(a) - K_p(a)| / K_p(a), 30 log-spaced a in [0.1, 30], p = 1/3, 2/3"));
    r.checks.push_back(make_check("kernel_omega_vs_i", 9, worst_i, 1e-9, Relation::LessEqual,
                                  "max relative residual of the Omega/I decomposition, same grid"));
  });

  const double inf = std::numeric_limits<double>::infinity();
  const ClosedForm cases[] = {
      {"quad_poly", [](double t) { return t * t; }, 0.0, 1.0, 1.0 / 3.0, 0.0},
      {"quad_exp", [](double t) { return std::exp(t); }, 0.0, 1.0, std::numbers::e - 1.0, 0.0},
      {"quad_sin", [](double t) { return std::sin(t); }, 0.0, pi, 2.0, 0.0},
      {"quad_cos_zero", [](double t) { return std::cos(t); }, 0.0, pi, 0.0, 0.0},
      {"quad_lorentz", [](double t) { return 1.0 / (1.0 + t * t); }, 0.0, 1.0, pi / 4.0, 0.0},
      {"quad_runge", [](double t) { return 1.0 / (1.0 + 25.0 * t * t); }, 0.0, 2.0, std::atan(10.0) / 5.0, 0.0},
      {"quad_periodic_bessel", [](double t) { return std::exp(std::cos(t)); }, 0.0, 2.0 * pi,
       2.0 * pi * std::cyl_bessel_i(0.0, 1.0), 0.0},
      {"quad_semiinf_exp", [](double t) { return std::exp(-t); }, 0.0, inf, 1.0, 1.0},
      {"quad_semiinf_gamma2", [](double t) { return t * std::exp(-t); }, 0.0, inf, 1.0, 1.0},
      {"quad_semiinf_gauss", [](double t) { return std::exp(-t * t); }, 0.0, inf, std::sqrt(pi) / 2.0, 1.0},
      {"quad_semiinf_bessel_k", [](double t) { return std::exp(-std::cosh(t)) * std::cosh(t / 3.0); }, 0.0, inf,
       std::cyl_bessel_k(1.0 / 3.0, 1.0), 2.0 / 3.0},
  };
  const double qtol = 1e-12;
  for (const auto& c : cases) {
    guarded(r, c.name, 9, [&] {
      // A vanishing integral has no relative target; it gets an explicit absolute one.
      quad::Options opts;
      if (c.exact == 0.0) opts.abs_floor = 1e-13;
      const auto res = std::isinf(c.hi) ? quad::integrate_semiinf(c.f, qtol, c.decay, opts)
                                        : quad::integrate_finite(c.f, c.lo, c.hi, qtol, opts);
      const double achieved = std::fabs(res.value - c.exact);
      // Certified: the true error is covered by the estimate, and the estimate meets the request.
      Check chk = make_check(c.name, 9, achieved, res.error_estimate, Relation::LessEqual,
                             "estimate " + sci(res.error_estimate) + ", " + std::to_string(res.evaluations) +
                                 " evaluations");
      // The library's own closed-form references carry a few ulps of rounding.
      const double ref_slack = 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(c.exact);
      chk.pass = achieved <= res.error_estimate + ref_slack &&
                 res.error_estimate <= std::max(qtol * std::fabs(c.exact), 1e-13);
      r.checks.push_back(std::move(chk));
    });
  }
}

}  // namespace

bool Report::pass() const noexcept {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::span<const std::string_view> suite_names() noexcept { return kSuites; }

bool is_suite(std::string_view name) noexcept {
  return std::find(kSuites.begin(), kSuites.end(), name) != kSuites.end();
}

Report run(std::string_view suite, const Settings& settings) {
  if (!is_suite(suite)) fail(ErrorCode::InvalidArgument, "unknown suite '" + std::string(suite) + "'");
  Report report;
  report.suite = std::string(suite);
  const auto t0 = std::chrono::steady_clock::now();
  if (suite == "oracle") oracle_suite(report, settings);
  else if (suite == "thm1") thm1_suite(report, settings);
  else if (suite == "thm2") thm2_suite(report, settings);
  else if (suite == "thm3") thm3_suite(report, settings);
  else if (suite == "corollary") corollary_suite(report, settings);
  else if (suite == "baseline") baseline_suite(report, settings);
  else quad_suite(report, settings);
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace weyldens::verify
