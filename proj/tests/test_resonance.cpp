#include <array>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "weyldens/density.hpp"
#include "weyldens/error.hpp"
#include "weyldens/resonance.hpp"

using namespace weyldens;
using std::numbers::pi;

namespace {

const BoundaryParam kQuarter = BoundaryParam::from_alpha(pi / 4);
const BoundaryParam kThird = BoundaryParam::from_alpha(pi / 3);

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("locate_zero") {
  TEST_CASE("drift of the zero") {
    const double l1 = resonance::locate_zero(kQuarter, 0.1);
    CHECK(std::fabs(l1 - (-1.05)) <= 0.01);
    const auto seg = resonance::critical_segment(kQuarter);
    CHECK(l1 > seg.lo);
    CHECK(l1 < seg.hi);

    // lambda1 = ctg^2 F(eps / ctg^3), so the eps^2 term scales like ctg^-4 = 9 at pi/3.
    const double l3 = resonance::locate_zero(kThird, 0.05);
    CHECK(std::fabs(l3 - (-1.0 / 3.0 - 0.025 * std::sqrt(3.0))) <= 9.0 * 0.05 * 0.05);
  }

  TEST_CASE("approaches lambda0 as eps -> 0") {
    double prev = INFINITY;
    for (double eps : {0.1, 0.01, 0.001}) {
      const double gap = std::fabs(resonance::locate_zero(kQuarter, eps) + 1.0);
      CHECK(gap < prev);
      prev = gap;
    }
    CHECK(prev < 1e-3);
  }

  TEST_CASE("T vanishes at the reported zero") {
    for (double eps : {0.05, 0.1, 0.2}) {
      const double l1 = resonance::locate_zero(kQuarter, eps);
      CHECK(std::fabs(density::t_function(kQuarter, l1, eps)) < 1e-12);
    }
  }

  TEST_CASE("insensitive to halving the root tolerance") {
    resonance::Tolerances tight;
    tight.root_rel /= 2;
    for (double eps : {0.05, 0.1, 0.2}) {
      const double a = resonance::locate_zero(kQuarter, eps);
      const double b = resonance::locate_zero(kQuarter, eps, tight);
      CHECK(std::fabs(a - b) <= 1e-12);
    }
  }

  TEST_CASE("no bracket outside the validity range") {
    CHECK(code_of([] { resonance::locate_zero(kQuarter, 10.0); }) == ErrorCode::NoBracket);
    CHECK(code_of([] { resonance::locate_zero(kQuarter, 0.3); }) == ErrorCode::NoBracket);
    CHECK(code_of([] { resonance::locate_zero(kQuarter, 10.0, {}, 1e9); }) == ErrorCode::NoBracket);
  }
}

TEST_SUITE("drift_fit") {
  TEST_CASE("slope at pi/4") {
    const std::array<double, 5> grid = {0.02, 0.05, 0.08, 0.11, 0.14};
    const auto fit = resonance::drift_fit(kQuarter, grid);
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(0.05));
    CHECK(fit.lambda1.size() == grid.size());
    CHECK(fit.quadratic_residual_bound < 1.0);
  }

  TEST_CASE("slope at pi/3 on a grid scaled into the small-eps regime") {
    // eps / ctg^3 spans the same range as the pi/4 grid above.
    const double s = std::pow(kThird.cot_alpha(), 3);
    const std::array<double, 5> grid = {0.02 * s, 0.05 * s, 0.08 * s, 0.11 * s, 0.14 * s};
    const auto fit = resonance::drift_fit(kThird, grid);
    CHECK(fit.slope == doctest::Approx(-std::sqrt(3.0) / 2).epsilon(0.05));
  }

  TEST_CASE("needs five points") {
    const std::array<double, 4> grid = {0.02, 0.05, 0.08, 0.11};
    CHECK(code_of([&] { resonance::drift_fit(kQuarter, grid); }) == ErrorCode::InvalidArgument);
  }
}

TEST_SUITE("peak_width") {
  TEST_CASE("bounded by the pole estimate and shrinking with eps") {
    double prev = INFINITY;
    for (double eps : {0.3 - 1e-9, 0.2, 0.15}) {
      const double l1 = resonance::locate_zero(kQuarter, eps, {}, 1.0);
      const double w = resonance::peak_width(kQuarter, eps, l1);
      CHECK(w > 0.0);
      CHECK(w < prev);
      prev = w;
    }
    const double l1 = resonance::locate_zero(kQuarter, 0.2);
    CHECK(resonance::peak_width(kQuarter, 0.2, l1) <= std::exp(-1.0 / 0.2));
  }

  TEST_CASE("a peak narrower than the double-precision floor is refused") {
    CHECK(resonance::peak_width(kQuarter, 0.05, resonance::locate_zero(kQuarter, 0.05)) > 1e-13);
    for (double eps : {0.03, 0.02}) {
      const double l1 = resonance::locate_zero(kQuarter, eps);
      CHECK(code_of([&] { resonance::peak_width(kQuarter, eps, l1); }) == ErrorCode::ModelMismatch);
      CHECK(code_of([&] { resonance::analyze(kQuarter, eps); }) == ErrorCode::ModelMismatch);
    }
  }

  TEST_CASE("T changes sign across one width") {
    for (double eps : {0.1, 0.2}) {
      const double l1 = resonance::locate_zero(kQuarter, eps);
      const double w = resonance::peak_width(kQuarter, eps, l1);
      CHECK(density::t_function_near(kQuarter, l1, -w, eps) * density::t_function_near(kQuarter, l1, w, eps) < 0.0);
    }
  }

  TEST_CASE("peak height consistent with the Lorentzian mass") {
    const double eps = 0.2;
    const auto pm = resonance::peak_mass(kQuarter, eps, eps * eps);
    const double height = density::rho_prime(kQuarter, pm.lambda1, eps).rho_prime.to_double();
    CHECK(height == doctest::Approx(pm.mass / (pi * pm.width)).epsilon(0.2));
  }
}

TEST_SUITE("peak_mass") {
  TEST_CASE("close to the unperturbed point mass") {
    const auto pm = resonance::peak_mass(kQuarter, 0.1, 0.01);
    CHECK(std::fabs(pm.mass - 4.0) <= 0.5);
    CHECK(std::fabs(pm.mass - pm.mass_unsubstituted) <= 1e-4 * pm.mass);
    CHECK(pm.d == 0.01);
    CHECK_FALSE(pm.in_admissible_window);
  }

  TEST_CASE("bounded for every eps tried") {
    for (double eps : {0.05, 0.1, 0.15, 0.2}) {
      const auto pm = resonance::peak_mass(kQuarter, eps, eps * eps);
      CHECK(pm.mass > 0.0);
      CHECK(pm.mass < 8.0);
    }
  }

  TEST_CASE("pi/3 in the small-eps regime") {
    const double eps = 0.03;
    const auto pm = resonance::peak_mass(kThird, eps, eps * eps);
    const double expected = 8.0 / (3.0 * std::sqrt(3.0));
    // O(eps / ctg^3) relative correction.
    CHECK(std::fabs(pm.mass / expected - 1.0) <= eps / std::pow(kThird.cot_alpha(), 3));
  }

  TEST_CASE("window preconditions") {
    CHECK(code_of([] { resonance::peak_mass(kQuarter, 0.1, 0.02); }) == ErrorCode::DomainError);
    CHECK(code_of([] { resonance::peak_mass(kQuarter, 0.1, 1e-9); }) == ErrorCode::DomainError);
    const auto w = resonance::admissible_window(kQuarter, 0.05);
    CHECK_FALSE(w.empty());
    CHECK(w.contains(0.05 * 0.05));
    CHECK(w.lo == doctest::Approx(std::exp(-1.0 / 0.15)));
    CHECK(resonance::admissible_window(kQuarter, 0.1).empty());
  }
}

TEST_SUITE("off_peak") {
  TEST_CASE("density away from the resonance stays under the exponential envelope") {
    const double eps = 0.1;
    const double l1 = resonance::locate_zero(kQuarter, eps);
    const auto seg = resonance::critical_segment(kQuarter);
    const double calibration = 2.0;
    for (int i = 0; i <= 200; ++i) {
      const double lambda = seg.lo + (seg.hi - seg.lo) * i / 200.0;
      if (std::fabs(lambda - l1) < 0.1) continue;
      const double bound = -4.0 * std::pow(-lambda, 1.5) / (3.0 * eps) + 2.0 * std::log(10.0) + calibration;
      CHECK(density::rho_prime(kQuarter, lambda, eps).rho_prime.log_mag() <= bound);
    }
  }
}

TEST_SUITE("weak_convergence") {
  TEST_CASE("g = 1 reproduces the peak mass plus a small remainder") {
    const auto w = resonance::weak_convergence_test(kQuarter, 0.1, [](double) { return 1.0; });
    const auto pm = resonance::peak_mass(kQuarter, 0.1, 0.01);
    CHECK(std::fabs(w.total - 4.0) <= 0.5);
    CHECK(w.peak_part == doctest::Approx(pm.mass).epsilon(1e-8));
    CHECK(w.off_peak_part > 0.0);
    CHECK(w.off_peak_part < 1e-2 * w.total);
  }

  TEST_CASE("the remainder shrinks fast with eps") {
    double prev = INFINITY;
    for (double eps : {0.2, 0.1, 0.05}) {
      const auto w = resonance::weak_convergence_test(kQuarter, eps, [](double) { return 1.0; });
      const double rel = w.off_peak_part / w.total;
      CHECK(rel < 0.1 * prev);
      prev = rel;
    }
    CHECK(prev <= 1e-5);
  }

  TEST_CASE("linear test function tends to 4 lambda0") {
    double prev = INFINITY;
    for (double eps : {0.2, 0.1, 0.05}) {
      const auto w = resonance::weak_convergence_test(kQuarter, eps, [](double l) { return l; });
      const double err = std::fabs(w.total + 4.0);
      CHECK(err < prev);
      prev = err;
    }
  }
}

TEST_SUITE("analyze") {
  TEST_CASE("report fields") {
    const auto r = resonance::analyze(kQuarter, 0.1);
    CHECK(r.eps == 0.1);
    CHECK(r.d_used == doctest::Approx(0.01));
    CHECK(r.width > 0.0);
    CHECK(r.mass > 0.0);
    CHECK(r.drift_prediction == doctest::Approx(-1.05));
    CHECK(r.drift_residual == doctest::Approx(r.lambda1 - r.drift_prediction));
    CHECK(std::fabs(r.drift_residual) <= 0.01);
  }
}
