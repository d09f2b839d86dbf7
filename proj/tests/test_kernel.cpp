#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "weyldens/error.hpp"
#include "weyldens/kernel.hpp"
#include "weyldens/oracle.hpp"
#include "weyldens/quad.hpp"

using namespace weyldens;
using kernel::Order;
using std::numbers::pi;

namespace {

constexpr Order kOrders[] = {Order::OneThird, Order::TwoThirds};

oracle::Order series_order(Order p) { return p == Order::OneThird ? oracle::Order{1, 3} : oracle::Order{2, 3}; }

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) xs.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return xs;
}

double rel(double x, double ref) { return std::fabs(x - ref) / std::fabs(ref); }

// Composite Simpson in long double over [0, T].
long double simpson(auto f, long double hi, long n) {
  const long double h = hi / n;
  long double sum = f(0.0L) + f(hi);
  for (long i = 1; i < n; ++i) sum += f(i * h) * ((i % 2) ? 4.0L : 2.0L);
  return sum * h / 3.0L;
}

}  // namespace

TEST_CASE("kernel values are positive and ordered on a wide log grid") {
  for (double a : log_grid(1e-2, 1e4, 25)) {
    CAPTURE(a);
    const auto ks = kernel::kernel_set(a);
    for (auto v : {ks.omega_13, ks.omega_23, ks.bminus_13, ks.bminus_23, ks.bplus_13, ks.bplus_23, ks.omega_gap})
      CHECK(v.sign() == 1);
    CHECK(ks.omega_13 > ks.omega_23);
    CHECK(ks.bminus_13 < ks.bplus_13);
    CHECK(ks.bminus_23 < ks.bplus_23);
  }
}

TEST_CASE("B+ decreases and Omega increases with a") {
  for (Order p : kOrders) {
    ScaledReal prev_b = kernel::b_plus(p, 0.05);
    ScaledReal prev_o = kernel::omega(p, 0.05);
    for (double a : log_grid(0.1, 1e3, 30)) {
      const auto b = kernel::b_plus(p, a);
      const auto o = kernel::omega(p, a);
      CHECK(b < prev_b);
      CHECK(o > prev_o);
      prev_b = b;
      prev_o = o;
    }
  }
}

TEST_CASE("pi B+_p equals K_p from the series oracle") {
  for (Order p : kOrders) {
    for (double a : log_grid(0.1, 30.0, 20)) {
      CAPTURE(a);
      const double k = oracle::modified_bessel_k(series_order(p), a);
      CHECK(rel(pi * kernel::b_plus(p, a).to_double(), k) <= 1e-9);
    }
  }
  CHECK(rel(pi * kernel::b_plus(Order::TwoThirds, 5.0).to_double(), oracle::modified_bessel_k({2, 3}, 5.0)) <= 1e-10);
}

TEST_CASE("Omega_p minus its tail correction equals I_p") {
  for (Order p : kOrders) {
    const double pv = kernel::value_of(p);
    for (double a : log_grid(0.1, 30.0, 20)) {
      CAPTURE(a);
      const auto corr = quad::integrate_semiinf([=](double t) { return std::exp(-a * std::cosh(t) - pv * t); },
                                                1e-12, a + pv);
      const double lhs = kernel::omega(p, a).to_double() - std::sin(pv * pi) / pi * corr.value;
      CHECK(rel(lhs, oracle::modified_bessel_i(series_order(p), a)) <= 1e-9);
    }
  }
}

TEST_CASE("small-a limit of Omega_{1/3}") {
  const double limit = 3.0 * std::sqrt(3.0) / (2.0 * pi);
  CHECK(rel(kernel::omega(Order::OneThird, 1e-9).to_double(), limit) <= 1e-8);
}

TEST_CASE("Omega_{2/3} at a = 50 follows the Laplace leading term") {
  const auto o = kernel::omega(Order::TwoThirds, 50.0);
  const double scaled = std::exp(o.log_mag() - 50.0) * std::sqrt(2 * pi * 50.0);
  CHECK(scaled >= 0.95);
  CHECK(scaled <= 1.0);
}

TEST_CASE("B- against a brute-force composite rule") {
  const double got = kernel::b_minus(Order::OneThird, 1.0).to_double();
  const long double ref =
      simpson([](long double t) { return std::exp(-std::cosh(t)) * std::sinh(t / 3); }, 8.0L, 1000000) /
      std::numbers::pi_v<long double>;
  CHECK(rel(got, static_cast<double>(ref)) <= 1e-11);
  for (Order p : kOrders) {
    CHECK(kernel::b_minus(p, 10.0) < kernel::b_plus(p, 10.0));
    // B-/B+ ~ p sqrt(2 / (pi a)) for large a.
    double prev = 1.0;
    for (double a : {50.0, 200.0, 800.0, 3200.0}) {
      const double q = ratio(kernel::b_minus(p, a), kernel::b_plus(p, a));
      CHECK(q < prev);
      CHECK(q == doctest::Approx(kernel::value_of(p) * std::sqrt(2.0 / (pi * a))).epsilon(0.05));
      prev = q;
    }
  }
}

TEST_CASE("B+_{1/3} at a = 1000 matches the large-argument asymptote") {
  const double expected = -1000.0 + 0.5 * std::log(pi / 2000.0) - std::log(pi);
  // Next order of the asymptote: ln(1 + (4 nu^2 - 1) / (8a)) ~ -6.9e-5.
  CHECK(kernel::b_plus(Order::OneThird, 1000.0).log_mag() == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("omega_gap equals the direct difference where that is accurate") {
  for (double a : {0.1, 1.0, 5.0}) {
    const double direct = kernel::omega(Order::OneThird, a).to_double() - kernel::omega(Order::TwoThirds, a).to_double();
    CHECK(rel(kernel::omega_gap(a).to_double(), direct) <= 1e-9);
  }
}

TEST_CASE("beta matrix entries") {
  SUBCASE("a = 1") {
    const auto b = kernel::beta_matrix(kernel::kernel_set(1.0));
    CHECK(b.b11 > 1.0);
    CHECK(b.b12 > 0.0);
    CHECK(b.b21.sign() == 1);
    CHECK(b.b22.sign() == 1);
    CHECK(b.b11_excess == doctest::Approx(b.b11 - 1.0).epsilon(1e-12));
    CHECK(b.b12_deficit == doctest::Approx(1.0 - b.b12).epsilon(1e-10));
  }
  SUBCASE("a = 200") {
    const auto b = kernel::beta_matrix(kernel::kernel_set(200.0));
    // b11 - 1 ~ e^{-400} rounds away in b11 itself but survives in the excess.
    CHECK(b.b11 >= 1.0);
    CHECK(b.b11 < 1.0 + 1e-8);
    CHECK(b.b11_excess > 0.0);
    CHECK(b.b11_excess < 1e-8);
    CHECK(b.b12 > 1.0 - 1e-3);
    CHECK(b.b12 < 1.0);
    CHECK(b.b21.to_double() < 1e-100);
  }
  SUBCASE("a = 50: b21 / b22 approaches K_{1/3} / K_{2/3}") {
    const auto b = kernel::beta_matrix(kernel::kernel_set(50.0));
    const double q = ratio(b.b21, b.b22);
    CHECK(q > 0.9);
    CHECK(q < 1.0);
    const double kq = kernel::b_plus(Order::OneThird, 50.0).to_double() / kernel::b_plus(Order::TwoThirds, 50.0).to_double();
    CHECK(q == doctest::Approx(kq).epsilon(1e-10));
  }
  SUBCASE("limits as a grows") {
    double prev21 = 1e300;
    for (double a : {1.0, 10.0, 100.0, 1000.0}) {
      const auto b = kernel::beta_matrix(kernel::kernel_set(a));
      CHECK(b.b11 >= 1.0);
      CHECK(b.b21.to_double() < prev21);
      prev21 = b.b21.to_double();
    }
    const auto far = kernel::beta_matrix(kernel::kernel_set(1e5));
    CHECK(far.b11 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(far.b12 == doctest::Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("a <= 0 is rejected") {
  for (double a : {0.0, -1.0}) {
    try {
      kernel::omega(Order::OneThird, a);
      FAIL("expected DomainError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DomainError);
    }
    CHECK_THROWS_AS(kernel::b_minus(Order::OneThird, a), Error);
    CHECK_THROWS_AS(kernel::b_plus(Order::TwoThirds, a), Error);
  }
}
