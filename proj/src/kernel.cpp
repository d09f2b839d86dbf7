#include "weyldens/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "weyldens/error.hpp"
#include "weyldens/quad.hpp"

namespace weyldens::kernel {
namespace {

void require_positive(double a, const char* who) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    std::ostringstream msg;
    msg << who << " needs a > 0, got " << a;
    fail(ErrorCode::DomainError, msg.str());
  }
}

// ln of the tail bound int_T^inf exp(-a(ch t - 1) + p t) dt, using
// a(ch t - 1) >= a(ch T - 1) + a sh T (t - T) for t >= T.
double log_tail_bound(double a, double p, double t) {
  const double slope = a * std::sinh(t) - p;
  if (slope <= 0.0) return std::numeric_limits<double>::infinity();
  const double ch_minus_one = 2.0 * std::sinh(0.5 * t) * std::sinh(0.5 * t);
  return -a * ch_minus_one + p * t - std::log(slope);
}

// e^{a} B(a) where B is either B^- (odd) or B^+ (even); integrand
// exp(-2a sh^2(t/2)) {sh, ch}(p t) is bounded near t = 0 and decays doubly
// exponentially.
ScaledReal scaled_b(Order order, double a, double rel_tol, bool odd) {
  const double p = value_of(order);
  auto integrand = [a, p, odd](double t) {
    const double s = std::sinh(0.5 * t);
    const double weight = std::exp(-2.0 * a * s * s);
    return weight * (odd ? std::sinh(p * t) : std::cosh(p * t));
  };

  // Truncate where a(ch t - 1) exceeds -ln(rel_tol) plus headroom; the
  // integrand peaks at most at ln(1 + p/a) above its t = 0 value.
  const double budget = -std::log(rel_tol) + std::log1p(p / a) + 10.0;
  double t_max = std::acosh(1.0 + budget / a) + 1.0;

  while (true) {
    const quad::IntegralResult r = quad::integrate_finite(integrand, 0.0, t_max, rel_tol);
    if (r.value <= 0.0) fail(ErrorCode::NonConvergence, "kernel integral lost positivity");
    const double log_value = std::log(r.value);
    if (log_tail_bound(a, p, t_max) <= std::log(0.01 * rel_tol) + log_value) {
      return ScaledReal::exp(log_value - a - std::log(std::numbers::pi));
    }
    t_max *= 1.5;
  }
}

// e^{-a} (1/pi) int_0^pi exp(a cos t) shape(t) dt, in log form.
template <typename Shape>
ScaledReal scaled_omega_integral(double a, double rel_tol, Shape shape) {
  auto integrand = [a, shape](double t) {
    const double s = std::sin(0.5 * t);
    return std::exp(-2.0 * a * s * s) * shape(t);
  };
  // For large a the mass sits in t < O(1/sqrt(a)); a breakpoint there keeps
  // the first bisections useful.
  const double knee = std::min(std::numbers::pi, 8.0 / std::sqrt(a));
  double sum = 0.0;
  sum += quad::integrate_finite(integrand, 0.0, knee, rel_tol).value;
  if (knee < std::numbers::pi) {
    quad::Options tail_opts;
    tail_opts.abs_floor = std::max(0.1 * rel_tol * sum, quad::kAbsoluteFloor);
    sum += quad::integrate_finite(integrand, knee, std::numbers::pi, rel_tol, tail_opts).value;
  }
  if (!(sum > 0.0)) fail(ErrorCode::NonConvergence, "omega integral lost positivity");
  return ScaledReal::exp(std::log(sum) + a - std::log(std::numbers::pi));
}

}  // namespace

ScaledReal omega(Order order, double a, double rel_tol) {
  require_positive(a, "omega");
  const double p = value_of(order);
  return scaled_omega_integral(a, rel_tol, [p](double t) { return std::cos(p * t); });
}

ScaledReal omega_gap(double a, double rel_tol) {
  require_positive(a, "omega_gap");
  // cos(t/3) - cos(2t/3) = 2 sin(t/2) sin(t/6)
  return scaled_omega_integral(a, rel_tol, [](double t) { return 2.0 * std::sin(0.5 * t) * std::sin(t / 6.0); });
}

ScaledReal b_minus(Order p, double a, double rel_tol) {
  require_positive(a, "b_minus");
  return scaled_b(p, a, rel_tol, true);
}

ScaledReal b_plus(Order p, double a, double rel_tol) {
  require_positive(a, "b_plus");
  return scaled_b(p, a, rel_tol, false);
}

KernelSet kernel_set(double a, double rel_tol) {
  require_positive(a, "kernel_set");
  KernelSet ks;
  ks.a = a;
  ks.omega_13 = omega(Order::OneThird, a, rel_tol);
  ks.omega_23 = omega(Order::TwoThirds, a, rel_tol);
  ks.bminus_13 = b_minus(Order::OneThird, a, rel_tol);
  ks.bminus_23 = b_minus(Order::TwoThirds, a, rel_tol);
  ks.bplus_13 = b_plus(Order::OneThird, a, rel_tol);
  ks.bplus_23 = b_plus(Order::TwoThirds, a, rel_tol);
  ks.omega_gap = omega_gap(a, rel_tol);
  return ks;
}

BetaMatrix beta_matrix(const KernelSet& ks) {
  const double half_sqrt3 = 0.5 * std::numbers::sqrt3;
  const ScaledReal half = ScaledReal::from_double(0.5);
  BetaMatrix beta;
  beta.b11_excess = half_sqrt3 * (ks.bminus_13 / ks.omega_13).to_double();
  beta.b11 = 1.0 + beta.b11_excess;
  beta.b12 = (ks.omega_23 / ks.omega_13).to_double() + half_sqrt3 * (ks.bminus_23 / ks.omega_13).to_double();
  beta.b12_deficit = (ks.omega_gap / ks.omega_13).to_double() - half_sqrt3 * (ks.bminus_23 / ks.omega_13).to_double();
  beta.b21 = half * (ks.bplus_13 / ks.omega_13);
  beta.b22 = half * (ks.bplus_23 / ks.omega_13);
  return beta;
}

}  // namespace weyldens::kernel
