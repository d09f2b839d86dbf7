#include "weyldens/oracle.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "weyldens/error.hpp"

namespace weyldens::oracle {
namespace {

namespace mp = boost::multiprecision;
using Real = mp::cpp_bin_float_100;
using Complex = mp::cpp_complex_100;

const Real& pi_mp() {
  static const Real value = boost::math::constants::pi<Real>();
  return value;
}

Real order_mp(Order nu) { return Real(nu.num) / Real(nu.den); }

void check_order(Order nu) {
  if (nu.den == 0 || nu.num % nu.den == 0) fail(ErrorCode::InvalidArgument, "Bessel order must be a non-integer rational");
}

void check_range(double modulus) {
  if (!(modulus <= kSeriesRange)) {
    std::ostringstream msg;
    msg << "|z| = " << modulus << " is outside the series range " << kSeriesRange;
    fail(ErrorCode::RangeError, msg.str());
  }
}

// Sum_k (-1)^k w^k / (k! Gamma(nu + k + 1)) with w = (z/2)^2, stopping once
// the terms have passed their peak and fallen below 1e-95 of the largest.
Complex ascending_sum(const Real& nu, const Complex& w, bool alternating) {
  Complex term = Complex(1) / Complex(boost::math::tgamma(nu + 1));
  Complex sum = term;
  Real peak = abs(term);
  const Real cutoff("1e-95");
  const Complex step = alternating ? Complex(-w) : w;
  const Real wabs = abs(w);
  for (int k = 1; k < 100000; ++k) {
    term *= step / Complex(Real(k) * (nu + k));
    sum += term;
    const Real mag = abs(term);
    if (mag > peak) peak = mag;
    if (Real(k) * Real(k) > 4 * wabs && mag < cutoff * peak) return sum;
  }
  fail(ErrorCode::NonConvergence, "ascending Bessel series did not converge");
}

// J_nu(z) for z = modulus * e^{i phase}, phase = pi * phase_num / phase_den.
Complex j_on_sheet(const Real& nu, const Real& modulus, const Real& phase) {
  const Real half = modulus / 2;
  const Complex w = Complex(half * half) * exp(Complex(0, 2 * phase));
  const Complex prefactor = Complex(pow(half, nu)) * exp(Complex(0, nu * phase));
  return prefactor * ascending_sum(nu, w, true);
}

Complex j_principal(const Real& nu, const Complex& z) {
  if (z == Complex(0)) return Complex(0);
  const Complex half = z / 2;
  const Complex prefactor = exp(Complex(nu) * log(half));
  return prefactor * ascending_sum(nu, half * half, true);
}

Complex hankel1_from_j(const Real& nu, const Complex& j_plus, const Complex& j_minus) {
  const Complex rotation = exp(Complex(0, -nu * pi_mp()));
  return (j_minus - rotation * j_plus) / Complex(0, sin(nu * pi_mp()));
}

Complex hankel1_sheet_mp(Order nu, const Real& modulus, const Real& phase) {
  const Real v = order_mp(nu);
  return hankel1_from_j(v, j_on_sheet(v, modulus, phase), j_on_sheet(-v, modulus, phase));
}

Complex to_mp(ComplexValue z) { return Complex(Real(z.real()), Real(z.imag())); }
ComplexValue to_double(const Complex& z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

// H^(1)_nu(x) * sqrt(pi x / 2) * e^{-ix} for large real x:
// e^{-i(nu pi/2 + pi/4)} sum_k i^k a_k(nu) / x^k.
ComplexValue hankel1_reduced_asymptotic(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  ComplexValue sum = 1.0;
  ComplexValue term = 1.0;
  double prev = 1.0;
  const ComplexValue i_unit(0.0, 1.0);
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= i_unit * (mu - odd * odd) / (8.0 * k * x);
    const double mag = std::abs(term);
    if (mag > prev) break;  // asymptotic series started to diverge
    sum += term;
    prev = mag;
    if (mag < 1e-18 * std::abs(sum)) break;
  }
  return std::polar(1.0, -(nu * std::numbers::pi / 2.0 + std::numbers::pi / 4.0)) * sum;
}

}  // namespace

ComplexValue bessel_j_series(Order nu, ComplexValue z) {
  check_order(nu);
  check_range(std::abs(z));
  return to_double(j_principal(order_mp(nu), to_mp(z)));
}

ComplexValue hankel1(Order nu, ComplexValue z) {
  check_order(nu);
  check_range(std::abs(z));
  const Real v = order_mp(nu);
  const Complex zz = to_mp(z);
  return to_double(hankel1_from_j(v, j_principal(v, zz), j_principal(-v, zz)));
}

ComplexValue hankel2(Order nu, ComplexValue z) {
  check_order(nu);
  check_range(std::abs(z));
  const Real v = order_mp(nu);
  const Complex zz = to_mp(z);
  const Complex rotation = exp(Complex(0, v * pi_mp()));
  return to_double((j_principal(-v, zz) - rotation * j_principal(v, zz)) / Complex(0, -sin(v * pi_mp())));
}

ComplexValue hankel1_on_sheet(Order nu, double modulus, int phase_num, int phase_den) {
  check_order(nu);
  check_range(modulus);
  if (!(modulus > 0.0)) fail(ErrorCode::DomainError, "modulus must be positive");
  const Real phase = pi_mp() * Real(phase_num) / Real(phase_den);
  return to_double(hankel1_sheet_mp(nu, Real(modulus), phase));
}

double modified_bessel_i(Order nu, double a) {
  check_order(nu);
  if (!(a > 0.0)) fail(ErrorCode::DomainError, "modified Bessel functions need a > 0");
  check_range(a);
  const Real v = order_mp(nu);
  const Real half = Real(a) / 2;
  const Complex sum = ascending_sum(v, Complex(half * half), false);
  return static_cast<double>(pow(half, v) * sum.real());
}

double modified_bessel_k(Order nu, double a) {
  check_order(nu);
  if (!(a > 0.0)) fail(ErrorCode::DomainError, "modified Bessel functions need a > 0");
  check_range(a);
  const Real v = order_mp(nu);
  const Real half = Real(a) / 2;
  const Complex w(half * half);
  const Real i_plus = pow(half, v) * ascending_sum(v, w, false).real();
  const Real i_minus = pow(half, -v) * ascending_sum(-v, w, false).real();
  return static_cast<double>(pi_mp() * (i_minus - i_plus) / (2 * sin(v * pi_mp())));
}

ComplexValue m_weyl(const BoundaryParam& bp, double lambda, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) fail(ErrorCode::DomainError, "m_weyl needs eps > 0");
  if (lambda == 0.0 || !std::isfinite(lambda)) fail(ErrorCode::DomainError, "m_weyl needs lambda != 0");

  const double root = std::sqrt(std::fabs(lambda));
  const double modulus = 2.0 * root * root * root / (3.0 * eps);
  const Real s(bp.sin_alpha());
  const Real c(bp.cos_alpha());

  Complex h13;
  Complex h23;
  Complex sqrt_lambda;
  if (lambda < 0.0) {
    check_range(modulus);
    const Real phase = pi_mp() * 3 / 2;
    h13 = hankel1_sheet_mp(kOneThird, Real(modulus), phase);
    h23 = hankel1_sheet_mp(kMinusTwoThirds, Real(modulus), phase);
    sqrt_lambda = Complex(0, Real(root));
  } else if (modulus <= kSeriesRange) {
    h13 = hankel1_sheet_mp(kOneThird, Real(modulus), Real(0));
    h23 = hankel1_sheet_mp(kMinusTwoThirds, Real(modulus), Real(0));
    sqrt_lambda = Complex(Real(root));
  } else {
    // Both Hankel functions share sqrt(2 / (pi A)) e^{iA}, which cancels in m.
    h13 = to_mp(hankel1_reduced_asymptotic(kOneThird.value(), modulus));
    h23 = to_mp(hankel1_reduced_asymptotic(kMinusTwoThirds.value(), modulus));
    sqrt_lambda = Complex(Real(root));
  }

  const Complex numerator = h13 * Complex(s) - sqrt_lambda * h23 * Complex(c);
  const Complex denominator = h13 * Complex(c) + sqrt_lambda * h23 * Complex(s);
  if (abs(denominator) < Real("1e-13") * abs(numerator)) {
    std::ostringstream msg;
    msg << "m(lambda, eps) is at a pole: lambda = " << lambda << ", eps = " << eps;
    fail(ErrorCode::PoleProximity, msg.str());
  }
  return to_double(numerator / denominator);
}

double rho_prime_oracle(const BoundaryParam& bp, double lambda, double eps) {
  return -m_weyl(bp, lambda, eps).imag() / std::numbers::pi;
}

}  // namespace weyldens::oracle
