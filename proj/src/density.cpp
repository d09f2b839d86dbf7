#include "weyldens/density.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "weyldens/error.hpp"

namespace weyldens {

BoundaryParam::BoundaryParam(double alpha, double sin_a, double cos_a)
    : alpha_(alpha), sin_(sin_a), cos_(cos_a), cot_(cos_a / sin_a) {}

BoundaryParam BoundaryParam::from_alpha(double alpha) {
  if (!std::isfinite(alpha)) fail(ErrorCode::InvalidArgument, "alpha must be finite");
  const double s = std::sin(alpha);
  const double c = std::cos(alpha);
  if (s == 0.0 || !(c / s > 0.0) || !std::isfinite(c / s)) {
    std::ostringstream msg;
    msg << "boundary angle needs sin(alpha) != 0 and ctg(alpha) > 0, got alpha = " << alpha;
    fail(ErrorCode::InvalidArgument, msg.str());
  }
  return BoundaryParam(alpha, s, c);
}

BoundaryParam BoundaryParam::from_cot(double cot_alpha) {
  if (!(cot_alpha > 0.0) || !std::isfinite(cot_alpha)) {
    std::ostringstream msg;
    msg << "ctg(alpha) must be positive and finite, got " << cot_alpha;
    fail(ErrorCode::InvalidArgument, msg.str());
  }
  const double alpha = std::atan2(1.0, cot_alpha);
  // Build sin/cos from the cotangent directly so ctg round-trips exactly.
  const double r = std::hypot(1.0, cot_alpha);
  BoundaryParam bp(alpha, 1.0 / r, cot_alpha / r);
  bp.cot_ = cot_alpha;
  return bp;
}

SpectralPoint SpectralPoint::make(double lambda, double eps) {
  if (!(lambda < 0.0) || !std::isfinite(lambda)) {
    std::ostringstream msg;
    msg << "spectral point needs lambda < 0, got " << lambda;
    fail(ErrorCode::DomainError, msg.str());
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    std::ostringstream msg;
    msg << "perturbation strength needs eps > 0, got " << eps;
    fail(ErrorCode::DomainError, msg.str());
  }
  SpectralPoint sp;
  sp.lambda = lambda;
  sp.eps = eps;
  sp.tau = std::sqrt(-lambda);
  sp.a = 2.0 * sp.tau * sp.tau * sp.tau / (3.0 * eps);
  return sp;
}

std::string_view to_string(Region r) noexcept {
  switch (r) {
    case Region::DeepLeft: return "deep_left";
    case Region::Gap: return "gap";
    case Region::Intermediate: return "intermediate";
    case Region::NearZero: return "near_zero";
  }
  return "unknown";
}

namespace density {

namespace {

struct Split {
  SpectralPoint point;
  double tau_ref = 0.0;
  double tau_shift = 0.0;  // tau - tau_ref, exact to relative rounding
};

Split split_point(double lambda_ref, double offset, double eps) {
  Split sp;
  sp.point = SpectralPoint::make(lambda_ref + offset, eps);
  sp.tau_ref = std::sqrt(-lambda_ref);
  if (offset != 0.0) {
    const double tau_full = std::sqrt(-(lambda_ref + offset));
    sp.tau_shift = -offset / (sp.tau_ref + tau_full);
    sp.point.tau = sp.tau_ref + sp.tau_shift;
    sp.point.a = 2.0 * sp.point.tau * sp.point.tau * sp.point.tau / (3.0 * eps);
  } else {
    sp.point.tau = sp.tau_ref;
  }
  return sp;
}

// T assembled from small pieces: c (b11 - 1) + (c - tau sin) + tau sin (1 - b12),
// with c - tau sin split at the reference point so that offsets of a few ulps
// of lambda still move T smoothly.
double t_from_beta(const BoundaryParam& bp, const Split& sp, const kernel::BetaMatrix& beta) {
  const double c = bp.cos_alpha();
  const double s = bp.sin_alpha();
  const double linear = std::fma(-sp.tau_ref, s, c) - sp.tau_shift * s;
  return c * beta.b11_excess + linear + sp.point.tau * s * beta.b12_deficit;
}

ScaledReal assemble(const BoundaryParam& bp, const SpectralPoint& pt, double t_value, const kernel::BetaMatrix& beta) {
  const double c = bp.cos_alpha();
  const double s = bp.sin_alpha();
  const ScaledReal tau = ScaledReal::from_double(pt.tau);
  const ScaledReal cross =
      ScaledReal::from_double(beta.b11) * beta.b22 + ScaledReal::from_double(beta.b12) * beta.b21;
  const ScaledReal numerator = tau * cross / ScaledReal::from_double(std::numbers::pi);
  const ScaledReal s_value = ScaledReal::from_double(c) * beta.b21 + ScaledReal::from_double(pt.tau * s) * beta.b22;
  const ScaledReal denominator = ScaledReal::from_double(t_value).square() + s_value.square();
  return numerator / denominator;
}

}  // namespace

ScaledReal rho_prime_from_beta(const BoundaryParam& bp, const SpectralPoint& sp, const kernel::BetaMatrix& beta) {
  Split split;
  split.point = sp;
  split.tau_ref = sp.tau;
  return assemble(bp, sp, t_from_beta(bp, split, beta), beta);
}

DensityPoint rho_prime(const BoundaryParam& bp, double lambda, double eps, double c2, double rel_tol) {
  return rho_prime_near(bp, lambda, 0.0, eps, c2, rel_tol);
}

DensityPoint rho_prime_near(const BoundaryParam& bp, double lambda_ref, double offset, double eps, double c2,
                            double rel_tol) {
  const Split split = split_point(lambda_ref, offset, eps);
  const kernel::BetaMatrix beta = kernel::beta_matrix(kernel::kernel_set(split.point.a, rel_tol));
  DensityPoint dp;
  dp.point = split.point;
  dp.rho_prime = assemble(bp, split.point, t_from_beta(bp, split, beta), beta);
  dp.region = thm2_region(bp, split.point.lambda, eps, c2);
  return dp;
}

double t_function(const BoundaryParam& bp, double lambda, double eps, double rel_tol) {
  return t_function_near(bp, lambda, 0.0, eps, rel_tol);
}

double t_function_near(const BoundaryParam& bp, double lambda_ref, double offset, double eps, double rel_tol) {
  const Split split = split_point(lambda_ref, offset, eps);
  const kernel::BetaMatrix beta = kernel::beta_matrix(kernel::kernel_set(split.point.a, rel_tol));
  return t_from_beta(bp, split, beta);
}

ScaledReal asymptote_thm1(const BoundaryParam& bp, double lambda, double eps) {
  const SpectralPoint sp = SpectralPoint::make(lambda, eps);
  const double s = bp.sin_alpha();
  const double log_value = -4.0 * sp.tau * sp.tau * sp.tau / (3.0 * eps) - std::log(std::numbers::pi * sp.tau * s * s);
  return ScaledReal::exp(log_value);
}

Region thm2_region(const BoundaryParam& bp, double lambda, double eps, double c2) {
  const double ctg2 = bp.cot_alpha() * bp.cot_alpha();
  if (lambda >= -c2 * std::cbrt(eps * eps)) return Region::NearZero;
  if (lambda < -2.0 * ctg2) return Region::DeepLeft;
  if (lambda <= -0.5 * ctg2) return Region::Gap;
  return Region::Intermediate;
}

BoundCheck thm2_bound_check(const BoundaryParam& bp, double lambda, double eps, double c2, double big_o_const,
                            double rel_tol) {
  if (!(big_o_const > 0.0)) fail(ErrorCode::InvalidArgument, "big_o_const must be positive");
  BoundCheck out;
  out.region = thm2_region(bp, lambda, eps, c2);
  if (out.region == Region::Gap) {
    std::ostringstream msg;
    msg << "lambda = " << lambda << " lies in the critical segment, where the region bounds do not apply";
    fail(ErrorCode::RegionError, msg.str());
  }
  const DensityPoint dp = rho_prime(bp, lambda, eps, c2, rel_tol);
  const double abs_lambda = -lambda;
  const double exponent = -4.0 * std::pow(abs_lambda, 1.5) / (3.0 * eps);
  double log_envelope = 0.0;
  switch (out.region) {
    case Region::DeepLeft: log_envelope = exponent - 0.5 * std::log(abs_lambda); break;
    case Region::Intermediate: log_envelope = exponent + 0.5 * std::log(abs_lambda); break;
    case Region::NearZero: log_envelope = std::log(eps) / 3.0; break;
    case Region::Gap: break;
  }
  out.rho_prime = dp.rho_prime;
  out.envelope = ScaledReal::exp(log_envelope);
  out.margin = std::log(big_o_const) + log_envelope - dp.rho_prime.log_mag();
  out.pass = out.margin >= 0.0;
  return out;
}

double baseline_positive(const BoundaryParam& bp, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    std::ostringstream msg;
    msg << "positive-axis baseline needs lambda > 0, got " << lambda;
    fail(ErrorCode::DomainError, msg.str());
  }
  const double s = bp.sin_alpha();
  const double c = bp.cos_alpha();
  return std::sqrt(lambda) / (std::numbers::pi * (lambda * s * s + c * c));
}

PointMass baseline_negative_mass(const BoundaryParam& bp) {
  const double s = bp.sin_alpha();
  return {bp.lambda0(), 2.0 * bp.cot_alpha() / (s * s)};
}

}  // namespace density
}  // namespace weyldens
