#pragma once

#include <string_view>

#include "weyldens/kernel.hpp"
#include "weyldens/scaled_real.hpp"

namespace weyldens {

/// Boundary angle of y(0) cos(alpha) + y'(0) sin(alpha) = 0, restricted to
/// ctg(alpha) > 0.
class BoundaryParam {
 public:
  static BoundaryParam from_alpha(double alpha);
  static BoundaryParam from_cot(double cot_alpha);

  double alpha() const noexcept { return alpha_; }
  double cot_alpha() const noexcept { return cot_; }
  double tan_alpha() const noexcept { return 1.0 / cot_; }
  double sin_alpha() const noexcept { return sin_; }
  double cos_alpha() const noexcept { return cos_; }
  /// Unperturbed bound-state energy -ctg^2(alpha).
  double lambda0() const noexcept { return -cot_ * cot_; }

 private:
  BoundaryParam(double alpha, double sin_a, double cos_a);

  double alpha_;
  double sin_;
  double cos_;
  double cot_;
};

struct SpectralPoint {
  double lambda = 0.0;
  double eps = 0.0;
  double tau = 0.0;  // sqrt(-lambda)
  double a = 0.0;    // 2 tau^3 / (3 eps)

  static SpectralPoint make(double lambda, double eps);
};

/// Partition of the negative half-line used by the three-region bounds.
/// Gap is the critical segment [-2 ctg^2, -ctg^2 / 2] around the resonance.
enum class Region { DeepLeft, Gap, Intermediate, NearZero };

std::string_view to_string(Region r) noexcept;

/// Configuration constants whose values are not fixed by the theory.
struct Constants {
  double c1 = 0.1;   // upper end of the eps range for the region bounds
  double c2 = 1.0;   // near-zero region starts at -c2 eps^{2/3}
  double c3 = 0.3;   // upper end of the eps range for the resonance bracket
  double big_o_const = 10.0;
};

struct DensityPoint {
  SpectralPoint point;
  ScaledReal rho_prime;
  Region region = Region::Gap;
};

namespace density {

/// Spectral density rho'(lambda, eps) for lambda < 0 from the kernel
/// representation, assembled in log space.
DensityPoint rho_prime(const BoundaryParam& bp, double lambda, double eps, double c2 = Constants{}.c2,
                       double rel_tol = kernel::kDefaultTol);

/// rho' at lambda_ref + offset. The offset is carried separately through
/// tau, so points a few ulps of lambda apart near a resonance stay resolved.
DensityPoint rho_prime_near(const BoundaryParam& bp, double lambda_ref, double offset, double eps,
                            double c2 = Constants{}.c2, double rel_tol = kernel::kDefaultTol);

/// Same as rho_prime, reusing an already evaluated beta matrix.
ScaledReal rho_prime_from_beta(const BoundaryParam& bp, const SpectralPoint& sp, const kernel::BetaMatrix& beta);

/// T(lambda, eps) = b11 cos(alpha) - b12 tau sin(alpha); its zero on the
/// critical segment is the resonance.
double t_function(const BoundaryParam& bp, double lambda, double eps, double rel_tol = kernel::kDefaultTol);

double t_function_near(const BoundaryParam& bp, double lambda_ref, double offset, double eps,
                       double rel_tol = kernel::kDefaultTol);

/// Large-|lambda| asymptote exp(-4|lambda|^{3/2} / (3 eps)) / (pi sqrt(-lambda) sin^2 alpha).
ScaledReal asymptote_thm1(const BoundaryParam& bp, double lambda, double eps);

Region thm2_region(const BoundaryParam& bp, double lambda, double eps, double c2);

struct BoundCheck {
  bool pass = false;
  double margin = 0.0;  // ln(big_o_const * envelope) - ln(rho')
  Region region = Region::Gap;
  ScaledReal rho_prime;
  ScaledReal envelope;
};

/// Compares rho' against big_o_const times the region envelope. Throws
/// RegionError for points in the Gap.
BoundCheck thm2_bound_check(const BoundaryParam& bp, double lambda, double eps, double c2, double big_o_const,
                            double rel_tol = kernel::kDefaultTol);

/// Unperturbed density for lambda > 0: sqrt(lambda) / (pi (lambda sin^2 + cos^2)).
double baseline_positive(const BoundaryParam& bp, double lambda);

struct PointMass {
  double location = 0.0;
  double mass = 0.0;
};

/// The delta component (lambda0, 2 ctg(alpha) / sin^2(alpha)) of the
/// unperturbed density.
PointMass baseline_negative_mass(const BoundaryParam& bp);

}  // namespace density
}  // namespace weyldens
