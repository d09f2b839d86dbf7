#pragma once

#include <functional>
#include <span>
#include <vector>

#include "weyldens/density.hpp"

namespace weyldens::resonance {

struct Tolerances {
  double root_rel = 1e-13;   // bracket width relative to |lambda0|
  double kernel_rel = kernel::kDefaultTol;
  double mass_rel = 1e-9;
  double cross_check_rel = 1e-4;  // substituted vs plain peak integral
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// The critical segment [-2 ctg^2, -ctg^2 / 2].
Interval critical_segment(const BoundaryParam& bp);

/// Zero of T(., eps) on the critical segment (Brent's method). Throws
/// NoBracket when T has the same sign at both ends, and also when eps is not
/// below c3.
double locate_zero(const BoundaryParam& bp, double eps, const Tolerances& tol = {}, double c3 = Constants{}.c3);

struct DriftFit {
  double slope = 0.0;        // coefficient of eps in lambda1 - lambda0 = slope eps + q eps^2
  double curvature = 0.0;    // q
  double quadratic_residual_bound = 0.0;  // max |lambda1 - lambda0 + eps tan(alpha)/2| / eps^2
  std::vector<double> lambda1;
};

/// Least-squares fit of lambda1(eps) - lambda0 on {eps, eps^2}; needs at least
/// five grid points.
DriftFit drift_fit(const BoundaryParam& bp, std::span<const double> eps_grid, const Tolerances& tol = {},
                   double c3 = Constants{}.c3);

/// Step used to probe the flanks of the peak: exp(-ctg^3 / (2 eps)).
double width_probe_step(const BoundaryParam& bp, double eps);

/// Half-width of the resonance from a three-point Lorentzian fit around
/// lambda1. Throws ModelMismatch if the fit produces a non-positive width or
/// one below 1e3 ulps of lambda1, where the peak cannot be resolved.
double peak_width(const BoundaryParam& bp, double eps, double lambda1, const Tolerances& tol = {});

struct AdmissibleWindow {
  double lo = 0.0;  // exp(-ctg^3 / (3 eps))
  double hi = 0.0;  // eps^2
  bool contains(double d) const noexcept { return lo <= d && d <= hi; }
  bool empty() const noexcept { return lo > hi; }
};

AdmissibleWindow admissible_window(const BoundaryParam& bp, double eps);

struct PeakMass {
  double mass = 0.0;             // arctangent-substituted integral
  double mass_unsubstituted = 0.0;
  double lambda1 = 0.0;
  double width = 0.0;
  double d = 0.0;
  bool in_admissible_window = false;
  double achieved_rel_tol = 0.0;  // quadrature tolerance actually met by the substituted pass
};

/// Integral of rho' over [lambda1 - d, lambda1 + d].
///
/// d must satisfy width < d <= eps^2; the narrower window from the peak-mass
/// estimate is reported through in_admissible_window. Throws
/// CrossCheckMismatch when the two quadratures disagree.
PeakMass peak_mass(const BoundaryParam& bp, double eps, double d, const Tolerances& tol = {}, double c3 = Constants{}.c3);

/// Same, for an already located resonance.
PeakMass peak_mass_at(const BoundaryParam& bp, double eps, double d, double lambda1, double width,
                      const Tolerances& tol = {});

using TestFunction = std::function<double(double)>;

struct WeakPairing {
  double total = 0.0;
  double peak_part = 0.0;
  double off_peak_part = 0.0;
  double d = 0.0;
  double achieved_rel_tol = 0.0;
};

/// int_I g(lambda) rho'(lambda, eps) d lambda, split into the peak window of
/// half-width d (default eps^2) and the rest of the critical segment.
WeakPairing weak_convergence_test(const BoundaryParam& bp, double eps, const TestFunction& g, double d = 0.0,
                                  const Tolerances& tol = {}, double c3 = Constants{}.c3);

struct ResonanceReport {
  double eps = 0.0;
  double lambda1 = 0.0;
  double width = 0.0;
  double mass = 0.0;
  double d_used = 0.0;
  double drift_prediction = 0.0;  // lambda0 - eps tan(alpha) / 2
  double drift_residual = 0.0;    // lambda1 - drift_prediction
};

/// Full report for one eps; d <= 0 selects the default d = eps^2.
ResonanceReport analyze(const BoundaryParam& bp, double eps, double d = 0.0, const Tolerances& tol = {},
                        double c3 = Constants{}.c3);

}  // namespace weyldens::resonance
