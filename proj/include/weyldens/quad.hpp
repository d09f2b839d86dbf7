#pragma once

#include <cstddef>
#include <functional>

namespace weyldens::quad {

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;  // always >= 0
  std::size_t evaluations = 0;
};

using Integrand = std::function<double(double)>;

/// Smallest number of integrand evaluations of any call (one 21-point rule).
inline constexpr std::size_t kRuleSize = 21;
inline constexpr std::size_t kDefaultPanelLimit = 2000;
inline constexpr double kAbsoluteFloor = 1e-300;

struct Options {
  std::size_t panel_limit = kDefaultPanelLimit;
  double abs_floor = kAbsoluteFloor;
};

/// Globally adaptive Gauss-Kronrod (G10/K21) integration over [lo, hi].
///
/// Panels are bisected in order of decreasing error estimate until the summed
/// estimate drops below max(rel_tol * |value|, abs_floor). Throws
/// ErrorCode::NonConvergence when the panel limit is reached first.
IntegralResult integrate_finite(const Integrand& f, double lo, double hi, double rel_tol,
                                const Options& opts = {});

/// Integral over [0, inf) of an integrand that eventually decays at least as
/// fast as exp(-decay_rate * t).
///
/// The truncation point T is grown geometrically until the tail bound
/// |f(T)| / decay_rate is below rel_tol/10 of the computed value, and the
/// bound is folded into error_estimate. Throws InvalidDecayHint if no such T
/// is found before t = 1e4 / decay_rate.
IntegralResult integrate_semiinf(const Integrand& f, double rel_tol, double decay_rate,
                                 const Options& opts = {});

}  // namespace weyldens::quad
