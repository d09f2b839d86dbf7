#pragma once

#include "weyldens/scaled_real.hpp"

namespace weyldens::kernel {

/// The two Bessel orders the spectral density is built from.
enum class Order { OneThird, TwoThirds };

constexpr double value_of(Order p) noexcept { return p == Order::OneThird ? 1.0 / 3.0 : 2.0 / 3.0; }

inline constexpr double kDefaultTol = 1e-12;

/// Omega_p(a) = (1/pi) int_0^pi exp(a cos t) cos(p t) dt.
///
/// Evaluated as e^{-a} Omega_p(a) on the bounded integrand exp(-2a sin^2(t/2)) cos(pt),
/// then rescaled by adding a to the log magnitude.
ScaledReal omega(Order p, double a, double rel_tol = kDefaultTol);

/// B^-_p(a) = (1/pi) int_0^inf exp(-a ch t) sh(p t) dt.
ScaledReal b_minus(Order p, double a, double rel_tol = kDefaultTol);

/// B^+_p(a) = (1/pi) int_0^inf exp(-a ch t) ch(p t) dt, i.e. K_p(a) / pi.
ScaledReal b_plus(Order p, double a, double rel_tol = kDefaultTol);

/// Omega_{1/3}(a) - Omega_{2/3}(a) from its own positive integrand
/// 2 sin(t/2) sin(t/6) exp(a cos t), free of the cancellation in the difference.
ScaledReal omega_gap(double a, double rel_tol = kDefaultTol);

struct KernelSet {
  double a = 0.0;
  ScaledReal omega_13;
  ScaledReal omega_23;
  ScaledReal bminus_13;
  ScaledReal bminus_23;
  ScaledReal bplus_13;
  ScaledReal bplus_23;
  ScaledReal omega_gap;  // omega_13 - omega_23
};

KernelSet kernel_set(double a, double rel_tol = kDefaultTol);

/// The four ratios entering the density.
///
/// b11 and b12 are O(1) and stored linearly. b21 and b22 behave like e^{-2a}
/// and are kept scaled so they survive large a. The deficits b11 - 1 and
/// 1 - b12 are carried separately at full relative precision; the resonance
/// condition is a cancellation between O(1) terms that needs them.
struct BetaMatrix {
  double b11 = 0.0;
  double b12 = 0.0;
  ScaledReal b21;
  ScaledReal b22;
  double b11_excess = 0.0;   // b11 - 1
  double b12_deficit = 0.0;  // 1 - b12
};

BetaMatrix beta_matrix(const KernelSet& ks);

}  // namespace weyldens::kernel
