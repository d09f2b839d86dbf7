#pragma once

#include <complex>

#include "weyldens/density.hpp"

// Independent evaluation of the Weyl-Titchmarsh function through Hankel
// functions of the first kind. Everything here is built from ascending Bessel
// series carried out in 100-digit arithmetic: the imaginary part of m on the
// negative axis is ~e^{-2a} relative to its real part and only survives if
// the I_{-nu} - I_nu cancellation is resolved exactly.
namespace weyldens::oracle {

using ComplexValue = std::complex<double>;

/// Exact rational Bessel order num/den. Only non-integer orders are accepted.
struct Order {
  int num = 1;
  int den = 3;
  double value() const noexcept { return static_cast<double>(num) / den; }
};

inline constexpr Order kOneThird{1, 3};
inline constexpr Order kMinusTwoThirds{-2, 3};

/// Largest |z| (or a) the ascending series are used for.
inline constexpr double kSeriesRange = 40.0;

/// J_nu(z), principal branch of z^nu. RangeError for |z| > kSeriesRange.
ComplexValue bessel_j_series(Order nu, ComplexValue z);

/// H^(1)_nu(z) = [J_{-nu}(z) - e^{-i nu pi} J_nu(z)] / (i sin(nu pi)), principal branch.
ComplexValue hankel1(Order nu, ComplexValue z);

/// H^(2)_nu(z) = [J_{-nu}(z) - e^{i nu pi} J_nu(z)] / (-i sin(nu pi)), principal branch.
ComplexValue hankel2(Order nu, ComplexValue z);

/// H^(1)_nu on the sheet z = modulus * e^{i pi phase_num / phase_den}; the
/// phase is taken literally, not reduced to (-pi, pi].
ComplexValue hankel1_on_sheet(Order nu, double modulus, int phase_num, int phase_den);

/// I_nu(a) from its ascending series, a in (0, kSeriesRange].
double modified_bessel_i(Order nu, double a);

/// K_nu(a) = pi (I_{-nu}(a) - I_nu(a)) / (2 sin(nu pi)).
double modified_bessel_k(Order nu, double a);

/// m(lambda, eps) from the Hankel representation.
///
/// For lambda < 0 the argument A = 2 lambda^{3/2} / (3 eps) is continued to
/// arg A = 3 pi / 2 (the value reached from lambda > 0 through the upper half
/// plane) and sqrt(lambda) = i |lambda|^{1/2}. RangeError when a = |A| exceeds
/// kSeriesRange on the negative axis; for lambda > 0 and A > kSeriesRange the
/// large-argument Hankel expansion is used. PoleProximity when the denominator
/// is below 1e-13 of the numerator.
ComplexValue m_weyl(const BoundaryParam& bp, double lambda, double eps);

/// -Im m(lambda, eps) / pi.
double rho_prime_oracle(const BoundaryParam& bp, double lambda, double eps);

}  // namespace weyldens::oracle
