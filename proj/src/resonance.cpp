#include "weyldens/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "weyldens/error.hpp"
#include "weyldens/quad.hpp"

namespace weyldens::resonance {
namespace {

void require_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    std::ostringstream msg;
    msg << "eps must be positive, got " << eps;
    fail(ErrorCode::DomainError, msg.str());
  }
}

ScaledReal density_at(const BoundaryParam& bp, double lambda, double eps, const Tolerances& tol) {
  return density::rho_prime(bp, lambda, eps, Constants{}.c2, tol.kernel_rel).rho_prime;
}

ScaledReal density_near(const BoundaryParam& bp, double center, double offset, double eps, const Tolerances& tol) {
  return density::rho_prime_near(bp, center, offset, eps, Constants{}.c2, tol.kernel_rel).rho_prime;
}

// Brent's method on a sign-changing bracket [lo, hi] with values flo, fhi.
template <typename F>
double brent(F&& f, double lo, double hi, double flo, double fhi, double abs_tol) {
  double a = lo, b = hi, fa = flo, fb = fhi;
  double c = a, fc = fa, d = b - a, e = d;
  constexpr double macheps = std::numeric_limits<double>::epsilon();
  for (int iter = 0; iter < 200; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * macheps * std::fabs(b) + 0.5 * abs_tol;
    const double m = 0.5 * (c - b);
    if (std::fabs(m) <= tol1 || fb == 0.0) return b;
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      // Secant or inverse quadratic interpolation.
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::fabs(tol1 * q), std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::fabs(d) > tol1 ? d : (m > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  fail(ErrorCode::NonConvergence, "root solver exceeded its iteration limit");
}

// At the smallest eps the peak is ~1e-12 wide and rounding in the kernel sums
// (~1e-18 absolute in 1 - b12) leaves the integrand noisy at ~1e-6 relative.
// The tolerance is relaxed by decades down to kLoosestPeakTol when the
// requested one is out of reach; intermediate attempts get a short panel
// budget so an unreachable tolerance is abandoned quickly. The tolerance that
// was met is reported back.
constexpr double kLoosestPeakTol = 1e-5;
constexpr std::size_t kTrialPanels = 300;
constexpr double kResolvableUlps = 1e3;

double integrate_peak(const quad::Integrand& f, double lo, double hi, double rel_tol, double& used_tol,
                      const quad::Options& opts = {}) {
  double current = std::min(rel_tol, kLoosestPeakTol);
  while (true) {
    quad::Options attempt = opts;
    if (current < kLoosestPeakTol) attempt.panel_limit = kTrialPanels;
    try {
      const double value = quad::integrate_finite(f, lo, hi, current, attempt).value;
      used_tol = std::max(used_tol, current);
      return value;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonConvergence || current >= kLoosestPeakTol) throw;
      current = std::min(10.0 * current, kLoosestPeakTol);
    }
  }
}

}  // namespace

Interval critical_segment(const BoundaryParam& bp) {
  const double ctg2 = bp.cot_alpha() * bp.cot_alpha();
  return {-2.0 * ctg2, -0.5 * ctg2};
}

double locate_zero(const BoundaryParam& bp, double eps, const Tolerances& tol, double c3) {
  require_eps(eps);
  if (!(eps < c3)) {
    std::ostringstream msg;
    msg << "eps = " << eps << " is not below the resonance validity threshold c3 = " << c3;
    fail(ErrorCode::NoBracket, msg.str());
  }
  const Interval seg = critical_segment(bp);
  auto t_of = [&](double lambda) { return density::t_function(bp, lambda, eps, tol.kernel_rel); };
  const double t_lo = t_of(seg.lo);
  const double t_hi = t_of(seg.hi);
  if (t_lo == 0.0) return seg.lo;
  if (t_hi == 0.0) return seg.hi;
  if ((t_lo > 0.0) == (t_hi > 0.0)) {
    std::ostringstream msg;
    msg << "T(lambda, eps = " << eps << ") has the same sign at both ends of [" << seg.lo << ", " << seg.hi << "]";
    fail(ErrorCode::NoBracket, msg.str());
  }
  return brent(t_of, seg.lo, seg.hi, t_lo, t_hi, tol.root_rel * std::fabs(bp.lambda0()));
}

DriftFit drift_fit(const BoundaryParam& bp, std::span<const double> eps_grid, const Tolerances& tol, double c3) {
  if (eps_grid.size() < 5) fail(ErrorCode::InvalidArgument, "drift_fit needs at least five eps values");
  DriftFit fit;
  // Normal equations for y = s e + q e^2.
  double s11 = 0.0, s12 = 0.0, s22 = 0.0, r1 = 0.0, r2 = 0.0;
  for (double eps : eps_grid) {
    const double lambda1 = locate_zero(bp, eps, tol, c3);
    fit.lambda1.push_back(lambda1);
    const double y = lambda1 - bp.lambda0();
    const double e2 = eps * eps;
    s11 += e2;
    s12 += e2 * eps;
    s22 += e2 * e2;
    r1 += eps * y;
    r2 += e2 * y;
    const double predicted = bp.lambda0() - 0.5 * eps * bp.tan_alpha();
    fit.quadratic_residual_bound = std::max(fit.quadratic_residual_bound, std::fabs(lambda1 - predicted) / e2);
  }
  const double det = s11 * s22 - s12 * s12;
  if (!(std::fabs(det) > 0.0)) fail(ErrorCode::InvalidArgument, "eps grid is degenerate");
  fit.slope = (r1 * s22 - r2 * s12) / det;
  fit.curvature = (s11 * r2 - s12 * r1) / det;
  return fit;
}

double width_probe_step(const BoundaryParam& bp, double eps) {
  const double c = bp.cot_alpha();
  return std::exp(-c * c * c / (2.0 * eps));
}

double peak_width(const BoundaryParam& bp, double eps, double lambda1, const Tolerances& tol) {
  require_eps(eps);
  const double step = width_probe_step(bp, eps);
  const ScaledReal center = density_near(bp, lambda1, 0.0, eps, tol);
  const ScaledReal left = density_near(bp, lambda1, -step, eps, tol);
  const ScaledReal right = density_near(bp, lambda1, step, eps, tol);
  // 1/rho' is quadratic in the offset for a Lorentzian; averaging both flanks
  // removes the linear asymmetry.
  const double excess = 0.5 * (ratio(center, left) + ratio(center, right)) - 1.0;
  if (!(excess > 0.0) || !std::isfinite(excess)) {
    std::ostringstream msg;
    msg << "three-point Lorentzian fit failed at lambda1 = " << lambda1 << ", eps = " << eps
        << " (peak/flank excess " << excess << ")";
    fail(ErrorCode::ModelMismatch, msg.str());
  }
  const double width = step / std::sqrt(excess);
  // The zero of T is only known to a few ulps of lambda1; a narrower peak is
  // noise, not a Lorentzian.
  const double floor = kResolvableUlps * std::numeric_limits<double>::epsilon() * std::fabs(lambda1);
  if (!(width >= floor)) {
    std::ostringstream msg;
    msg << "peak width " << width << " at eps = " << eps << " is below the double-precision resolution " << floor
        << " near lambda1 = " << lambda1;
    fail(ErrorCode::ModelMismatch, msg.str());
  }
  return width;
}

AdmissibleWindow admissible_window(const BoundaryParam& bp, double eps) {
  const double c = bp.cot_alpha();
  return {std::exp(-c * c * c / (3.0 * eps)), eps * eps};
}

PeakMass peak_mass_at(const BoundaryParam& bp, double eps, double d, double lambda1, double width,
                      const Tolerances& tol) {
  require_eps(eps);
  if (!(d > width) || !(d <= eps * eps)) {
    std::ostringstream msg;
    msg << "peak window half-width d = " << d << " must satisfy width (" << width << ") < d <= eps^2 (" << eps * eps
        << ")";
    fail(ErrorCode::DomainError, msg.str());
  }

  PeakMass out;
  out.lambda1 = lambda1;
  out.width = width;
  out.d = d;
  out.in_admissible_window = admissible_window(bp, eps).contains(d);

  // lambda = lambda1 + w tan(theta) flattens the Lorentzian core.
  auto substituted = [&](double theta) {
    const double cs = std::cos(theta);
    return density_near(bp, lambda1, width * std::tan(theta), eps, tol).to_double() * width / (cs * cs);
  };
  const double theta_max = std::atan(d / width);
  out.mass = integrate_peak(substituted, -theta_max, 0.0, tol.mass_rel, out.achieved_rel_tol) +
             integrate_peak(substituted, 0.0, theta_max, tol.mass_rel, out.achieved_rel_tol);

  // Plain pass: integrate over the raw offset from lambda1, no change of variable.
  auto plain = [&](double x) { return density_near(bp, lambda1, x, eps, tol).to_double(); };
  const double plain_tol = std::max(tol.mass_rel, 1e-3 * tol.cross_check_rel);
  double plain_used = 0.0;
  out.mass_unsubstituted = integrate_peak(plain, -d, 0.0, plain_tol, plain_used) +
                           integrate_peak(plain, 0.0, d, plain_tol, plain_used);

  if (std::fabs(out.mass - out.mass_unsubstituted) > tol.cross_check_rel * std::fabs(out.mass)) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "peak quadratures disagree: substituted " << out.mass << " vs plain " << out.mass_unsubstituted;
    fail(ErrorCode::CrossCheckMismatch, msg.str());
  }
  return out;
}

PeakMass peak_mass(const BoundaryParam& bp, double eps, double d, const Tolerances& tol, double c3) {
  const double lambda1 = locate_zero(bp, eps, tol, c3);
  const double width = peak_width(bp, eps, lambda1, tol);
  return peak_mass_at(bp, eps, d, lambda1, width, tol);
}

WeakPairing weak_convergence_test(const BoundaryParam& bp, double eps, const TestFunction& g, double d,
                                  const Tolerances& tol, double c3) {
  const double lambda1 = locate_zero(bp, eps, tol, c3);
  const double width = peak_width(bp, eps, lambda1, tol);
  WeakPairing out;
  out.d = d > 0.0 ? d : eps * eps;
  if (!(out.d > width) || !(out.d <= eps * eps)) fail(ErrorCode::DomainError, "peak window outside (width, eps^2]");

  auto substituted = [&](double theta) {
    const double cs = std::cos(theta);
    const double offset = width * std::tan(theta);
    return g(lambda1 + offset) * density_near(bp, lambda1, offset, eps, tol).to_double() * width / (cs * cs);
  };
  const double theta_max = std::atan(out.d / width);
  out.peak_part = integrate_peak(substituted, -theta_max, 0.0, tol.mass_rel, out.achieved_rel_tol) +
                  integrate_peak(substituted, 0.0, theta_max, tol.mass_rel, out.achieved_rel_tol);

  // The remainder is tiny next to the peak; resolve it relative to the peak
  // contribution rather than to itself.
  quad::Options opts;
  opts.abs_floor = std::max(1e-3 * tol.mass_rel * std::fabs(out.peak_part), quad::kAbsoluteFloor);
  auto plain = [&](double lambda) { return g(lambda) * density_at(bp, lambda, eps, tol).to_double(); };
  const Interval seg = critical_segment(bp);
  if (seg.lo < lambda1 - out.d) out.off_peak_part += integrate_peak(plain, seg.lo, lambda1 - out.d, tol.mass_rel, out.achieved_rel_tol, opts);
  if (lambda1 + out.d < seg.hi) out.off_peak_part += integrate_peak(plain, lambda1 + out.d, seg.hi, tol.mass_rel, out.achieved_rel_tol, opts);

  out.total = out.peak_part + out.off_peak_part;
  return out;
}

ResonanceReport analyze(const BoundaryParam& bp, double eps, double d, const Tolerances& tol, double c3) {
  ResonanceReport r;
  r.eps = eps;
  r.lambda1 = locate_zero(bp, eps, tol, c3);
  r.width = peak_width(bp, eps, r.lambda1, tol);
  r.d_used = d > 0.0 ? d : eps * eps;
  r.mass = peak_mass_at(bp, eps, r.d_used, r.lambda1, r.width, tol).mass;
  r.drift_prediction = bp.lambda0() - 0.5 * eps * bp.tan_alpha();
  r.drift_residual = r.lambda1 - r.drift_prediction;
  return r;
}

}  // namespace weyldens::resonance
