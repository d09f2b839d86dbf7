#pragma once

#include <cmath>
#include <limits>
#include <utility>

namespace weyldens {

/// A real number stored as sign and natural log of its magnitude.
///
/// Products and quotients are exact additions in log space, so values such as
/// e^{-2a} with a ~ 1e5 stay representable. Zero is sign 0 with log_mag = -inf.
class ScaledReal {
 public:
  constexpr ScaledReal() = default;

  static ScaledReal from_log(int sign, double log_mag) noexcept {
    if (sign == 0 || log_mag == -std::numeric_limits<double>::infinity()) return {};
    return ScaledReal(sign > 0 ? 1 : -1, log_mag);
  }

  static ScaledReal from_double(double x) noexcept {
    if (x == 0.0) return {};
    return ScaledReal(x > 0 ? 1 : -1, std::log(std::fabs(x)));
  }

  static ScaledReal exp(double exponent) noexcept { return ScaledReal(1, exponent); }

  int sign() const noexcept { return sign_; }
  double log_mag() const noexcept { return log_mag_; }
  double log10_mag() const noexcept { return log_mag_ / std::log(10.0); }
  bool is_zero() const noexcept { return sign_ == 0; }

  /// Linear value; underflows to 0 and overflows to +-inf like std::exp.
  double to_double() const noexcept { return sign_ == 0 ? 0.0 : sign_ * std::exp(log_mag_); }

  /// Linear value, or 0 if the magnitude is below the smallest normal double.
  double to_double_normal() const noexcept {
    if (sign_ == 0 || log_mag_ < std::log(std::numeric_limits<double>::min())) return 0.0;
    return to_double();
  }

  ScaledReal abs() const noexcept { return from_log(sign_ == 0 ? 0 : 1, log_mag_); }
  ScaledReal operator-() const noexcept { return from_log(-sign_, log_mag_); }

  friend ScaledReal operator*(ScaledReal x, ScaledReal y) noexcept {
    if (x.is_zero() || y.is_zero()) return {};
    return ScaledReal(x.sign_ * y.sign_, x.log_mag_ + y.log_mag_);
  }

  friend ScaledReal operator/(ScaledReal x, ScaledReal y) noexcept {
    // Division by zero yields a signed infinity in log space.
    if (x.is_zero()) return {};
    if (y.is_zero()) return ScaledReal(x.sign_, std::numeric_limits<double>::infinity());
    return ScaledReal(x.sign_ * y.sign_, x.log_mag_ - y.log_mag_);
  }

  friend ScaledReal operator+(ScaledReal x, ScaledReal y) noexcept {
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    if (x.log_mag_ < y.log_mag_) std::swap(x, y);
    const double ratio = std::exp(y.log_mag_ - x.log_mag_);
    if (x.sign_ == y.sign_) return ScaledReal(x.sign_, x.log_mag_ + std::log1p(ratio));
    if (ratio == 1.0) return {};
    return ScaledReal(x.sign_, x.log_mag_ + std::log1p(-ratio));
  }

  friend ScaledReal operator-(ScaledReal x, ScaledReal y) noexcept { return x + (-y); }

  ScaledReal square() const noexcept { return sign_ == 0 ? ScaledReal{} : ScaledReal(1, 2.0 * log_mag_); }

  /// Ratio as a plain double; the caller guarantees it is representable.
  friend double ratio(ScaledReal num, ScaledReal den) noexcept { return (num / den).to_double(); }

  friend bool operator<(ScaledReal x, ScaledReal y) noexcept {
    if (x.sign_ != y.sign_) return x.sign_ < y.sign_;
    if (x.sign_ == 0) return false;
    return x.sign_ > 0 ? x.log_mag_ < y.log_mag_ : x.log_mag_ > y.log_mag_;
  }
  friend bool operator>(ScaledReal x, ScaledReal y) noexcept { return y < x; }

 private:
  constexpr ScaledReal(int sign, double log_mag) : sign_(sign), log_mag_(log_mag) {}

  int sign_ = 0;
  double log_mag_ = -std::numeric_limits<double>::infinity();
};

}  // namespace weyldens
