#pragma once

#include <cmath>
#include <limits>
#include <ostream>

namespace hciz {

/// Real number stored as sign and natural log of magnitude.
///
/// Spherical integrals grow like exp(N^2) and overflow doubles long before
/// anything interesting happens; every evaluator returns one of these.
class LogScalar {
 public:
  /// Zero.
  constexpr LogScalar() = default;
  /// Throws DomainError unless sign is in {-1, 0, 1} and consistent with log_abs.
  LogScalar(int sign, double log_abs);

  static constexpr LogScalar zero() { return LogScalar(); }
  static LogScalar one() { return LogScalar(1, 0.0); }
  static LogScalar from_log(double log_value) { return LogScalar(1, log_value); }
  static LogScalar from_double(double x);

  int sign() const { return sign_; }
  double log_abs() const { return log_abs_; }
  bool is_zero() const { return sign_ == 0; }
  /// Natural log of a positive value; throws DomainError otherwise.
  double log() const;
  /// exp back to a double (may overflow to +-inf).
  double to_double() const;

  LogScalar operator-() const;
  friend LogScalar operator*(const LogScalar& x, const LogScalar& y);
  friend LogScalar operator/(const LogScalar& x, const LogScalar& y);
  friend LogScalar operator+(const LogScalar& x, const LogScalar& y);
  friend LogScalar operator-(const LogScalar& x, const LogScalar& y) { return x + (-y); }
  LogScalar& operator*=(const LogScalar& y) { return *this = *this * y; }
  LogScalar& operator+=(const LogScalar& y) { return *this = *this + y; }

  friend bool operator==(const LogScalar&, const LogScalar&) = default;
  friend bool operator<(const LogScalar& x, const LogScalar& y);

 private:
  int sign_ = 0;
  double log_abs_ = -std::numeric_limits<double>::infinity();
};

std::ostream& operator<<(std::ostream& os, const LogScalar& x);

}  // namespace hciz
