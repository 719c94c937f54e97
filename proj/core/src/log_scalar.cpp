#include "hciz/log_scalar.hpp"

#include <string>

#include "hciz/errors.hpp"

namespace hciz {

LogScalar::LogScalar(int sign, double log_abs) : sign_(sign), log_abs_(log_abs) {
  if (sign < -1 || sign > 1) throw DomainError("LogScalar sign must be -1, 0 or 1");
  if (std::isnan(log_abs)) throw DomainError("LogScalar magnitude is NaN");
  const bool zero_mag = log_abs == -std::numeric_limits<double>::infinity();
  if ((sign == 0) != zero_mag) throw DomainError("LogScalar: sign 0 iff log_abs = -inf");
}

LogScalar LogScalar::from_double(double x) {
  if (std::isnan(x)) throw DomainError("LogScalar::from_double(NaN)");
  if (x == 0.0) return zero();
  return LogScalar(x > 0.0 ? 1 : -1, std::log(std::abs(x)));
}

double LogScalar::log() const {
  if (sign_ != 1)
    throw DomainError("log of a non-positive LogScalar (sign " + std::to_string(sign_) + ")");
  return log_abs_;
}

double LogScalar::to_double() const { return sign_ == 0 ? 0.0 : sign_ * std::exp(log_abs_); }

LogScalar LogScalar::operator-() const {
  LogScalar r = *this;
  r.sign_ = -sign_;
  return r;
}

LogScalar operator*(const LogScalar& x, const LogScalar& y) {
  if (x.is_zero() || y.is_zero()) return LogScalar::zero();
  return LogScalar(x.sign_ * y.sign_, x.log_abs_ + y.log_abs_);
}

LogScalar operator/(const LogScalar& x, const LogScalar& y) {
  if (y.is_zero()) throw DomainError("LogScalar division by zero");
  if (x.is_zero()) return LogScalar::zero();
  return LogScalar(x.sign_ * y.sign_, x.log_abs_ - y.log_abs_);
}

LogScalar operator+(const LogScalar& x, const LogScalar& y) {
  if (x.is_zero()) return y;
  if (y.is_zero()) return x;
  const LogScalar& big = x.log_abs_ >= y.log_abs_ ? x : y;
  const LogScalar& small = x.log_abs_ >= y.log_abs_ ? y : x;
  const double ratio = std::exp(small.log_abs_ - big.log_abs_);
  if (big.sign_ == small.sign_) return LogScalar(big.sign_, big.log_abs_ + std::log1p(ratio));
  if (ratio == 1.0) return LogScalar::zero();
  return LogScalar(big.sign_, big.log_abs_ + std::log1p(-ratio));
}

bool operator<(const LogScalar& x, const LogScalar& y) {
  if (x.sign_ != y.sign_) return x.sign_ < y.sign_;
  if (x.sign_ == 0) return false;
  return x.sign_ > 0 ? x.log_abs_ < y.log_abs_ : x.log_abs_ > y.log_abs_;
}

std::ostream& operator<<(std::ostream& os, const LogScalar& x) {
  return os << (x.sign() < 0 ? "-" : (x.sign() == 0 ? "0*" : "+")) << "exp(" << x.log_abs() << ")";
}

}  // namespace hciz
