#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace zetashift {

using Complex = std::complex<double>;
using ComplexVec = std::vector<Complex>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Factor applied wherever a strict inequality is turned into a returned value.
inline constexpr double kSafetyMargin = 0.9;

enum class ErrorCode {
  InvalidArgument,
  NonFinite,
  PoleAt1,
  OutsideDomain,
  ToleranceUnreachable,
  DivisionNearZero,
  BranchCutFailure,
  FitBoundNotMet,
  NoPositiveDelta,
  MarginTooSmall,
  OverlapDetected,
  CapExceeded,
  KroneckerNotFound,
  IndependenceViolated,
  SchemaError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure in the library is reported through this exception. `value()`
/// carries a numeric payload for the codes that have one (the achieved fit
/// error for FitBoundNotMet, the offending modulus for DivisionNearZero).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<double> value = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        value_(value) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<double> value() const noexcept { return value_; }

 private:
  ErrorCode code_;
  std::optional<double> value_;
};

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline void require_finite(Complex z, std::string_view what) {
  if (!is_finite(z)) {
    throw Error(ErrorCode::NonFinite, std::string(what) + " is not finite");
  }
}

inline void require(bool condition, std::string_view what) {
  if (!condition) throw Error(ErrorCode::InvalidArgument, std::string(what));
}

/// Sup-norm on C^n.
inline double sup_norm(const ComplexVec& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

/// Vertical strip sigma1 < Re(s) < sigma2; either side may be infinite.
struct Strip {
  double sigma1 = -std::numeric_limits<double>::infinity();
  double sigma2 = std::numeric_limits<double>::infinity();

  Strip() = default;
  Strip(double lo, double hi) : sigma1(lo), sigma2(hi) {
    if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
      throw Error(ErrorCode::InvalidArgument, "strip requires sigma1 < sigma2");
    }
  }

  bool contains(double sigma) const { return sigma1 < sigma && sigma < sigma2; }
};

}  // namespace zetashift
