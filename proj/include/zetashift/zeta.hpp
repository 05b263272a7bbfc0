#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "zetashift/core.hpp"

namespace zetashift {

/// Accuracy contract for a single zeta evaluation.
struct EvalConfig {
  double abs_tolerance = 1e-10;
  long max_terms = 2'000'000;

  void validate() const;
};

// Evaluation is refused, not approximated, inside this radius around s = 1.
inline constexpr double kPoleGuardRadius = 1e-9;
// Ratio denominators with smaller modulus raise DivisionNearZero.
inline constexpr double kDivisionGuard = 1e-12;
// Supported half-plane is Re(s) > kMinSigma.
inline constexpr double kMinSigma = -1.0;

/// Riemann zeta by Euler-Maclaurin summation. The truncation error is bounded
/// rigorously and kept below half the tolerance; the other half is left for
/// rounding in the partial sum.
Complex eval_riemann_zeta(Complex s, const EvalConfig& cfg = {});

/// Hurwitz zeta sum_{n>=0} (n+beta)^{-s}, beta in (0,1]. Shares the code path
/// of eval_riemann_zeta, which is the beta = 1 case.
Complex eval_hurwitz_zeta(Complex s, double beta, const EvalConfig& cfg = {});

/// Diagnostics for one Euler-Maclaurin evaluation.
struct ZetaTrace {
  long cutoff = 0;           // terms summed directly
  int correction_depth = 0;  // Bernoulli corrections used
  double truncation_bound = 0.0;
};

Complex eval_hurwitz_zeta(Complex s, double beta, const EvalConfig& cfg,
                          ZetaTrace* trace);

/// s -> scale * s + offset
struct AffineMap {
  double scale = 1.0;
  double offset = 0.0;

  Complex apply(Complex s) const { return scale * s + offset; }

  bool operator==(const AffineMap&) const = default;
};

/// Description of a candidate universal function. Scalar variants evaluate to
/// one component; a Tuple evaluates to one component per child.
class ZSpec {
 public:
  enum class Kind { Riemann, Hurwitz, Ratio, Product, Tuple };

  static ZSpec riemann();
  static ZSpec hurwitz(double beta);
  /// numerator(s) / denominator(map(s)); the denominator defaults to the
  /// numerator, so ratio(riemann(), {2, 0}) is zeta(s)/zeta(2s).
  static ZSpec ratio(ZSpec numerator, AffineMap denominator_map);
  static ZSpec ratio(ZSpec numerator, ZSpec denominator,
                     AffineMap denominator_map);
  static ZSpec product(std::vector<ZSpec> factors);
  static ZSpec tuple(std::vector<ZSpec> components);

  Kind kind() const { return kind_; }
  double beta() const { return beta_; }
  const AffineMap& map() const { return map_; }
  const std::vector<ZSpec>& children() const { return children_; }

  std::size_t arity() const;

  bool operator==(const ZSpec&) const = default;

 private:
  ZSpec() = default;

  Kind kind_ = Kind::Riemann;
  double beta_ = 1.0;
  AffineMap map_{};
  std::vector<ZSpec> children_;
};

/// Componentwise evaluation; the result has zspec.arity() entries.
ComplexVec eval_zspec(const ZSpec& z, Complex s, const EvalConfig& cfg = {});

/// A function C -> C^n whose vertical shifts are scanned. ZSpecs are the
/// usual instance; tests also plug in synthetic functions with known witness
/// sets.
class ShiftFunction {
 public:
  virtual ~ShiftFunction() = default;
  virtual std::size_t arity() const = 0;
  virtual void evaluate(Complex s, std::span<Complex> out) const = 0;

  ComplexVec operator()(Complex s) const {
    ComplexVec out(arity());
    evaluate(s, out);
    return out;
  }
};

class ZSpecFunction final : public ShiftFunction {
 public:
  explicit ZSpecFunction(ZSpec spec, EvalConfig cfg = {});

  std::size_t arity() const override { return arity_; }
  void evaluate(Complex s, std::span<Complex> out) const override;

  const ZSpec& spec() const { return spec_; }
  const EvalConfig& config() const { return cfg_; }

 private:
  ZSpec spec_;
  EvalConfig cfg_;
  std::size_t arity_;
};

class LambdaFunction final : public ShiftFunction {
 public:
  using Fn = std::function<void(Complex, std::span<Complex>)>;

  LambdaFunction(std::size_t arity, Fn fn) : arity_(arity), fn_(std::move(fn)) {}

  /// Scalar convenience wrapper.
  static LambdaFunction scalar(std::function<Complex(Complex)> f);

  std::size_t arity() const override { return arity_; }
  void evaluate(Complex s, std::span<Complex> out) const override {
    fn_(s, out);
  }

 private:
  std::size_t arity_;
  Fn fn_;
};

}  // namespace zetashift
