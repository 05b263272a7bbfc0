#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "zetashift/core.hpp"
#include "zetashift/regions.hpp"

namespace zetashift {

/// p(s) = sum_k coefficients[k] (s - center)^k.
class PolynomialTarget {
 public:
  PolynomialTarget() : coefficients_{Complex(0.0)} {}
  PolynomialTarget(Complex center, ComplexVec coefficients);

  Complex center() const { return center_; }
  const ComplexVec& coefficients() const { return coefficients_; }
  int degree() const { return int(coefficients_.size()) - 1; }

  Complex operator()(Complex s) const;

 private:
  Complex center_{0.0};
  ComplexVec coefficients_;
};

/// g(s) = exp(p(s)); never zero.
class ExpPolynomialTarget {
 public:
  ExpPolynomialTarget() = default;
  explicit ExpPolynomialTarget(PolynomialTarget exponent) : exponent_(std::move(exponent)) {}

  const PolynomialTarget& exponent() const { return exponent_; }
  Complex operator()(Complex s) const { return std::exp(exponent_(s)); }

 private:
  PolynomialTarget exponent_;
};

/// (exp p_1, ..., exp p_i, p_{i+1}, ..., p_{i+j}), compared in the sup-norm.
class MixedTarget {
 public:
  MixedTarget(std::vector<ExpPolynomialTarget> zero_free,
              std::vector<PolynomialTarget> free);
  MixedTarget(ExpPolynomialTarget g);  // NOLINT: single zero-free component
  MixedTarget(PolynomialTarget p);     // NOLINT: single strong component

  const std::vector<ExpPolynomialTarget>& zero_free() const { return zero_free_; }
  const std::vector<PolynomialTarget>& free() const { return free_; }
  std::size_t arity() const { return zero_free_.size() + free_.size(); }

  void evaluate(Complex s, std::span<Complex> out) const;
  ComplexVec operator()(Complex s) const;

 private:
  std::vector<ExpPolynomialTarget> zero_free_;
  std::vector<PolynomialTarget> free_;
};

/// Simultaneous constraint max_j |lambda_j^{-it} - a_j| < epsilon.
class HybridConstraint {
 public:
  /// Targets are renormalised to modulus one; they must be within 1e-12 of it
  /// already.
  HybridConstraint(std::vector<double> lambdas, ComplexVec targets, double epsilon);

  const std::vector<double>& lambdas() const { return lambdas_; }
  const ComplexVec& targets() const { return targets_; }
  double epsilon() const { return epsilon_; }
  std::size_t size() const { return lambdas_.size(); }

  /// max_j |lambda_j^{-it} - a_j|; zero for an empty constraint.
  double distance(double t) const;
  /// Largest log(lambda_j): a Lipschitz constant of distance().
  double max_log_lambda() const;

 private:
  std::vector<double> lambdas_;
  ComplexVec targets_;
  double epsilon_;
};

using Sample = std::pair<Complex, Complex>;  // (s, f(s))

/// Samples f on the region's grid, in grid order.
std::vector<Sample> sample_on_grid(const CompactRegion& region,
                                   const std::function<Complex(Complex)>& f);

template <typename Target>
struct FitResult {
  Target target;
  double achieved;         // sup over the samples of |target - f|
  int degree;              // degree actually used
  std::size_t grid_points;
};

/// Least-squares fit of the unwrapped log f by a polynomial of the lowest
/// degree <= max_degree whose exponential meets `bound` on the samples.
/// Samples must be ordered along a path (grid order from sample_on_grid).
FitResult<ExpPolynomialTarget> fit_exp_polynomial(const std::vector<Sample>& samples,
                                                  const CompactRegion& region,
                                                  int max_degree, double bound);

/// As fit_exp_polynomial but fits f itself; zeros are allowed.
FitResult<PolynomialTarget> fit_polynomial(const std::vector<Sample>& samples,
                                           const CompactRegion& region,
                                           int max_degree, double bound);

struct ModulusResult {
  double delta;            // returned modulus, safety margin applied
  double delta0;           // d(K, complement of K0)
  double largest_passing;  // before the margin
  std::size_t k_points;
  std::size_t tau_points;
};

/// Largest delta with max_{|tau|<=delta} max_{s in K} |g(s+i tau) - g(s)| < bound,
/// searched by halving then bisection on grids of K and [-delta, delta], capped
/// by delta0 = d(K, complement of K0). K0 must be a rectangle.
ModulusResult continuity_modulus(const MixedTarget& target, const CompactRegion& K,
                                 const CompactRegion& K0, double bound);

/// Grid sup of |g(s+i tau) - g(s)| over K x (tau_points samples of [-delta, delta]).
double shift_variation(const MixedTarget& target, const CompactRegion& K, double delta,
                       std::size_t tau_points);

/// Number of tau samples used for [-delta, delta] at the given density.
std::size_t tau_points_for(double delta, double density);

/// delta1 = margin * bound / log(lambda_k), further capped by margin * cap.
double lambda_modulus(const HybridConstraint& constraint, double bound,
                      std::optional<double> cap = std::nullopt);

}  // namespace zetashift
