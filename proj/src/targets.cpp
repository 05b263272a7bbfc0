#include "zetashift/targets.hpp"

#include <algorithm>

namespace zetashift {

PolynomialTarget::PolynomialTarget(Complex center, ComplexVec coefficients)
    : center_(center), coefficients_(std::move(coefficients)) {
  require_finite(center_, "polynomial center");
  require(!coefficients_.empty(), "polynomial needs at least one coefficient");
  for (const auto& c : coefficients_) require_finite(c, "polynomial coefficient");
  if (coefficients_.size() > 1 && coefficients_.back() == Complex(0.0)) {
    throw Error(ErrorCode::InvalidArgument, "leading coefficient must be nonzero");
  }
}

Complex PolynomialTarget::operator()(Complex s) const {
  const Complex u = s - center_;
  Complex acc = coefficients_.back();
  for (auto it = coefficients_.rbegin() + 1; it != coefficients_.rend(); ++it) {
    acc = acc * u + *it;
  }
  return acc;
}

MixedTarget::MixedTarget(std::vector<ExpPolynomialTarget> zero_free,
                         std::vector<PolynomialTarget> free)
    : zero_free_(std::move(zero_free)), free_(std::move(free)) {
  require(arity() >= 1, "mixed target needs i + j >= 1");
}

MixedTarget::MixedTarget(ExpPolynomialTarget g) : zero_free_{std::move(g)} {}

MixedTarget::MixedTarget(PolynomialTarget p) : free_{std::move(p)} {}

void MixedTarget::evaluate(Complex s, std::span<Complex> out) const {
  std::size_t k = 0;
  for (const auto& g : zero_free_) out[k++] = g(s);
  for (const auto& p : free_) out[k++] = p(s);
}

ComplexVec MixedTarget::operator()(Complex s) const {
  ComplexVec out(arity());
  evaluate(s, out);
  return out;
}

HybridConstraint::HybridConstraint(std::vector<double> lambdas, ComplexVec targets,
                                   double epsilon)
    : lambdas_(std::move(lambdas)), targets_(std::move(targets)), epsilon_(epsilon) {
  require(lambdas_.size() == targets_.size(), "one target per lambda");
  require(epsilon_ > 0.0 && std::isfinite(epsilon_), "hybrid epsilon must be positive");
  for (std::size_t j = 0; j < lambdas_.size(); ++j) {
    require(std::isfinite(lambdas_[j]) && lambdas_[j] > 1.0, "lambdas must exceed 1");
    if (j > 0) require(lambdas_[j - 1] < lambdas_[j], "lambdas must be strictly increasing");
    require_finite(targets_[j], "hybrid target");
    const double r = std::abs(targets_[j]);
    require(std::abs(r - 1.0) <= 1e-12, "hybrid targets must have modulus 1");
    targets_[j] /= r;
  }
}

double HybridConstraint::distance(double t) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < lambdas_.size(); ++j) {
    const Complex v = std::polar(1.0, -t * std::log(lambdas_[j]));
    worst = std::max(worst, std::abs(v - targets_[j]));
  }
  return worst;
}

double HybridConstraint::max_log_lambda() const {
  return lambdas_.empty() ? 0.0 : std::log(lambdas_.back());
}

std::vector<Sample> sample_on_grid(const CompactRegion& region,
                                   const std::function<Complex(Complex)>& f) {
  std::vector<Sample> out;
  for (const auto& g : region.grid()) out.emplace_back(g.z, f(g.z));
  return out;
}

double lambda_modulus(const HybridConstraint& constraint, double bound,
                      std::optional<double> cap) {
  require(bound > 0.0 && std::isfinite(bound), "bound must be positive");
  require(constraint.size() > 0, "lambda_modulus needs at least one lambda");
  // |lambda^{-it} - lambda^{-i(t+tau)}| = 2|sin(tau log(lambda)/2)| <= |tau| log(lambda).
  double delta1 = kSafetyMargin * bound / constraint.max_log_lambda();
  if (cap) {
    require(*cap > 0.0, "cap must be positive");
    delta1 = std::min(delta1, kSafetyMargin * *cap);
  }
  return delta1;
}

std::size_t tau_points_for(double delta, double density) {
  return std::max<std::size_t>(9, std::size_t(std::ceil(2.0 * delta * density)) + 1);
}

double shift_variation(const MixedTarget& target, const CompactRegion& K, double delta,
                       std::size_t tau_points) {
  const auto grid = K.grid();
  const std::size_t n = target.arity();
  ComplexVec base(n), moved(n);
  double worst = 0.0;
  for (const auto& g : grid) {
    target.evaluate(g.z, base);
    for (std::size_t k = 0; k < tau_points; ++k) {
      const double tau = -delta + 2.0 * delta * double(k) / double(tau_points - 1);
      target.evaluate(g.z + Complex(0.0, tau), moved);
      for (std::size_t c = 0; c < n; ++c) worst = std::max(worst, std::abs(moved[c] - base[c]));
    }
  }
  return worst;
}

ModulusResult continuity_modulus(const MixedTarget& target, const CompactRegion& K,
                                 const CompactRegion& K0, double bound) {
  require(bound > 0.0 && std::isfinite(bound), "bound must be positive");
  const auto* k0 = std::get_if<Rect>(&K0.shape());
  require(k0 != nullptr, "K0 must be a rectangle");
  const double delta0 = distance_to_complement(K, *k0);
  if (!(delta0 > 0.0)) {
    throw Error(ErrorCode::MarginTooSmall, "K must lie in the interior of K0");
  }
  const double density = K.grid_density();
  auto passes = [&](double delta) {
    return shift_variation(target, K, delta, tau_points_for(delta, density)) < bound;
  };

  double pass = 0.0, fail = delta0;
  if (passes(delta0)) {
    pass = delta0;
  } else {
    double candidate = delta0;
    for (int i = 0; i < 60 && pass == 0.0; ++i) {
      candidate *= 0.5;
      if (passes(candidate)) {
        pass = candidate;
      } else {
        fail = candidate;
      }
    }
    if (pass == 0.0) {
      throw Error(ErrorCode::NoPositiveDelta,
                  "no delta down to delta0 * 2^-60 keeps the variation below the bound");
    }
    for (int i = 0; i < 40; ++i) {
      const double mid = 0.5 * (pass + fail);
      if (passes(mid)) {
        pass = mid;
      } else {
        fail = mid;
      }
    }
  }
  const double delta = kSafetyMargin * pass;
  return {delta, delta0, pass, K.grid().size(), tau_points_for(delta, density)};
}

}  // namespace zetashift
