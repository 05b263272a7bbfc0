#include "zetashift/zeta.hpp"

#include <array>
#include <cmath>
#include <string>

namespace zetashift {

namespace {

// B_{2k} / (2k)! for k = 1..30.
constexpr std::array<double, 30> kBernoulliOverFactorial = {
    8.3333333333333333333e-2,   -1.3888888888888888889e-3,
    3.3068783068783068783e-5,   -8.2671957671957671958e-7,
    2.0876756987868098979e-8,   -5.2841901386874931848e-10,
    1.3382536530684678833e-11,  -3.3896802963225828668e-13,
    8.5860620562778445641e-15,  -2.174868698558061873e-16,
    5.5090028283602295152e-18,  -1.3954464685812523341e-19,
    3.5347070396294674717e-21,  -8.9535174270375468504e-23,
    2.2679524523376830603e-24,  -5.7447906688722024453e-26,
    1.4551724756148649019e-27,  -3.6859949406653101782e-29,
    9.336734257095044672e-31,   -2.3650224157006299346e-32,
    5.9906717624821343047e-34,  -1.5174548844682902617e-35,
    3.8437581254541882322e-37,  -9.7363530726466910353e-39,
    2.4662470442006809571e-40,  -6.2470767418207436931e-42,
    1.5824030244644914298e-43,  -4.0082736859489359685e-45,
    1.0153075855569556312e-46,  -2.5718041582418717499e-48,
};

constexpr int kMaxDepth = static_cast<int>(kBernoulliOverFactorial.size());

// Neumaier-compensated complex accumulator.
struct CompensatedSum {
  double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;

  static void add(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  void add(double xr, double xi) {
    add(re, cre, xr);
    add(im, cim, xi);
  }

  Complex value() const { return {re + cre, im + cim}; }
};

struct Plan {
  long cutoff;
  int depth;
  double bound;
};

// Johansson's bound for the remainder after `depth` Bernoulli corrections at
// cutoff a = N + beta:
//   |R| <= 4 |(s)_{2M}| / (2 pi)^{2M} * a^{-sigma-2M+1} / (sigma + 2M - 1).
// Returns the smallest depth meeting `target`, or nullopt.
std::optional<Plan> plan_at(Complex s, double a, long cutoff, double target) {
  const double sigma = s.real();
  double log_poch = 0.0;  // log |(s)_{2M}|
  const double log_a = std::log(a);
  const double log_two_pi = std::log(kTwoPi);
  for (int m = 1; m <= kMaxDepth; ++m) {
    log_poch += std::log(std::abs(s + double(2 * m - 2)));
    log_poch += std::log(std::abs(s + double(2 * m - 1)));
    const double denom = sigma + 2.0 * m - 1.0;
    if (denom <= 0.0) continue;
    const double log_bound = std::log(4.0) + log_poch - 2.0 * m * log_two_pi +
                             (-sigma - 2.0 * m + 1.0) * log_a - std::log(denom);
    const double bound = std::exp(log_bound);
    if (bound <= target) return Plan{cutoff, m, bound};
  }
  return std::nullopt;
}

void check_argument(Complex s, double beta, const EvalConfig& cfg) {
  cfg.validate();
  require_finite(s, "zeta argument");
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "Hurwitz beta must lie in (0,1]");
  }
  if (std::abs(s - 1.0) < kPoleGuardRadius) {
    throw Error(ErrorCode::PoleAt1, "argument within guard radius of s = 1");
  }
  if (!(s.real() > kMinSigma)) {
    throw Error(ErrorCode::OutsideDomain,
                "Re(s) must exceed -1, got " + std::to_string(s.real()));
  }
}

}  // namespace

void EvalConfig::validate() const {
  if (!(abs_tolerance >= 1e-15) || !std::isfinite(abs_tolerance)) {
    throw Error(ErrorCode::InvalidArgument,
                "abs_tolerance must be finite and >= 1e-15");
  }
  if (max_terms < 1) {
    throw Error(ErrorCode::InvalidArgument, "max_terms must be positive");
  }
}

Complex eval_hurwitz_zeta(Complex s, double beta, const EvalConfig& cfg,
                          ZetaTrace* trace) {
  check_argument(s, beta, cfg);

  const double target = 0.5 * cfg.abs_tolerance;
  long cutoff = std::max<long>(
      8, static_cast<long>(std::ceil(std::abs(s.imag()) / kTwoPi)));
  std::optional<Plan> plan;
  while (true) {
    if (cutoff > cfg.max_terms) {
      throw Error(ErrorCode::ToleranceUnreachable,
                  "cutoff would exceed max_terms = " +
                      std::to_string(cfg.max_terms));
    }
    plan = plan_at(s, double(cutoff) + beta, cutoff, target);
    if (plan) break;
    cutoff = cutoff + cutoff / 4 + 1;
  }

  const double sigma = s.real();
  const double t = s.imag();

  // Direct part, smallest terms first.
  CompensatedSum sum;
  for (long n = plan->cutoff - 1; n >= 0; --n) {
    const double log_a = std::log(double(n) + beta);
    const double mag = std::exp(-sigma * log_a);
    const double phase = -t * log_a;
    sum.add(mag * std::cos(phase), mag * std::sin(phase));
  }

  // Euler-Maclaurin tail at a = N + beta.
  const double a = double(plan->cutoff) + beta;
  const Complex a_pow = std::exp(-s * std::log(a));  // a^{-s}
  Complex tail = a_pow * a / (s - 1.0) + 0.5 * a_pow;
  Complex poch = s;                // (s)_{2k-1}
  Complex power = a_pow / a;       // a^{-s-2k+1}
  const double inv_a2 = 1.0 / (a * a);
  for (int k = 1; k <= plan->depth; ++k) {
    tail += kBernoulliOverFactorial[k - 1] * poch * power;
    poch *= (s + double(2 * k - 1)) * (s + double(2 * k));
    power *= inv_a2;
  }
  sum.add(tail.real(), tail.imag());

  if (trace) {
    trace->cutoff = plan->cutoff;
    trace->correction_depth = plan->depth;
    trace->truncation_bound = plan->bound;
  }
  return sum.value();
}

Complex eval_hurwitz_zeta(Complex s, double beta, const EvalConfig& cfg) {
  return eval_hurwitz_zeta(s, beta, cfg, nullptr);
}

Complex eval_riemann_zeta(Complex s, const EvalConfig& cfg) {
  return eval_hurwitz_zeta(s, 1.0, cfg, nullptr);
}

}  // namespace zetashift
