#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "zetashift/targets.hpp"

namespace zetashift {

namespace {

using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

void check_samples(const std::vector<Sample>& samples, const CompactRegion& region,
                   int max_degree, double bound) {
  require(!samples.empty(), "fit needs samples");
  require(max_degree >= 0, "degree must be nonnegative");
  require(bound > 0.0 && std::isfinite(bound), "bound must be positive");
  for (const auto& [s, f] : samples) {
    require_finite(s, "sample point");
    require_finite(f, "sample value");
    require(region.contains(s, 1e-9), "sample point outside the region");
  }
}

// Least squares in the scaled basis ((s - c) / rho)^k, returned in the
// unscaled basis (s - c)^k.
PolynomialTarget least_squares(const std::vector<Sample>& samples, const ComplexVec& values,
                               Complex center, double rho, int degree) {
  const auto n = Eigen::Index(samples.size());
  Matrix A(n, degree + 1);
  Vector b(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Complex u = (samples[std::size_t(r)].first - center) / rho;
    Complex p = 1.0;
    for (int k = 0; k <= degree; ++k) {
      A(r, k) = p;
      p *= u;
    }
    b(r) = values[std::size_t(r)];
  }
  const Vector x = A.colPivHouseholderQr().solve(b);
  ComplexVec coeffs(std::size_t(degree) + 1);
  double scale = 1.0;
  for (int k = 0; k <= degree; ++k) {
    coeffs[std::size_t(k)] = x(k) / scale;
    scale *= rho;
  }
  while (coeffs.size() > 1 && coeffs.back() == Complex(0.0)) coeffs.pop_back();
  return PolynomialTarget(center, std::move(coeffs));
}

double wrap_phase(double d) {
  d = std::remainder(d, kTwoPi);  // in [-pi, pi]
  return d;
}

// Continuous branch of log f along the sample path, then a check that grid
// neighbours (not only path neighbours) agree to within pi.
ComplexVec unwrapped_log(const std::vector<Sample>& samples, const CompactRegion& region) {
  ComplexVec logs(samples.size());
  double phase = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const Complex f = samples[k].second;
    if (f == Complex(0.0)) {
      throw Error(ErrorCode::BranchCutFailure, "target vanishes at a sample point");
    }
    const double arg = std::arg(f);
    if (k == 0) {
      phase = arg;
    } else {
      const double step = wrap_phase(arg - std::arg(samples[k - 1].second));
      if (std::abs(step) >= kPi * (1.0 - 1e-12)) {
        throw Error(ErrorCode::BranchCutFailure,
                    "phase jump of pi between samples " + std::to_string(k - 1) +
                        " and " + std::to_string(k));
      }
      phase += step;
    }
    logs[k] = Complex(std::log(std::abs(f)), phase);
  }

  const double radius = 1.5 / region.grid_density();
  auto cell_of = [&](Complex s) {
    return std::make_pair(long(std::floor(s.real() / radius)),
                          long(std::floor(s.imag() / radius)));
  };
  auto key = [](long x, long y) { return (std::uint64_t(std::uint32_t(x)) << 32) | std::uint32_t(y); };
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto [cx, cy] = cell_of(samples[k].first);
    cells[key(cx, cy)].push_back(k);
  }
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto [cx, cy] = cell_of(samples[k].first);
    for (long dx = -1; dx <= 1; ++dx) {
      for (long dy = -1; dy <= 1; ++dy) {
        const auto it = cells.find(key(cx + dx, cy + dy));
        if (it == cells.end()) continue;
        for (std::size_t other : it->second) {
          if (other <= k) continue;
          if (std::abs(samples[other].first - samples[k].first) > radius) continue;
          if (std::abs(logs[other].imag() - logs[k].imag()) >= kPi) {
            throw Error(ErrorCode::BranchCutFailure,
                        "unwrapped phase jumps by pi between neighbouring samples");
          }
        }
      }
    }
  }
  return logs;
}

template <typename Target, typename MakeTarget>
FitResult<Target> fit_ascending(const std::vector<Sample>& samples, const ComplexVec& values,
                                const CompactRegion& region, int max_degree, double bound,
                                MakeTarget make) {
  const Complex center = region.center();
  const double rho = std::max(region.radius(), 1e-12);
  double best = std::numeric_limits<double>::infinity();
  for (int degree = 0; degree <= max_degree; ++degree) {
    if (std::size_t(degree) + 1 > samples.size()) break;
    Target target = make(least_squares(samples, values, center, rho, degree));
    double achieved = 0.0;
    for (const auto& [s, f] : samples) achieved = std::max(achieved, std::abs(target(s) - f));
    if (achieved < bound) return {std::move(target), achieved, degree, samples.size()};
    best = std::min(best, achieved);
  }
  throw Error(ErrorCode::FitBoundNotMet,
              "best sup-grid error " + std::to_string(best) + " with degree <= " +
                  std::to_string(max_degree),
              best);
}

}  // namespace

FitResult<ExpPolynomialTarget> fit_exp_polynomial(const std::vector<Sample>& samples,
                                                  const CompactRegion& region,
                                                  int max_degree, double bound) {
  check_samples(samples, region, max_degree, bound);
  const ComplexVec logs = unwrapped_log(samples, region);
  return fit_ascending<ExpPolynomialTarget>(
      samples, logs, region, max_degree, bound,
      [](PolynomialTarget p) { return ExpPolynomialTarget(std::move(p)); });
}

FitResult<PolynomialTarget> fit_polynomial(const std::vector<Sample>& samples,
                                           const CompactRegion& region, int max_degree,
                                           double bound) {
  check_samples(samples, region, max_degree, bound);
  ComplexVec values;
  values.reserve(samples.size());
  for (const auto& sample : samples) values.push_back(sample.second);
  return fit_ascending<PolynomialTarget>(samples, values, region, max_degree, bound,
                                         [](PolynomialTarget p) { return p; });
}

}  // namespace zetashift
