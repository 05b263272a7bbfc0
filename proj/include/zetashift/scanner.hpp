#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "zetashift/distance.hpp"
#include "zetashift/transfer.hpp"

namespace zetashift {

struct ContinuousMode {
  double t_start = 0.0, t_end = 0.0, step = 0.05;
};

struct DiscreteMode {
  double alpha = 1.0;
  std::int64_t n_start = 0, n_end = 0;
};

/// omega(T) = T, or T^a (log T)^b (zero for T <= 1).
struct OmegaSpec {
  enum class Form { Linear, PowerLog } form = Form::Linear;
  double a = 1.0, b = 0.0;

  static OmegaSpec linear() { return {}; }
  static OmegaSpec power_log(double a, double b) { return {Form::PowerLog, a, b}; }

  double operator()(double T) const;
  /// inf of omega(alpha t) / omega(t) over `samples` log-spaced t in [t_lo, t_hi]
  /// and every alpha given.
  double growth_check(const std::vector<double>& alphas, double t_lo = 10.0, double t_hi = 1e6,
                      int samples = 2000) const;
};

struct ScanConfig {
  std::shared_ptr<const ShiftFunction> z;
  MixedTarget target{PolynomialTarget()};
  CompactRegion region = CompactRegion::disc(0.75, 0.01);
  double epsilon = 0.1;
  std::variant<ContinuousMode, DiscreteMode> mode = ContinuousMode{};
  std::optional<HybridConstraint> hybrid;  // conjoined at the same epsilon
  TargetPlacement placement = TargetPlacement::Direct;
  std::optional<WitnessKind> kind;  // defaults to U with a hybrid part, S otherwise
  int independence_height = 12;
  int threads = 1;
  std::string config_hash;

  /// Throws InvalidArgument on a malformed config, IndependenceViolated on
  /// hybrid data the definitions exclude.
  void validate() const;
};

/// One evaluated shift. `level` is 0 on the main grid, 1 for halving points.
struct ScanRow {
  std::int64_t index;
  double shift;
  double sup_distance;
  double hybrid_max;
  bool pass;
  double lipschitz;
  int level;
};

struct ScanResult {
  std::variant<DiscreteWitnessSet, ContinuousWitnessSet> witnesses;
  std::vector<ScanRow> rows;
  std::size_t grid_points_per_shift = 0;
  std::size_t refined_points = 0;
  double max_lipschitz = 0.0;

  const DiscreteWitnessSet& discrete() const { return std::get<DiscreteWitnessSet>(witnesses); }
  const ContinuousWitnessSet& continuous() const { return std::get<ContinuousWitnessSet>(witnesses); }
};

/// Discrete mode: exactly the n whose grid sup-distance (and hybrid distance)
/// is below epsilon. Continuous mode: a grid point passing with margin
/// epsilon - Lip step / 2 contributes [t - step/2, t + step/2]; points within
/// Lip step / 2 of the threshold are re-evaluated at t -+ step/4.
ScanResult scan(const ScanConfig& cfg);

/// scan() restricted to [T, T + omega(T)] (or [N, N + omega(N)]); densities
/// are normalised by omega. Requires growth_check > 0 for the scan's alpha
/// (1 in continuous mode).
ScanResult scan_short_interval(const ScanConfig& cfg, const OmegaSpec& omega, double T);

/// Continuous scan of a tower K1 against the lifted target at threshold
/// epsilon / 2. epsilon = 0 gives the empty set.
ScanResult scan_tower(const ScanConfig& cfg);

/// Calls f(i) for i in [0, count) on up to `threads` workers; rethrows the
/// exception of the lowest failing index.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& f);

}  // namespace zetashift
