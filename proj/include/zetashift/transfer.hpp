#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zetashift/core.hpp"
#include "zetashift/kronecker.hpp"
#include "zetashift/regions.hpp"
#include "zetashift/targets.hpp"

namespace zetashift {

/// Which membership predicate built a discrete set.
///   S: max_{K0} |Z(s+in alpha) - g| < eps/2
///   U: S plus max_j |lambda_j^{-in alpha} - a_j| < eps/2
///   W: U with eps/2 replaced by eps
enum class WitnessKind { S, U, W };

const char* to_string(WitnessKind kind);
WitnessKind witness_kind_from_string(const std::string& s);

/// Shift indices n in [range_start, horizon] that passed the predicate.
/// `epsilon` is the strict bound the predicate actually used.
struct DiscreteWitnessSet {
  double alpha = 1.0;
  std::vector<std::int64_t> members;
  std::int64_t range_start = 0;
  std::int64_t horizon = 0;
  double epsilon = 0.0;
  WitnessKind kind = WitnessKind::S;
  std::string config_hash;
  double window_length = 0.0;  // density normaliser; 0 means horizon - range_start

  /// Sorts, deduplicates and checks the range.
  void normalize();
  /// Members n with lo < n <= hi.
  std::size_t count_in(double lo, double hi) const;
  /// #members / window(), the finite-horizon density.
  double density() const;
  double window() const;
};

struct Interval {
  double lo, hi;
  bool operator==(const Interval&) const = default;
};

/// Disjoint sorted closed intervals inside [start, horizon].
struct ContinuousWitnessSet {
  std::vector<Interval> intervals;
  double start = 0.0;
  double horizon = 0.0;
  double epsilon = 0.0;
  std::string config_hash;

  /// Sorts, merges overlapping or touching intervals and clips to the range.
  void normalize();
  double measure() const;
  /// meas(V intersected with (a, b]).
  double measure_in(double a, double b) const;
  bool contains(double t) const;
  double density() const;
};

/// Union of [n alpha - delta, n alpha + delta] over the members, merged and
/// clipped to [alpha range_start, alpha horizon].
ContinuousWitnessSet neighborhood_expand(const DiscreteWitnessSet& S, double delta);

/// xi2 = xi1 * min(alpha, 2 delta) / alpha; the hybrid case passes delta1.
double density_lower_bound_discrete_to_continuous(double xi1, double alpha, double delta);
/// xi6 = xi5 / (C + 1 + delta).
double density_lower_bound_continuous_to_discrete(double xi5, double C, double delta);

/// Moduli, tower constants and density constants of the whole argument.
struct TransferConstants {
  double delta0 = 0.0, delta = 0.0, delta1 = 0.0;
  TowerParams tower;
  double C = 0.0;        // delta + (M^2 + L L1) alpha
  double C_tight = 0.0;  // delta + (M M1 + L L1) alpha, bounds every bracket
  std::array<double, 6> xi{};  // xi[0] is xi_1; odd indices are derived

  /// Derives C, C_tight, xi_2, xi_4 and xi_6. Requires 0 < delta1 < delta < delta0
  /// and delta == tower.delta(). Measured densities must be finite and >= 0.
  static TransferConstants make(double delta0, double delta, double delta1,
                                const TowerParams& tower, double xi1, double xi3, double xi5);
  /// As make(), additionally requiring the stored derived values to match.
  static TransferConstants from_values(double delta0, double delta, double delta1,
                                       const TowerParams& tower, double C,
                                       const std::array<double, 6>& xi);

  double alpha() const { return tower.alpha(); }
};

struct ShiftDecomposition {
  int m0;
  std::int64_t n0;
  double tau;  // n0 alpha - t - m0 M1 alpha
};

/// Picks m0 in [1, M] putting (t + m0 M1 alpha) / alpha nearest an integer n0.
/// |tau| <= alpha / (2M).
ShiftDecomposition decompose_shift(double t, const TowerParams& tower);

struct DiscreteWitness {
  std::int64_t n;
  ShiftDecomposition parts;
  std::int64_t l0;
  bool within_bracket;        // t - delta <= n alpha <= t + C
  bool within_tight_bracket;  // t - delta <= n alpha <= t + C_tight
  double hybrid_distance;     // max_j |lambda_j^{-in alpha} - a_j| (0 if none)
};

/// n = n0 + l0 L1 for t in a witness set over the tower. The hybrid part, if
/// present, rotates each target by lambda_j^{i n0 alpha} and searches l0 <= L.
/// Throws KroneckerNotFound if no l0 works.
DiscreteWitness continuous_to_discrete_witness(double t, const TransferConstants& tc,
                                               const HybridConstraint* hybrid);

/// lambda^{-i x} for a large real x, reduced in extended precision.
Complex unit_power(double lambda, long double x);

struct CountingRow {
  std::int64_t j;
  std::size_t lhs;  // #{n in W : j - delta < n <= j + C + 1}
  double rhs;       // meas(V in (alpha j, alpha (j+1)]) / alpha
  bool holds;
};

struct CountingVariant {
  std::string name;
  double C;
  double window_low, window_high;  // added to j for the count window
  double multiplicity;             // number of windows a single n can fall in
  std::vector<CountingRow> rows;
  std::vector<std::int64_t> violations;
  double aggregate_lhs;  // multiplicity * #W up to N + window_high
  double aggregate_rhs;  // meas(V up to alpha N) / alpha
  bool aggregate_holds;
  bool holds() const { return violations.empty() && aggregate_holds; }
};

struct CountingReport {
  std::int64_t N;
  double alpha;
  CountingVariant literal;  // windows in index units exactly as stated
  CountingVariant tight;    // literal with C_tight
  CountingVariant scaled;   // windows (j - delta/alpha, j + 1 + C/alpha]
  std::size_t boundary;     // #W_{N+C+1} - #W_N
  bool holds() const { return literal.holds(); }
};

/// Evaluates both counting inequalities for j = 0..N. W must extend to at
/// least N + C + 1 (in the widest variant).
CountingReport counting_inequality_check(const ContinuousWitnessSet& V, const DiscreteWitnessSet& W,
                                         const TransferConstants& tc, std::int64_t N);

struct DensityPoint {
  double checkpoint;
  double density;      // prefix density at the checkpoint
  double running_min;  // min over checkpoints so far
  double tail_min;     // min over this and every later checkpoint
};

struct DensityReport {
  double density;  // at the full horizon
  double window;   // normaliser
  std::vector<DensityPoint> profile;
};

/// Finite-horizon density with dyadic prefix checkpoints 1, 2, 4, ... < window
/// plus the full window, all measured from the start of the range.
DensityReport empirical_density(const DiscreteWitnessSet& ws);
DensityReport empirical_density(const ContinuousWitnessSet& ws);

}  // namespace zetashift
