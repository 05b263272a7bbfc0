#pragma once

#include <vector>

#include "zetashift/regions.hpp"
#include "zetashift/targets.hpp"
#include "zetashift/zeta.hpp"

namespace zetashift {

/// How the target is read on a shifted union.
enum class TargetPlacement {
  Direct,  // target(s) at every grid point s
  Lifted,  // h(s + i shift_piece) := target(s), the piecewise lift onto a tower
};

/// Grid of K with the target values precomputed, reused across many shifts.
class DistanceProbe {
 public:
  DistanceProbe(const CompactRegion& K, const MixedTarget& target,
                TargetPlacement placement = TargetPlacement::Direct);

  /// max over the grid of |Z(s + i shift) - target(s)| in the sup-norm.
  double sup_distance(const ShiftFunction& Z, double shift) const;

  std::size_t grid_points() const { return points_.size(); }
  double grid_density() const { return density_; }
  std::size_t arity() const { return arity_; }

 private:
  std::vector<Complex> points_;
  std::vector<Complex> target_values_;  // arity_ values per point
  std::size_t arity_;
  double density_;
};

/// One-shot form of DistanceProbe::sup_distance.
double sup_distance(const ShiftFunction& Z, double shift, const MixedTarget& target,
                    const CompactRegion& K,
                    TargetPlacement placement = TargetPlacement::Direct);

}  // namespace zetashift
