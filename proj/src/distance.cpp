#include "zetashift/distance.hpp"

namespace zetashift {

DistanceProbe::DistanceProbe(const CompactRegion& K, const MixedTarget& target,
                             TargetPlacement placement)
    : arity_(target.arity()), density_(K.grid_density()) {
  const auto grid = K.grid();
  points_.reserve(grid.size());
  target_values_.resize(grid.size() * arity_);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    points_.push_back(grid[k].z);
    const Complex at = placement == TargetPlacement::Lifted ? grid[k].base : grid[k].z;
    target.evaluate(at, std::span<Complex>(target_values_).subspan(k * arity_, arity_));
  }
}

double DistanceProbe::sup_distance(const ShiftFunction& Z, double shift) const {
  if (Z.arity() != arity_) {
    throw Error(ErrorCode::InvalidArgument, "tuple arity of Z and target differ");
  }
  ComplexVec value(arity_);
  double worst = 0.0;
  const Complex offset(0.0, shift);
  for (std::size_t k = 0; k < points_.size(); ++k) {
    Z.evaluate(points_[k] + offset, value);
    for (std::size_t c = 0; c < arity_; ++c) {
      worst = std::max(worst, std::abs(value[c] - target_values_[k * arity_ + c]));
    }
  }
  return worst;
}

double sup_distance(const ShiftFunction& Z, double shift, const MixedTarget& target,
                    const CompactRegion& K, TargetPlacement placement) {
  return DistanceProbe(K, target, placement).sup_distance(Z, shift);
}

}  // namespace zetashift
