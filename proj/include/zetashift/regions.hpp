#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "zetashift/core.hpp"

namespace zetashift {

inline constexpr double kDefaultGridDensity = 200.0;

struct Disc {
  Complex center;
  double radius;
};

struct Rect {
  double sigma_min, sigma_max, t_min, t_max;

  double width() const { return sigma_max - sigma_min; }
  double height() const { return t_max - t_min; }
};

/// Index (m, l) of the copy K_{m,l} inside a tower.
struct PieceLabel {
  int m = 0;
  int l = 0;

  bool operator==(const PieceLabel&) const = default;
};

class CompactRegion;

/// Disjoint union of copies base + i*shift. Shifts are kept sorted ascending.
struct ShiftedUnion {
  std::shared_ptr<const CompactRegion> base;
  std::vector<double> shifts;
  std::vector<PieceLabel> labels;  // parallel to shifts
};

/// One verification point. `base` is the preimage in the base region for
/// shifted unions (equal to `z` otherwise) and `piece` indexes the copy.
struct GridPoint {
  Complex z;
  Complex base;
  std::size_t piece = 0;
};

/// A compact set with connected complement and its deterministic grid.
class CompactRegion {
 public:
  using Shape = std::variant<Disc, Rect, ShiftedUnion>;

  static CompactRegion disc(Complex center, double radius,
                            double grid_density = kDefaultGridDensity);
  static CompactRegion rect(double sigma_min, double sigma_max, double t_min,
                            double t_max,
                            double grid_density = kDefaultGridDensity);
  /// Pieces must have pairwise disjoint imaginary extents (strictly);
  /// otherwise OverlapDetected. Empty labels default to (index, 0).
  static CompactRegion shifted_union(const CompactRegion& base,
                                     std::vector<double> shifts,
                                     std::vector<PieceLabel> labels = {});

  const Shape& shape() const { return shape_; }
  double grid_density() const { return grid_density_; }
  bool is_union() const { return std::holds_alternative<ShiftedUnion>(shape_); }

  /// Same shape, different grid density (unions re-grid their base).
  CompactRegion with_density(double grid_density) const;

  Rect bounding_box() const;
  Complex center() const;
  /// Largest distance from center() to a point of the region.
  double radius() const;
  bool contains(Complex z, double tol = 1e-12) const;

  /// Deterministic grid; discs and rectangles are traversed boustrophedon so
  /// consecutive points are lattice neighbours.
  std::vector<GridPoint> grid() const;
  /// Number of pieces (1 unless a union).
  std::size_t piece_count() const;

  bool fits_in(const Strip& strip, double margin) const;

 private:
  CompactRegion(Shape shape, double density);

  Shape shape_;
  double grid_density_;
};

/// d(K, complement of K0) for a rectangular K0; negative if K leaves K0.
double distance_to_complement(const CompactRegion& K, const Rect& K0);

/// Filled bounding rectangle of K padded by delta0. Throws MarginTooSmall if
/// delta0 <= 0 or the padded rectangle does not keep a positive margin to the
/// strip boundary.
CompactRegion enlarge(const CompactRegion& K, double delta0, const Strip& strip);

/// Constants of the tower K1 = union_{l<=L} union_{m<=M} K0 + i(m M1 + l L1) alpha
/// with M1 = 3N + 1/M and L1 = 4MN.
class TowerParams {
 public:
  /// Validates alpha > 0, M, N >= 1, L >= 0 and alpha / M < delta.
  static TowerParams make(double alpha, int M, int N, int L, double delta);
  /// As make(), additionally rejecting M1 != 3N + 1/M or L1 != 4MN.
  static TowerParams from_values(double alpha, int M, int N, int L, double M1,
                                 std::int64_t L1, double delta);

  double alpha() const { return alpha_; }
  int M() const { return M_; }
  int N() const { return N_; }
  int L() const { return L_; }
  double delta() const { return delta_; }
  double M1() const { return 3.0 * N_ + 1.0 / M_; }
  std::int64_t L1() const { return 4LL * M_ * N_; }

  /// (m M1 + l L1) * M as an exact integer; the shift is this times alpha / M.
  std::int64_t offset_numerator(int m, int l) const;
  double shift(int m, int l) const;

 private:
  TowerParams() = default;

  double alpha_ = 1.0;
  int M_ = 1, N_ = 1, L_ = 0;
  double delta_ = 1.0;
};

/// Builds K1. Requires K0 inside {|Im z| <= N alpha}; throws OverlapDetected
/// if two copies touch.
CompactRegion build_tower(const CompactRegion& K0, const TowerParams& p);

/// The copy containing z, or nullopt.
std::optional<PieceLabel> locate(const CompactRegion& K1, Complex z);

}  // namespace zetashift
