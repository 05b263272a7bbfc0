#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "zetashift/core.hpp"

namespace zetashift {

/// Rotation angles on the k-torus, in turns. The orbit point for index l is
/// (exp(-2 pi i l theta_j))_j.
class TorusAngles {
 public:
  explicit TorusAngles(std::vector<double> thetas);
  /// theta_j = frac(step * alpha * log(lambda_j) / 2 pi), in extended precision.
  static TorusAngles from_lambdas(const std::vector<double>& lambdas, double alpha,
                                  std::int64_t step);

  const std::vector<double>& thetas() const { return thetas_; }
  std::size_t size() const { return thetas_.size(); }

 private:
  std::vector<double> thetas_;
};

/// frac(l * theta) with the product's rounding error folded back in.
double orbit_angle_direct(std::int64_t l, double theta);

/// Walks l = start, start+1, ... keeping frac(-l theta_j) by compensated
/// accumulation modulo 1.
class OrbitWalker {
 public:
  OrbitWalker(const TorusAngles& angles, std::int64_t start = 0);

  std::int64_t index() const { return l_; }
  /// Current angles in turns, each in [0, 1).
  const std::vector<double>& angles() const { return sum_; }
  void advance();

 private:
  std::vector<double> step_;   // theta_j
  std::vector<double> hi_;     // frac(l theta_j) = hi_ + carry_
  std::vector<double> carry_;
  std::vector<double> sum_;    // frac(-l theta_j)
  std::int64_t l_;
};

/// |e^{2 pi i a} - e^{2 pi i b}| for angles in turns.
double chord(double a, double b);

/// Smallest l in [0, l_max] with max_j |e^{-2 pi i l theta_j} - b_j| < epsilon.
std::optional<std::int64_t> find_shift(const TorusAngles& angles, const ComplexVec& targets,
                                       double epsilon, std::int64_t l_max, int threads = 1);

struct CoveringResult {
  std::int64_t L;
  std::int64_t mesh_per_axis;  // power of two
  double mesh_spacing;         // radians
  double coverage_radius;      // chord radius certified on the mesh
  double slack;                // bound on the mesh-to-continuum error
};

/// Smallest L <= l_cap such that every point of a nested power-of-two mesh of
/// the torus lies within chord 0.9 epsilon of the orbit {0..L}. The mesh is
/// fine enough that the continuum statement holds with budget epsilon.
/// Throws CapExceeded past l_cap.
CoveringResult covering_number(const TorusAngles& angles, double epsilon, std::int64_t l_cap);

/// Largest admissible mesh (points over all axes) for covering_number.
inline constexpr std::int64_t kMaxMeshPoints = std::int64_t(1) << 26;

enum class IndependenceVerdict { IndependentByPrimality, NoRelationFoundUpToHeight, RelationFound };

struct RationalAngle {
  std::size_t index;     // which lambda
  std::int64_t p, q;     // alpha log(lambda) / pi ~ p / q
};

struct IndependenceReport {
  int checked_height;
  IndependenceVerdict verdict;
  std::vector<std::int64_t> relation;   // set for RelationFound
  std::vector<RationalAngle> rational;  // angles found rational up to height

  bool acceptable() const {
    return verdict != IndependenceVerdict::RelationFound && rational.empty();
  }
};

IndependenceReport independence_check(const std::vector<double>& lambdas, double alpha,
                                      int height);

/// Best rational approximation p/q of x with q <= max_q when |x - p/q| is
/// within tol; continued-fraction convergents.
std::optional<std::pair<std::int64_t, std::int64_t>> detect_rational(double x, std::int64_t max_q,
                                                                      double tol);

const char* to_string(IndependenceVerdict v);

}  // namespace zetashift
