#include "zetashift/regions.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace zetashift {

namespace {

void check_density(double density) {
  if (!(density > 0.0) || !std::isfinite(density)) {
    throw Error(ErrorCode::InvalidArgument, "grid density must be positive");
  }
}

// Imaginary extent of a union's base region.
std::pair<double, double> imag_extent(const CompactRegion& r) {
  const Rect box = r.bounding_box();
  return {box.t_min, box.t_max};
}

void disc_grid(const Disc& d, double density, std::vector<GridPoint>& out) {
  const double h = 1.0 / density;
  const long rows = static_cast<long>(std::floor(d.radius / h));
  bool forward = true;
  for (long k = -rows; k <= rows; ++k) {
    const double dy = double(k) * h;
    const double half = std::sqrt(std::max(0.0, d.radius * d.radius - dy * dy));
    const long cols = static_cast<long>(std::floor(half / h));
    for (long j = -cols; j <= cols; ++j) {
      const long jj = forward ? j : -j;
      const Complex z = d.center + Complex(double(jj) * h, dy);
      out.push_back({z, z, 0});
    }
    forward = !forward;
  }
  // Power-of-two ring sizes keep refined grids nested.
  long ring = 16;
  while (double(ring) < kTwoPi * d.radius * density) ring *= 2;
  for (long k = 0; k < ring; ++k) {
    const double phi = kTwoPi * double(k) / double(ring);
    const Complex z = d.center + std::polar(d.radius, phi);
    out.push_back({z, z, 0});
  }
}

void rect_grid(const Rect& r, double density, std::vector<GridPoint>& out) {
  const long nx = std::max<long>(2, static_cast<long>(std::ceil(r.width() * density - 1e-9)) + 1);
  const long ny = std::max<long>(2, static_cast<long>(std::ceil(r.height() * density - 1e-9)) + 1);
  for (long k = 0; k < ny; ++k) {
    const double y = r.t_min + r.height() * double(k) / double(ny - 1);
    for (long j = 0; j < nx; ++j) {
      const long jj = (k % 2 == 0) ? j : nx - 1 - j;
      const double x = r.sigma_min + r.width() * double(jj) / double(nx - 1);
      out.push_back({{x, y}, {x, y}, 0});
    }
  }
}

}  // namespace

CompactRegion::CompactRegion(Shape shape, double density)
    : shape_(std::move(shape)), grid_density_(density) {}

CompactRegion CompactRegion::disc(Complex center, double radius, double density) {
  require_finite(center, "disc center");
  require(radius > 0.0 && std::isfinite(radius), "disc radius must be positive");
  check_density(density);
  return CompactRegion(Disc{center, radius}, density);
}

CompactRegion CompactRegion::rect(double sigma_min, double sigma_max, double t_min,
                                  double t_max, double density) {
  require(std::isfinite(sigma_min) && std::isfinite(sigma_max) &&
              std::isfinite(t_min) && std::isfinite(t_max),
          "rectangle bounds must be finite");
  require(sigma_min < sigma_max && t_min < t_max, "rectangle must have positive area");
  check_density(density);
  return CompactRegion(Rect{sigma_min, sigma_max, t_min, t_max}, density);
}

CompactRegion CompactRegion::shifted_union(const CompactRegion& base,
                                           std::vector<double> shifts,
                                           std::vector<PieceLabel> labels) {
  require(!base.is_union(), "union base must be a disc or rectangle");
  require(!shifts.empty(), "union needs at least one piece");
  if (labels.empty()) {
    labels.resize(shifts.size());
    for (std::size_t i = 0; i < shifts.size(); ++i) labels[i] = {int(i), 0};
  }
  require(labels.size() == shifts.size(), "one label per shift");
  for (double s : shifts) require(std::isfinite(s), "shifts must be finite");

  std::vector<std::size_t> order(shifts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return shifts[a] < shifts[b]; });
  ShiftedUnion u;
  u.base = std::make_shared<const CompactRegion>(base);
  for (std::size_t i : order) {
    u.shifts.push_back(shifts[i]);
    u.labels.push_back(labels[i]);
  }
  const auto [lo, hi] = imag_extent(base);
  for (std::size_t i = 1; i < u.shifts.size(); ++i) {
    // Closed extents; touching counts as overlap.
    if (!(u.shifts[i - 1] + hi < u.shifts[i] + lo)) {
      throw Error(ErrorCode::OverlapDetected,
                  "pieces " + std::to_string(i - 1) + " and " + std::to_string(i) +
                      " of the union intersect");
    }
  }
  return CompactRegion(std::move(u), base.grid_density());
}

CompactRegion CompactRegion::with_density(double density) const {
  check_density(density);
  if (const auto* u = std::get_if<ShiftedUnion>(&shape_)) {
    ShiftedUnion copy = *u;
    copy.base = std::make_shared<const CompactRegion>(u->base->with_density(density));
    return CompactRegion(std::move(copy), density);
  }
  return CompactRegion(shape_, density);
}

Rect CompactRegion::bounding_box() const {
  if (const auto* d = std::get_if<Disc>(&shape_)) {
    return {d->center.real() - d->radius, d->center.real() + d->radius,
            d->center.imag() - d->radius, d->center.imag() + d->radius};
  }
  if (const auto* r = std::get_if<Rect>(&shape_)) return *r;
  const auto& u = std::get<ShiftedUnion>(shape_);
  Rect box = u.base->bounding_box();
  box.t_max += u.shifts.back();
  box.t_min += u.shifts.front();
  return box;
}

Complex CompactRegion::center() const {
  if (const auto* d = std::get_if<Disc>(&shape_)) return d->center;
  const Rect box = bounding_box();
  return {0.5 * (box.sigma_min + box.sigma_max), 0.5 * (box.t_min + box.t_max)};
}

double CompactRegion::radius() const {
  if (const auto* d = std::get_if<Disc>(&shape_)) return d->radius;
  const Rect box = bounding_box();
  return 0.5 * std::hypot(box.width(), box.height());
}

bool CompactRegion::contains(Complex z, double tol) const {
  if (const auto* d = std::get_if<Disc>(&shape_)) {
    return std::abs(z - d->center) <= d->radius + tol;
  }
  if (const auto* r = std::get_if<Rect>(&shape_)) {
    return z.real() >= r->sigma_min - tol && z.real() <= r->sigma_max + tol &&
           z.imag() >= r->t_min - tol && z.imag() <= r->t_max + tol;
  }
  return locate(*this, z).has_value();
}

std::vector<GridPoint> CompactRegion::grid() const {
  std::vector<GridPoint> out;
  if (const auto* d = std::get_if<Disc>(&shape_)) {
    disc_grid(*d, grid_density_, out);
  } else if (const auto* r = std::get_if<Rect>(&shape_)) {
    rect_grid(*r, grid_density_, out);
  } else {
    const auto& u = std::get<ShiftedUnion>(shape_);
    const auto base = u.base->grid();
    out.reserve(base.size() * u.shifts.size());
    for (std::size_t p = 0; p < u.shifts.size(); ++p) {
      for (const auto& g : base) {
        out.push_back({g.z + Complex(0.0, u.shifts[p]), g.z, p});
      }
    }
  }
  return out;
}

std::size_t CompactRegion::piece_count() const {
  if (const auto* u = std::get_if<ShiftedUnion>(&shape_)) return u->shifts.size();
  return 1;
}

bool CompactRegion::fits_in(const Strip& strip, double margin) const {
  const Rect box = bounding_box();
  return box.sigma_min - margin > strip.sigma1 && box.sigma_max + margin < strip.sigma2;
}

double distance_to_complement(const CompactRegion& K, const Rect& K0) {
  const auto& shape = K.shape();
  if (const auto* d = std::get_if<Disc>(&shape)) {
    const double x = d->center.real(), y = d->center.imag();
    return std::min({x - K0.sigma_min, K0.sigma_max - x, y - K0.t_min, K0.t_max - y}) -
           d->radius;
  }
  if (const auto* r = std::get_if<Rect>(&shape)) {
    return std::min({r->sigma_min - K0.sigma_min, K0.sigma_max - r->sigma_max,
                     r->t_min - K0.t_min, K0.t_max - r->t_max});
  }
  const auto& u = std::get<ShiftedUnion>(shape);
  double best = std::numeric_limits<double>::infinity();
  for (double s : u.shifts) {
    const Rect moved{K0.sigma_min, K0.sigma_max, K0.t_min - s, K0.t_max - s};
    best = std::min(best, distance_to_complement(*u.base, moved));
  }
  return best;
}

CompactRegion enlarge(const CompactRegion& K, double delta0, const Strip& strip) {
  if (!(delta0 > 0.0) || !std::isfinite(delta0)) {
    throw Error(ErrorCode::MarginTooSmall, "delta0 must be strictly positive");
  }
  const Rect box = K.bounding_box();
  const Rect padded{box.sigma_min - delta0, box.sigma_max + delta0,
                    box.t_min - delta0, box.t_max + delta0};
  if (!(padded.sigma_min > strip.sigma1 && padded.sigma_max < strip.sigma2)) {
    throw Error(ErrorCode::MarginTooSmall,
                "strip cannot accommodate padding " + std::to_string(delta0));
  }
  return CompactRegion::rect(padded.sigma_min, padded.sigma_max, padded.t_min,
                             padded.t_max, K.grid_density());
}

TowerParams TowerParams::make(double alpha, int M, int N, int L, double delta) {
  require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
  require(M >= 1 && N >= 1 && L >= 0, "tower requires M >= 1, N >= 1, L >= 0");
  require(delta > 0.0 && std::isfinite(delta), "delta must be positive");
  if (!(alpha / M < delta)) {
    throw Error(ErrorCode::InvalidArgument,
                "tower requires alpha / M < delta (M = " + std::to_string(M) + ")");
  }
  TowerParams p;
  p.alpha_ = alpha;
  p.M_ = M;
  p.N_ = N;
  p.L_ = L;
  p.delta_ = delta;
  return p;
}

TowerParams TowerParams::from_values(double alpha, int M, int N, int L, double M1,
                                     std::int64_t L1, double delta) {
  TowerParams p = make(alpha, M, N, L, delta);
  if (M1 != p.M1()) {
    throw Error(ErrorCode::InvalidArgument, "M1 must equal 3N + 1/M");
  }
  if (L1 != p.L1()) {
    throw Error(ErrorCode::InvalidArgument, "L1 must equal 4MN");
  }
  return p;
}

std::int64_t TowerParams::offset_numerator(int m, int l) const {
  const std::int64_t M = M_, N = N_;
  return std::int64_t(m) * (3 * N * M + 1) + std::int64_t(l) * 4 * M * M * N;
}

double TowerParams::shift(int m, int l) const {
  return double(offset_numerator(m, l)) * alpha_ / double(M_);
}

CompactRegion build_tower(const CompactRegion& K0, const TowerParams& p) {
  require(!K0.is_union(), "tower base must be a disc or rectangle");
  const Rect box = K0.bounding_box();
  const double reach = p.N() * p.alpha();
  if (!(box.t_min >= -reach && box.t_max <= reach)) {
    throw Error(ErrorCode::InvalidArgument, "K0 must lie in |Im z| <= N alpha");
  }
  const std::size_t pieces = std::size_t(p.M()) * std::size_t(p.L() + 1);
  require(pieces <= 2'000'000, "tower has too many pieces");

  // Offsets are exact integers over M; check separation on them before any
  // rounding enters through alpha.
  std::vector<std::int64_t> numerators;
  std::vector<double> shifts;
  std::vector<PieceLabel> labels;
  numerators.reserve(pieces);
  shifts.reserve(pieces);
  labels.reserve(pieces);
  for (int l = 0; l <= p.L(); ++l) {
    for (int m = 1; m <= p.M(); ++m) {
      numerators.push_back(p.offset_numerator(m, l));
      shifts.push_back(p.shift(m, l));
      labels.push_back({m, l});
    }
  }
  const double height = box.height();
  for (std::size_t i = 1; i < numerators.size(); ++i) {
    const std::int64_t gap = numerators[i] - numerators[i - 1];
    if (!(gap > 0 && double(gap) * p.alpha() / p.M() > height)) {
      throw Error(ErrorCode::OverlapDetected,
                  "copies (" + std::to_string(labels[i - 1].m) + "," +
                      std::to_string(labels[i - 1].l) + ") and (" +
                      std::to_string(labels[i].m) + "," + std::to_string(labels[i].l) +
                      ") intersect");
    }
  }
  return CompactRegion::shifted_union(K0, std::move(shifts), std::move(labels));
}

std::optional<PieceLabel> locate(const CompactRegion& K1, Complex z) {
  const auto* u = std::get_if<ShiftedUnion>(&K1.shape());
  require(u != nullptr, "locate needs a shifted union");
  const auto [lo, hi] = imag_extent(*u->base);
  // Candidate shifts s with z.imag - hi <= s <= z.imag - lo.
  auto first = std::lower_bound(u->shifts.begin(), u->shifts.end(), z.imag() - hi - 1e-12);
  for (auto it = first; it != u->shifts.end() && *it <= z.imag() - lo + 1e-12; ++it) {
    if (u->base->contains(z - Complex(0.0, *it))) {
      return u->labels[std::size_t(it - u->shifts.begin())];
    }
  }
  return std::nullopt;
}

}  // namespace zetashift
