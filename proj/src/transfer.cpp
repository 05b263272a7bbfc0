#include "zetashift/transfer.hpp"

#include <algorithm>

namespace zetashift {

const char* to_string(WitnessKind kind) {
  switch (kind) {
    case WitnessKind::S: return "S";
    case WitnessKind::U: return "U";
    case WitnessKind::W: return "W";
  }
  return "?";
}

WitnessKind witness_kind_from_string(const std::string& s) {
  if (s == "S") return WitnessKind::S;
  if (s == "U") return WitnessKind::U;
  if (s == "W") return WitnessKind::W;
  throw Error(ErrorCode::InvalidArgument, "unknown witness kind '" + s + "'");
}

void DiscreteWitnessSet::normalize() {
  require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
  require(range_start >= 0 && range_start <= horizon, "need 0 <= range_start <= horizon");
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (!members.empty()) {
    require(members.front() >= range_start && members.back() <= horizon,
            "members must lie in [range_start, horizon]");
  }
}

std::size_t DiscreteWitnessSet::count_in(double lo, double hi) const {
  if (!(hi > lo)) return 0;
  // n > lo  <=>  n >= floor(lo) + 1;  n <= hi  <=>  n <= floor(hi)
  const double first = std::floor(lo) + 1.0, last = std::floor(hi);
  if (first > last) return 0;
  auto a = std::lower_bound(members.begin(), members.end(), first,
                            [](std::int64_t n, double x) { return double(n) < x; });
  auto b = std::upper_bound(members.begin(), members.end(), last,
                            [](double x, std::int64_t n) { return x < double(n); });
  return b > a ? std::size_t(b - a) : 0;
}

double DiscreteWitnessSet::window() const {
  return window_length > 0.0 ? window_length : double(horizon - range_start);
}

double DiscreteWitnessSet::density() const {
  require(window() > 0.0, "density needs a positive window");
  return double(members.size()) / window();
}

void ContinuousWitnessSet::normalize() {
  require(std::isfinite(start) && std::isfinite(horizon) && start <= horizon,
          "need start <= horizon");
  std::vector<Interval> in;
  for (auto iv : intervals) {
    require(std::isfinite(iv.lo) && std::isfinite(iv.hi) && iv.lo <= iv.hi, "bad interval");
    iv.lo = std::max(iv.lo, start);
    iv.hi = std::min(iv.hi, horizon);
    if (iv.lo <= iv.hi) in.push_back(iv);
  }
  std::sort(in.begin(), in.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  intervals.clear();
  for (const auto& iv : in) {
    if (!intervals.empty() && iv.lo <= intervals.back().hi) {
      intervals.back().hi = std::max(intervals.back().hi, iv.hi);
    } else {
      intervals.push_back(iv);
    }
  }
}

double ContinuousWitnessSet::measure() const {
  double total = 0.0;
  for (const auto& iv : intervals) total += iv.hi - iv.lo;
  return total;
}

double ContinuousWitnessSet::measure_in(double a, double b) const {
  double total = 0.0;
  auto it = std::upper_bound(intervals.begin(), intervals.end(), a,
                             [](double x, const Interval& iv) { return x < iv.hi; });
  for (; it != intervals.end() && it->lo < b; ++it) {
    const double lo = std::max(it->lo, a), hi = std::min(it->hi, b);
    if (hi > lo) total += hi - lo;
  }
  return total;
}

bool ContinuousWitnessSet::contains(double t) const {
  auto it = std::upper_bound(intervals.begin(), intervals.end(), t,
                             [](double x, const Interval& iv) { return x < iv.lo; });
  return it != intervals.begin() && t <= std::prev(it)->hi;
}

double ContinuousWitnessSet::density() const {
  require(horizon > start, "density needs a positive window");
  return measure() / (horizon - start);
}

ContinuousWitnessSet neighborhood_expand(const DiscreteWitnessSet& S, double delta) {
  require(delta > 0.0 && std::isfinite(delta), "delta must be positive");
  ContinuousWitnessSet V;
  V.start = S.alpha * double(S.range_start);
  V.horizon = S.alpha * double(S.horizon);
  V.epsilon = S.kind == WitnessKind::W ? S.epsilon : 2.0 * S.epsilon;
  V.config_hash = S.config_hash;
  V.intervals.reserve(S.members.size());
  for (auto n : S.members) {
    const double c = S.alpha * double(n);
    V.intervals.push_back({c - delta, c + delta});
  }
  V.normalize();
  return V;
}

double density_lower_bound_discrete_to_continuous(double xi1, double alpha, double delta) {
  require(xi1 > 0.0 && xi1 <= 1.0, "xi must lie in (0, 1]");
  require(alpha > 0.0 && delta > 0.0, "alpha and delta must be positive");
  return xi1 * std::min(alpha, 2.0 * delta) / alpha;
}

double density_lower_bound_continuous_to_discrete(double xi5, double C, double delta) {
  require(xi5 >= 0.0 && std::isfinite(xi5), "xi must be nonnegative");
  require(C > 0.0 && delta > 0.0, "C and delta must be positive");
  return xi5 / (C + 1.0 + delta);
}

namespace {

double derived_xi(double measured, double alpha, double d) {
  return measured * std::min(alpha, 2.0 * d) / alpha;
}

bool same(double a, double b) {
  return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(a));
}

}  // namespace

TransferConstants TransferConstants::make(double delta0, double delta, double delta1,
                                          const TowerParams& tower, double xi1, double xi3,
                                          double xi5) {
  require(std::isfinite(delta0) && std::isfinite(delta) && std::isfinite(delta1),
          "moduli must be finite");
  require(0.0 < delta1 && delta1 < delta && delta < delta0, "need 0 < delta1 < delta < delta0");
  require(delta == tower.delta(), "tower built for a different delta");
  for (double x : {xi1, xi3, xi5}) require(std::isfinite(x) && x >= 0.0, "densities must be >= 0");
  const double alpha = tower.alpha();
  const double M = tower.M(), L = tower.L(), L1 = double(tower.L1());
  TransferConstants tc{delta0, delta, delta1, tower, 0.0, 0.0, {}};
  tc.C = delta + (M * M + L * L1) * alpha;
  tc.C_tight = delta + (M * tower.M1() + L * L1) * alpha;
  tc.xi = {xi1, derived_xi(xi1, alpha, delta), xi3, derived_xi(xi3, alpha, delta1), xi5,
           xi5 / (tc.C + 1.0 + delta)};
  return tc;
}

TransferConstants TransferConstants::from_values(double delta0, double delta, double delta1,
                                                 const TowerParams& tower, double C,
                                                 const std::array<double, 6>& xi) {
  auto tc = make(delta0, delta, delta1, tower, xi[0], xi[2], xi[4]);
  require(same(C, tc.C), "C must equal delta + (M^2 + L L1) alpha");
  require(same(xi[1], tc.xi[1]), "xi2 must equal xi1 min(alpha, 2 delta) / alpha");
  require(same(xi[3], tc.xi[3]), "xi4 must equal xi3 min(alpha, 2 delta1) / alpha");
  require(same(xi[5], tc.xi[5]), "xi6 must equal xi5 / (C + 1 + delta)");
  return tc;
}

ShiftDecomposition decompose_shift(double t, const TowerParams& tower) {
  require(std::isfinite(t), "t must be finite");
  const long double u = static_cast<long double>(t) / tower.alpha();
  const int M = tower.M();
  int best_m = 1;
  long double best_d = 2.0L, best_v = 0.0L;
  for (int m = 1; m <= M; ++m) {
    // m M1 = 3Nm + m/M, and the integer part does not move the residue
    const long double v = u + static_cast<long double>(m) / M;
    const long double d = std::abs(v - std::nearbyint(v));
    if (d < best_d) {
      best_d = d;
      best_m = m;
      best_v = v;
    }
  }
  const long double r = std::nearbyint(best_v);
  ShiftDecomposition out;
  out.m0 = best_m;
  out.n0 = static_cast<std::int64_t>(r) + 3LL * tower.N() * best_m;
  out.tau = static_cast<double>(tower.alpha() * (r - best_v));
  return out;
}

Complex unit_power(double lambda, long double x) {
  constexpr long double two_pi = 6.283185307179586476925286766559005768L;
  long double phase = -x * std::log(static_cast<long double>(lambda));
  phase -= two_pi * std::floor(phase / two_pi);
  return std::polar(1.0, static_cast<double>(phase));
}

DiscreteWitness continuous_to_discrete_witness(double t, const TransferConstants& tc,
                                               const HybridConstraint* hybrid) {
  const auto& tower = tc.tower;
  const double alpha = tower.alpha();
  DiscreteWitness w{};
  w.parts = decompose_shift(t, tower);
  w.l0 = 0;
  if (hybrid && hybrid->size() > 0) {
    const auto angles = TorusAngles::from_lambdas(hybrid->lambdas(), alpha, tower.L1());
    ComplexVec rotated;
    for (std::size_t j = 0; j < hybrid->size(); ++j) {
      // a_j lambda_j^{i n0 alpha}
      rotated.push_back(hybrid->targets()[j] *
                        std::conj(unit_power(hybrid->lambdas()[j],
                                             static_cast<long double>(w.parts.n0) * alpha)));
      rotated.back() /= std::abs(rotated.back());
    }
    const auto l0 = find_shift(angles, rotated, hybrid->epsilon(), tower.L());
    if (!l0) {
      throw Error(ErrorCode::KroneckerNotFound,
                  "no l <= " + std::to_string(tower.L()) + " meets the hybrid targets");
    }
    w.l0 = *l0;
  }
  w.n = w.parts.n0 + w.l0 * tower.L1();
  const long double n_alpha = static_cast<long double>(w.n) * alpha;
  w.within_bracket = t - tc.delta <= n_alpha && n_alpha <= t + tc.C;
  w.within_tight_bracket = t - tc.delta <= n_alpha && n_alpha <= t + tc.C_tight;
  w.hybrid_distance = 0.0;
  if (hybrid) {
    for (std::size_t j = 0; j < hybrid->size(); ++j) {
      w.hybrid_distance = std::max(
          w.hybrid_distance, std::abs(unit_power(hybrid->lambdas()[j], n_alpha) - hybrid->targets()[j]));
    }
  }
  return w;
}

namespace {

CountingVariant evaluate_variant(std::string name, double C, double low, double high,
                                 double multiplicity, const ContinuousWitnessSet& V,
                                 const DiscreteWitnessSet& W, double alpha, std::int64_t N) {
  require(double(W.horizon) >= double(N) + high,
          "W must extend to N + " + std::to_string(high) + " for the " + name + " check");
  CountingVariant out{std::move(name), C, low, high, multiplicity, {}, {}, 0.0, 0.0, false};
  out.rows.reserve(std::size_t(N + 1));
  for (std::int64_t j = 0; j <= N; ++j) {
    CountingRow row{j, W.count_in(double(j) - low, double(j) + high),
                    V.measure_in(alpha * double(j), alpha * double(j + 1)) / alpha, false};
    row.holds = double(row.lhs) >= row.rhs;
    if (!row.holds) out.violations.push_back(j);
    out.rows.push_back(row);
  }
  out.aggregate_lhs = multiplicity * double(W.count_in(-1.0, double(N) + high));
  out.aggregate_rhs = V.measure_in(-1.0, alpha * double(N)) / alpha;
  out.aggregate_holds = out.aggregate_lhs >= out.aggregate_rhs;
  return out;
}

}  // namespace

CountingReport counting_inequality_check(const ContinuousWitnessSet& V, const DiscreteWitnessSet& W,
                                         const TransferConstants& tc, std::int64_t N) {
  require(N >= 0, "N must be nonnegative");
  const double alpha = tc.alpha();
  require(W.alpha == alpha, "W was built for a different alpha");
  const double d = tc.delta;
  CountingReport r{N, alpha,
                   evaluate_variant("literal", tc.C, d, tc.C + 1.0, tc.C + 1.0 + d, V, W, alpha, N),
                   evaluate_variant("tight", tc.C_tight, d, tc.C_tight + 1.0, tc.C_tight + 1.0 + d, V,
                                    W, alpha, N),
                   evaluate_variant("scaled", tc.C, d / alpha, 1.0 + tc.C / alpha,
                                    1.0 + (tc.C + d) / alpha, V, W, alpha, N),
                   0};
  r.boundary = W.count_in(-1.0, double(N) + tc.C + 1.0) - W.count_in(-1.0, double(N));
  return r;
}

namespace {

std::vector<double> checkpoints(double window) {
  std::vector<double> out;
  for (double c = 1.0; c < window; c *= 2.0) out.push_back(c);
  out.push_back(window);
  return out;
}

DensityReport finish(double window, const std::vector<double>& points, std::vector<double> values) {
  DensityReport r{values.back(), window, {}};
  double run = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < points.size(); ++k) {
    run = std::min(run, values[k]);
    r.profile.push_back({points[k], values[k], run, 0.0});
  }
  double tail = std::numeric_limits<double>::infinity();
  for (std::size_t k = points.size(); k-- > 0;) {
    tail = std::min(tail, values[k]);
    r.profile[k].tail_min = tail;
  }
  return r;
}

}  // namespace

DensityReport empirical_density(const DiscreteWitnessSet& ws) {
  const double window = ws.window();
  require(window > 0.0, "density needs a positive window");
  const auto points = checkpoints(window);
  std::vector<double> values;
  for (double c : points) {
    values.push_back(double(ws.count_in(double(ws.range_start) - 1.0, double(ws.range_start) + c)) / c);
  }
  return finish(window, points, std::move(values));
}

DensityReport empirical_density(const ContinuousWitnessSet& ws) {
  const double window = ws.horizon - ws.start;
  require(window > 0.0, "density needs a positive window");
  const auto points = checkpoints(window);
  std::vector<double> values;
  for (double c : points) {
    values.push_back(ws.measure_in(ws.start, ws.start + c) / c);
  }
  return finish(window, points, std::move(values));
}

}  // namespace zetashift
