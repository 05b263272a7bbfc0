#include "zetashift/kronecker.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>

namespace zetashift {

namespace {

constexpr std::int64_t kChunk = std::int64_t(1) << 16;

double frac01(double x) {
  x -= std::floor(x);
  return x >= 1.0 ? 0.0 : x;
}

// frac(-x) for x in [0, 1) given as hi + lo.
double negate_turn(double hi, double lo) {
  double out = (1.0 - hi) - lo;
  if (out >= 1.0) out -= 1.0;
  if (out < 0.0) out += 1.0;
  return out;
}

}  // namespace

TorusAngles::TorusAngles(std::vector<double> thetas) : thetas_(std::move(thetas)) {
  require(!thetas_.empty(), "torus angles must be nonempty");
  for (double t : thetas_) require(std::isfinite(t) && t >= 0.0 && t < 1.0, "angles must lie in [0, 1)");
}

TorusAngles TorusAngles::from_lambdas(const std::vector<double>& lambdas, double alpha,
                                      std::int64_t step) {
  require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
  std::vector<double> thetas;
  for (double lambda : lambdas) {
    require(lambda > 1.0 && std::isfinite(lambda), "lambdas must exceed 1");
    const long double x = static_cast<long double>(step) * alpha * std::log(static_cast<long double>(lambda)) /
                          (2.0L * 3.141592653589793238462643383279502884L);
    thetas.push_back(frac01(static_cast<double>(x - std::floor(x))));
  }
  return TorusAngles(std::move(thetas));
}

double orbit_angle_direct(std::int64_t l, double theta) {
  const double x = static_cast<double>(l);
  const double p = x * theta;
  const double err = std::fma(x, theta, -p);
  const double r = (p - std::floor(p)) + err;
  return frac01(r);
}

OrbitWalker::OrbitWalker(const TorusAngles& angles, std::int64_t start)
    : step_(angles.thetas()), hi_(step_.size()), carry_(step_.size()), sum_(step_.size()), l_(start) {
  for (std::size_t j = 0; j < step_.size(); ++j) {
    hi_[j] = orbit_angle_direct(start, step_[j]);
    sum_[j] = negate_turn(hi_[j], 0.0);
  }
}

void OrbitWalker::advance() {
  for (std::size_t j = 0; j < step_.size(); ++j) {
    // two-sum of hi and theta, low part kept in carry
    const double s = hi_[j] + step_[j];
    const double bp = s - hi_[j];
    const double e = (hi_[j] - (s - bp)) + (step_[j] - bp);
    double lo = carry_[j] + e;
    double hi = s + lo;
    lo -= hi - s;
    if (hi >= 1.0) hi -= 1.0;
    if (hi < 0.0) hi += 1.0;
    hi_[j] = hi;
    carry_[j] = lo;
    sum_[j] = negate_turn(hi, lo);
  }
  ++l_;
}

double chord(double a, double b) {
  double d = a - b;
  d -= std::nearbyint(d);
  return 2.0 * std::abs(std::sin(kPi * d));
}

namespace {

std::vector<double> target_turns(const ComplexVec& targets) {
  std::vector<double> out;
  for (const auto& b : targets) {
    require_finite(b, "target");
    require(std::abs(std::abs(b) - 1.0) <= 1e-12, "targets must have modulus 1");
    out.push_back(frac01(std::arg(b) / kTwoPi));
  }
  return out;
}

bool hits(const std::vector<double>& angles, const std::vector<double>& psi, double epsilon) {
  for (std::size_t j = 0; j < angles.size(); ++j) {
    if (!(chord(angles[j], psi[j]) < epsilon)) return false;
  }
  return true;
}

std::optional<std::int64_t> scan_chunk(const TorusAngles& angles, const std::vector<double>& psi,
                                       double epsilon, std::int64_t lo, std::int64_t hi) {
  OrbitWalker walker(angles, lo);
  for (std::int64_t l = lo; l <= hi; ++l) {
    if (hits(walker.angles(), psi, epsilon)) return l;
    walker.advance();
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::int64_t> find_shift(const TorusAngles& angles, const ComplexVec& targets,
                                       double epsilon, std::int64_t l_max, int threads) {
  require(targets.size() == angles.size(), "one target per angle");
  require(epsilon > 0.0 && epsilon < 2.0 + 1e-15, "epsilon must lie in (0, 2]");
  require(l_max >= 0, "l_max must be nonnegative");
  const auto psi = target_turns(targets);

  // Chunks restart from a direct evaluation, so the result does not depend on
  // the number of workers.
  const std::int64_t chunks = l_max / kChunk + 1;
  std::atomic<std::int64_t> next{0};
  std::atomic<std::int64_t> best{std::numeric_limits<std::int64_t>::max()};
  auto work = [&] {
    for (;;) {
      const std::int64_t c = next.fetch_add(1);
      if (c >= chunks) return;
      const std::int64_t lo = c * kChunk;
      if (lo > best.load()) return;
      const auto found = scan_chunk(angles, psi, epsilon, lo, std::min(l_max, lo + kChunk - 1));
      if (found) {
        std::int64_t cur = best.load();
        while (*found < cur && !best.compare_exchange_weak(cur, *found)) {
        }
      }
    }
  };
  const int n = std::max(1, std::min<int>(threads, int(std::min<std::int64_t>(chunks, 64))));
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (best.load() == std::numeric_limits<std::int64_t>::max()) return std::nullopt;
  return best.load();
}

CoveringResult covering_number(const TorusAngles& angles, double epsilon, std::int64_t l_cap) {
  require(epsilon > 0.0 && epsilon < 2.0, "epsilon must lie in (0, 2)");
  require(l_cap >= 0, "l_cap must be nonnegative");
  const std::size_t k = angles.size();

  // Spacing 2 pi / n <= epsilon / 5: every torus point is within pi / n of the
  // mesh in each coordinate, so chord slack < epsilon / 10.
  std::int64_t n = 1;
  while (kTwoPi / double(n) > epsilon / 5.0) n *= 2;
  std::int64_t total = 1;
  for (std::size_t j = 0; j < k; ++j) {
    if (total > kMaxMeshPoints / n) {
      throw Error(ErrorCode::InvalidArgument,
                  "mesh of " + std::to_string(n) + "^" + std::to_string(k) + " points is too large");
    }
    total *= n;
  }
  const double radius = kSafetyMargin * epsilon;
  const double half = std::asin(std::min(1.0, radius / 2.0)) / kPi * double(n);

  std::vector<bool> covered(static_cast<std::size_t>(total), false);
  std::int64_t uncovered = total;
  std::vector<std::vector<std::int64_t>> hit(k);
  std::vector<std::size_t> odometer(k);

  OrbitWalker walker(angles, 0);
  for (std::int64_t l = 0; l <= l_cap; ++l) {
    const auto& phi = walker.angles();
    bool any = true;
    for (std::size_t j = 0; j < k; ++j) {
      hit[j].clear();
      const double c = phi[j] * double(n);
      const std::int64_t lo = static_cast<std::int64_t>(std::floor(c - half)) - 1;
      const std::int64_t hi = std::min<std::int64_t>(static_cast<std::int64_t>(std::ceil(c + half)) + 1, lo + n - 1);
      for (std::int64_t i = lo; i <= hi; ++i) {
        const std::int64_t wrapped = ((i % n) + n) % n;
        if (chord(double(wrapped) / double(n), phi[j]) < radius) hit[j].push_back(wrapped);
      }
      if (hit[j].empty()) any = false;
    }
    if (any) {
      std::fill(odometer.begin(), odometer.end(), 0);
      for (;;) {
        std::int64_t index = 0;
        for (std::size_t j = 0; j < k; ++j) index = index * n + hit[j][odometer[j]];
        if (!covered[index]) {
          covered[index] = true;
          --uncovered;
        }
        std::size_t j = k;
        while (j > 0 && ++odometer[j - 1] == hit[j - 1].size()) odometer[--j] = 0;
        if (j == 0) break;
      }
    }
    if (uncovered == 0) {
      return {l, n, kTwoPi / double(n), radius, 2.0 * std::sin(kPi / (2.0 * double(n)))};
    }
    walker.advance();
  }
  throw Error(ErrorCode::CapExceeded,
              "orbit up to " + std::to_string(l_cap) + " leaves " + std::to_string(uncovered) +
                  " mesh points uncovered",
              double(uncovered));
}

std::optional<std::pair<std::int64_t, std::int64_t>> detect_rational(double x, std::int64_t max_q,
                                                                      double tol) {
  long double r = x;
  std::int64_t p0 = 1, q0 = 0;
  std::int64_t p1 = static_cast<std::int64_t>(std::floor(r)), q1 = 1;
  r -= std::floor(r);
  for (;;) {
    if (std::abs(static_cast<long double>(x) - static_cast<long double>(p1) / q1) <= tol) {
      return std::make_pair(p1, q1);
    }
    if (r < 1e-18L) return std::nullopt;
    r = 1.0L / r;
    const long double a = std::floor(r);
    r -= a;
    if (a > 1e15L) return std::nullopt;
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t q2 = ai * q1 + q0;
    if (q2 > max_q || q2 < 0) return std::nullopt;
    const std::int64_t p2 = ai * p1 + p0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
  }
}

namespace {

// Base prime if x is an integral prime power.
std::optional<std::int64_t> prime_base(double x) {
  if (x != std::floor(x) || x > 9.0e15) return std::nullopt;
  auto v = static_cast<std::int64_t>(x);
  for (std::int64_t p = 2; p * p <= v; ++p) {
    if (v % p == 0) {
      while (v % p == 0) v /= p;
      if (v != 1) return std::nullopt;
      return p;
    }
  }
  return v;
}

}  // namespace

IndependenceReport independence_check(const std::vector<double>& lambdas, double alpha, int height) {
  require(!lambdas.empty(), "need at least one lambda");
  require(height >= 1, "height must be positive");
  require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    require(std::isfinite(lambdas[j]) && lambdas[j] > 1.0, "lambdas must exceed 1");
    if (j > 0) require(lambdas[j - 1] < lambdas[j], "lambdas must be strictly increasing");
  }
  IndependenceReport report{height, IndependenceVerdict::NoRelationFoundUpToHeight, {}, {}};
  const std::size_t k = lambdas.size();

  for (std::size_t j = 0; j < k; ++j) {
    const double x = alpha * std::log(lambdas[j]) / kPi;
    if (auto pq = detect_rational(x, height, 1e-12 * std::max(1.0, std::abs(x)))) {
      report.rational.push_back({j, pq->first, pq->second});
    }
  }

  std::vector<std::int64_t> bases;
  for (double lambda : lambdas) {
    const auto b = prime_base(lambda);
    if (!b) break;
    bases.push_back(*b);
  }
  std::sort(bases.begin(), bases.end());
  if (bases.size() == k && std::adjacent_find(bases.begin(), bases.end()) == bases.end()) {
    report.verdict = IndependenceVerdict::IndependentByPrimality;
    return report;
  }

  double per = 1.0;
  for (std::size_t j = 0; j < k; ++j) per *= 2.0 * height + 1.0;
  require(per <= 1e8, "relation search space too large; lower the height");

  std::vector<double> logs;
  for (double lambda : lambdas) logs.push_back(std::log(lambda));
  std::vector<std::int64_t> c(k);
  for (int norm = 1; norm <= height; ++norm) {
    std::fill(c.begin(), c.end(), -norm);
    for (;;) {
      std::int64_t top = 0, g = 0;
      std::size_t first = k;
      for (std::size_t j = 0; j < k; ++j) {
        top = std::max<std::int64_t>(top, std::abs(c[j]));
        g = std::gcd(g, std::abs(c[j]));
        if (first == k && c[j] != 0) first = j;
      }
      if (top == norm && g == 1 && c[first] > 0) {
        long double sum = 0.0L, scale = 0.0L;
        for (std::size_t j = 0; j < k; ++j) {
          sum += c[j] * static_cast<long double>(logs[j]);
          scale += std::abs(c[j] * logs[j]);
        }
        if (std::abs(sum) <= 1e-12L * std::max(1.0L, scale)) {
          report.verdict = IndependenceVerdict::RelationFound;
          report.relation = c;
          return report;
        }
      }
      std::size_t j = k;
      while (j > 0 && ++c[j - 1] > norm) c[--j] = -norm;
      if (j == 0) break;
    }
  }
  return report;
}

const char* to_string(IndependenceVerdict v) {
  switch (v) {
    case IndependenceVerdict::IndependentByPrimality: return "IndependentByPrimality";
    case IndependenceVerdict::NoRelationFoundUpToHeight: return "NoRelationFoundUpToHeight";
    case IndependenceVerdict::RelationFound: return "RelationFound";
  }
  return "?";
}

}  // namespace zetashift
