#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "zetashift/transfer.hpp"

using namespace zetashift;

namespace {

DiscreteWitnessSet discrete(std::vector<std::int64_t> members, std::int64_t horizon, double alpha = 1.0) {
  DiscreteWitnessSet S;
  S.alpha = alpha;
  S.members = std::move(members);
  S.horizon = horizon;
  S.epsilon = 0.1;
  S.normalize();
  return S;
}

// Independent union measure: sorted events, coverage counter.
double sweep_measure(const std::vector<Interval>& raw) {
  std::vector<std::pair<double, int>> events;
  for (const auto& iv : raw) {
    events.push_back({iv.lo, +1});
    events.push_back({iv.hi, -1});
  }
  std::sort(events.begin(), events.end(), [](auto a, auto b) {
    return a.first < b.first || (a.first == b.first && a.second > b.second);
  });
  double total = 0.0, open_at = 0.0;
  int depth = 0;
  for (const auto& [x, d] : events) {
    if (depth == 0 && d > 0) open_at = x;
    depth += d;
    if (depth == 0) total += x - open_at;
  }
  return total;
}

}  // namespace

TEST_CASE("neighborhood_expand") {
  SUBCASE("empty") {
    const auto V = neighborhood_expand(discrete({}, 10), 0.3);
    CHECK(V.intervals.empty());
    CHECK(V.measure() == 0.0);
  }
  SUBCASE("two members merge") {
    const auto V = neighborhood_expand(discrete({1, 2}, 10), 0.6);
    REQUIRE(V.intervals.size() == 1);
    CHECK(V.intervals[0].lo == doctest::Approx(0.4));
    CHECK(V.intervals[0].hi == doctest::Approx(2.6));
    CHECK(V.measure() == doctest::Approx(2.2));
  }
  SUBCASE("clipped to the range") {
    const auto V = neighborhood_expand(discrete({0, 10}, 10), 0.25);
    CHECK(V.measure() == 0.5);
  }
  SUBCASE("random sets against a sweep line") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
      std::uniform_int_distribution<std::int64_t> n(0, 40000);
      std::vector<std::int64_t> members(10000);
      for (auto& m : members) m = n(rng);
      const double delta = std::ldexp(double(1 + trial % 7), -3);  // dyadic, exact endpoints
      const auto S = discrete(members, 40000);
      const auto V = neighborhood_expand(S, delta);
      std::vector<Interval> raw;
      for (auto m : S.members) {
        raw.push_back({std::max(0.0, double(m) - delta), std::min(40000.0, double(m) + delta)});
      }
      std::shuffle(raw.begin(), raw.end(), rng);
      CHECK(V.measure() == sweep_measure(raw));
      for (std::size_t k = 1; k < V.intervals.size(); ++k) CHECK(V.intervals[k - 1].hi < V.intervals[k].lo);
    }
  }
}

TEST_CASE("density bounds") {
  CHECK(density_lower_bound_discrete_to_continuous(1.0, 1.0, 0.6) == 1.0);
  CHECK(density_lower_bound_discrete_to_continuous(0.5, 1.0, 0.1) == doctest::Approx(0.1));
  CHECK_THROWS_AS(density_lower_bound_discrete_to_continuous(1.5, 1.0, 0.1), Error);

  // Multiples of 10: density 1/10; disjoint neighbourhoods.
  std::vector<std::int64_t> tens;
  for (std::int64_t n = 10; n <= 9990; n += 10) tens.push_back(n);
  const auto S = discrete(tens, 10000, 0.5);
  const double delta = 0.125;
  const auto V = neighborhood_expand(S, delta);
  const double measured = V.measure() / (0.5 * 10000);
  CHECK(measured == doctest::Approx(2.0 * delta * S.density() / 0.5));
  CHECK(measured >= density_lower_bound_discrete_to_continuous(S.density(), 0.5, delta) - 1e-15);
}

TEST_CASE("transfer constants") {
  const auto tower = TowerParams::make(1.0, 4, 1, 2, 0.3);
  const auto tc = TransferConstants::make(0.4, 0.3, 0.1, tower, 0.5, 0.25, 0.2);
  CHECK(tc.C == doctest::Approx(0.3 + (16.0 + 2.0 * 16.0)));
  CHECK(tc.C_tight == doctest::Approx(0.3 + (4.0 * 3.25 + 2.0 * 16.0)));
  CHECK(tc.xi[1] == doctest::Approx(0.5 * 0.6));
  CHECK(tc.xi[3] == doctest::Approx(0.25 * 0.2));
  CHECK(tc.xi[5] == doctest::Approx(0.2 / (tc.C + 1.3)));
  CHECK_NOTHROW(TransferConstants::from_values(0.4, 0.3, 0.1, tower, tc.C, tc.xi));
  auto bad = tc.xi;
  bad[5] *= 1.01;
  CHECK_THROWS_AS(TransferConstants::from_values(0.4, 0.3, 0.1, tower, tc.C, bad), Error);
  CHECK_THROWS_AS(TransferConstants::from_values(0.4, 0.3, 0.1, tower, tc.C_tight, tc.xi), Error);
  CHECK_THROWS_AS(TransferConstants::make(0.3, 0.3, 0.1, tower, 0.5, 0.25, 0.2), Error);
  CHECK_THROWS_AS(TransferConstants::make(0.4, 0.3, 0.3, tower, 0.5, 0.25, 0.2), Error);
  CHECK_THROWS_AS(TransferConstants::make(0.5, 0.35, 0.1, tower, 0.5, 0.25, 0.2), Error);
}

TEST_CASE("decompose_shift") {
  SUBCASE("lattice point") {
    const auto p = TowerParams::make(1.0, 2, 1, 0, 0.6);
    const auto d = decompose_shift(17.0 - p.M1(), p);
    CHECK(d.m0 == 1);
    CHECK(d.tau == 0.0);
    CHECK(d.n0 == 17);
  }
  SUBCASE("single residue") {
    const auto p = TowerParams::make(0.7, 1, 2, 0, 0.8);
    const auto d = decompose_shift(3.3, p);
    CHECK(d.m0 == 1);
    CHECK(std::abs(d.tau) <= 0.35 + 1e-12);
  }
  SUBCASE("random property against an exhaustive m scan") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> t(0.0, 1e6), a(0.05, 3.0);
    std::uniform_int_distribution<int> Md(1, 40), Nd(1, 5);
    for (int i = 0; i < 5000; ++i) {
      const double alpha = a(rng);
      const int M = Md(rng);
      const auto p = TowerParams::make(alpha, M, Nd(rng), 0, 1.01 * alpha / M);
      const double x = t(rng);
      const auto d = decompose_shift(x, p);
      CHECK(std::abs(d.tau) <= alpha / (2.0 * M) + 1e-12);
      CHECK(d.m0 >= 1);
      CHECK(d.m0 <= M);
      // tau from its definition, in extended precision
      const long double direct = static_cast<long double>(d.n0) * alpha - x -
                                 static_cast<long double>(d.m0) * p.N() * 3 * alpha -
                                 static_cast<long double>(d.m0) * alpha / M;
      CHECK(std::abs(double(direct) - d.tau) < 1e-9);
      double best = 1e9;
      for (int m = 1; m <= M; ++m) {
        const long double v = static_cast<long double>(x) / alpha + static_cast<long double>(m) / M;
        best = std::min(best, double(std::abs(v - std::nearbyint(v))) * alpha);
      }
      CHECK(std::abs(d.tau) <= best + 1e-12);
    }
  }
}

TEST_CASE("continuous_to_discrete_witness") {
  SUBCASE("no hybrid part") {
    const auto tower = TowerParams::make(1.0, 4, 1, 3, 0.3);
    const auto tc = TransferConstants::make(0.4, 0.3, 0.1, tower, 0, 0, 0);
    for (double t : {0.0, 12.3, 1000.7}) {
      const auto w = continuous_to_discrete_witness(t, tc, nullptr);
      CHECK(w.l0 == 0);
      CHECK(w.n == w.parts.n0);
      CHECK(w.within_bracket);
      CHECK(w.within_tight_bracket);
      CHECK(double(w.n) <= t + tc.delta + 4 * tower.M1() + 1e-12);
    }
  }
  SUBCASE("targets at the current orbit value") {
    const auto tower = TowerParams::make(1.0, 4, 1, 3, 0.3);
    const auto tc = TransferConstants::make(0.4, 0.3, 0.1, tower, 0, 0, 0);
    const double t = 55.5;
    const auto n0 = decompose_shift(t, tower).n0;
    const HybridConstraint h({2.0}, {unit_power(2.0, static_cast<long double>(n0))}, 0.2);
    CHECK(continuous_to_discrete_witness(t, tc, &h).l0 == 0);
  }
  SUBCASE("lambda = (2, 3), epsilon = 0.5") {
    const double alpha = 1.0, eps = 0.5;
    const int M = 4, N = 1;
    const auto probe = TowerParams::make(alpha, M, N, 0, 0.3);
    const auto L = covering_number(TorusAngles::from_lambdas({2.0, 3.0}, alpha, probe.L1()), eps, 1000000).L;
    const auto tower = TowerParams::make(alpha, M, N, int(L), 0.3);
    const auto tc = TransferConstants::make(0.4, 0.3, 0.1, tower, 0, 0, 0);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> t(0.0, 1e5), ph(0.0, kTwoPi);
    for (int i = 0; i < 300; ++i) {
      const HybridConstraint h({2.0, 3.0}, {std::polar(1.0, ph(rng)), std::polar(1.0, ph(rng))}, eps);
      const double x = t(rng);
      const auto w = continuous_to_discrete_witness(x, tc, &h);
      CHECK(w.within_bracket);
      CHECK(w.within_tight_bracket);
      CHECK(w.l0 <= L);
      for (std::size_t j = 0; j < 2; ++j) {
        const long double phase = -static_cast<long double>(w.n) * alpha * std::log((long double)h.lambdas()[j]);
        const std::complex<long double> z = std::exp(std::complex<long double>(0.0L, phase));
        CHECK(std::abs(Complex(double(z.real()), double(z.imag())) - h.targets()[j]) < eps);
      }
    }
  }
}

TEST_CASE("counting_inequality_check") {
  const auto tower = TowerParams::make(1.0, 4, 1, 1, 0.3);
  const auto tc = TransferConstants::make(0.4, 0.3, 0.1, tower, 0, 0, 0);
  const std::int64_t N = 100;
  const auto horizon = std::int64_t(N + tc.C + 2);
  ContinuousWitnessSet V;
  V.horizon = double(N);
  SUBCASE("empty V") {
    const auto r = counting_inequality_check(V, discrete({}, horizon), tc, N);
    CHECK(r.holds());
    for (const auto& row : r.literal.rows) CHECK(row.rhs == 0.0);
  }
  SUBCASE("W is everything") {
    std::vector<std::int64_t> all(std::size_t(horizon) + 1);
    std::iota(all.begin(), all.end(), 0);
    V.intervals = {{0.0, double(N)}};
    const auto r = counting_inequality_check(V, discrete(all, horizon), tc, N);
    CHECK(r.holds());
    CHECK(r.tight.holds());
    CHECK(r.scaled.holds());
    CHECK(r.literal.aggregate_rhs == double(N));
  }
  SUBCASE("violations are reported") {
    V.intervals = {{10.0, 10.5}};
    const auto r = counting_inequality_check(V, discrete({}, horizon), tc, N);
    CHECK_FALSE(r.holds());
    CHECK(r.literal.violations == std::vector<std::int64_t>{10});
  }
  SUBCASE("W too short") {
    CHECK_THROWS_AS(counting_inequality_check(V, discrete({}, N), tc, N), Error);
  }
}

TEST_CASE("empirical_density") {
  const std::int64_t N = 1024;
  std::vector<std::int64_t> all, alt;
  for (std::int64_t n = 1; n <= N; ++n) {
    all.push_back(n);
    if (n % 2 == 0) alt.push_back(n);
  }
  CHECK(empirical_density(discrete(all, N)).density == 1.0);
  CHECK(empirical_density(discrete({}, N)).density == 0.0);
  const auto r = empirical_density(discrete(alt, N));
  CHECK(std::abs(r.density - 0.5) <= 1.0 / N);
  CHECK(r.profile.back().checkpoint == double(N));
  CHECK(r.profile.front().running_min == 0.0);  // prefix {1} holds no even number
  CHECK(r.profile[3].tail_min == doctest::Approx(0.5));

  ContinuousWitnessSet V;
  V.horizon = 100.0;
  V.intervals = {{0.0, 25.0}, {50.0, 75.0}};
  const auto c = empirical_density(V);
  CHECK(c.density == 0.5);
  CHECK(c.profile.front().density == 1.0);
  CHECK(c.profile.back().tail_min == 0.5);
}
