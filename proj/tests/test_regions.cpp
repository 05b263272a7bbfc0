#include <algorithm>
#include <random>

#include "doctest.h"
#include "zetashift/distance.hpp"
#include "zetashift/regions.hpp"

using namespace zetashift;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("grid is deterministic and inside the region") {
  const auto disc = CompactRegion::disc({0.8, 3.0}, 0.02);
  const auto a = disc.grid();
  const auto b = disc.grid();
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].z == b[k].z);
    CHECK(disc.contains(a[k].z));
  }
  const auto rect = CompactRegion::rect(0.6, 0.9, -0.1, 0.1, 50.0);
  for (const auto& g : rect.grid()) CHECK(rect.contains(g.z));
  CHECK(rect.grid().size() == 16 * 11);
}

TEST_CASE("enlarge") {
  const Strip strip(0.5, 1.0);
  SUBCASE("bounding box plus padding") {
    const auto K0 = enlarge(CompactRegion::disc({0.75, 0.0}, 0.05), 0.05, strip);
    const auto& r = std::get<Rect>(K0.shape());
    CHECK(r.sigma_min == doctest::Approx(0.65).epsilon(1e-14));
    CHECK(r.sigma_max == doctest::Approx(0.85).epsilon(1e-14));
    CHECK(r.t_min == doctest::Approx(-0.1).epsilon(1e-14));
    CHECK(r.t_max == doctest::Approx(0.1).epsilon(1e-14));
  }
  SUBCASE("degenerate padding") {
    CHECK(code_of([&] { enlarge(CompactRegion::disc({0.75, 0.0}, 0.05), 0.0, strip); }) ==
          ErrorCode::MarginTooSmall);
  }
  SUBCASE("padding near the strip margin") {
    const auto K = CompactRegion::rect(0.6, 0.9, 0.0, 0.2, 100.0);
    CHECK(code_of([&] { enlarge(K, 0.1, strip); }) == ErrorCode::MarginTooSmall);
    const double delta0 = 0.0999;
    const auto K0 = enlarge(K, delta0, strip);
    // Grid oracle: every grid point of K against the boundary of K0.
    const auto& r = std::get<Rect>(K0.shape());
    double closest = 1e9;
    const int n = 400;
    for (const auto& g : K.grid()) {
      for (int k = 0; k <= n; ++k) {
        const double u = double(k) / n;
        const Complex boundary[] = {
            {r.sigma_min + u * r.width(), r.t_min}, {r.sigma_min + u * r.width(), r.t_max},
            {r.sigma_min, r.t_min + u * r.height()}, {r.sigma_max, r.t_min + u * r.height()}};
        for (const auto& y : boundary) closest = std::min(closest, std::abs(g.z - y));
      }
    }
    CHECK(closest >= delta0 - 1e-12);
    CHECK(distance_to_complement(K, r) == doctest::Approx(delta0).epsilon(1e-12));
    CHECK(K0.fits_in(strip, 0.0));
  }
}

TEST_CASE("tower params") {
  const auto p = TowerParams::make(1.0, 2, 1, 1, 0.6);
  CHECK(p.M1() == 3.5);
  CHECK(p.L1() == 8);
  CHECK_THROWS_AS(TowerParams::from_values(1.0, 2, 1, 1, 3.4, 8, 0.6), Error);
  CHECK_THROWS_AS(TowerParams::from_values(1.0, 2, 1, 1, 3.5, 9, 0.6), Error);
  CHECK_NOTHROW(TowerParams::from_values(1.0, 2, 1, 1, 3.5, 8, 0.6));
  // alpha / M < delta
  CHECK_THROWS_AS(TowerParams::make(1.0, 2, 1, 1, 0.5), Error);
}

TEST_CASE("build_tower") {
  const auto K0 = CompactRegion::rect(0.6, 0.9, -0.9, 0.9, 20.0);
  SUBCASE("one piece") {
    const auto p = TowerParams::make(1.0, 1, 1, 0, 1.5);
    const auto tower = build_tower(K0, p);
    const auto& u = std::get<ShiftedUnion>(tower.shape());
    REQUIRE(u.shifts.size() == 1);
    CHECK(u.shifts[0] == p.M1());
  }
  SUBCASE("M=2, N=1, L=1") {
    const auto p = TowerParams::make(1.0, 2, 1, 1, 0.6);
    const auto tower = build_tower(K0, p);
    const auto& u = std::get<ShiftedUnion>(tower.shape());
    CHECK(u.shifts == std::vector<double>{3.5, 7.0, 11.5, 15.0});
    // Interval oracle on imaginary extents, all pairs.
    for (std::size_t a = 0; a < u.shifts.size(); ++a) {
      for (std::size_t b = a + 1; b < u.shifts.size(); ++b) {
        const double lo_a = u.shifts[a] - 0.9, hi_a = u.shifts[a] + 0.9;
        const double lo_b = u.shifts[b] - 0.9, hi_b = u.shifts[b] + 0.9;
        CHECK((hi_a < lo_b || hi_b < lo_a));
      }
    }
  }
  SUBCASE("base outside the N alpha band") {
    const auto tall = CompactRegion::rect(0.6, 0.9, -1.2, 1.2, 20.0);
    CHECK_THROWS_AS(build_tower(tall, TowerParams::make(1.0, 2, 1, 1, 0.6)), Error);
  }
  SUBCASE("overlapping union is rejected") {
    CHECK(code_of([&] { CompactRegion::shifted_union(K0, {0.0, 1.8}); }) ==
          ErrorCode::OverlapDetected);
    CHECK_NOTHROW(CompactRegion::shifted_union(K0, {0.0, 1.81}));
  }
}

TEST_CASE("locate") {
  const auto K0 = CompactRegion::rect(0.6, 0.9, -0.5, 0.5, 20.0);
  const auto p = TowerParams::make(0.5, 3, 1, 4, 0.2);
  const auto tower = build_tower(K0, p);
  const auto hit = locate(tower, Complex(0.75, p.M1() * p.alpha()));
  REQUIRE(hit.has_value());
  CHECK(*hit == PieceLabel{1, 0});
  CHECK_FALSE(locate(tower, Complex(0.75, 1e6)).has_value());
  CHECK_FALSE(locate(tower, Complex(0.1, p.M1() * p.alpha())).has_value());

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> m_dist(1, p.M()), l_dist(0, p.L());
  std::uniform_real_distribution<double> x(0.6, 0.9), y(-0.5, 0.5);
  for (int i = 0; i < 1000; ++i) {
    const PieceLabel label{m_dist(rng), l_dist(rng)};
    const Complex z = Complex(x(rng), y(rng)) + Complex(0.0, p.shift(label.m, label.l));
    const auto found = locate(tower, z);
    REQUIRE(found.has_value());
    CHECK(*found == label);
  }
  for (const auto& g : tower.grid()) {
    const auto& u = std::get<ShiftedUnion>(tower.shape());
    CHECK(locate(tower, g.z) == std::optional<PieceLabel>(u.labels[g.piece]));
  }
}

TEST_CASE("sup_distance") {
  const auto zeta = ZSpecFunction(ZSpec::riemann());
  const auto K = CompactRegion::disc({0.8, 0.0}, 0.02);
  const MixedTarget one(PolynomialTarget({0.8, 0.0}, {Complex(1.0)}));

  SUBCASE("zeta against 1 matches a dense independent grid") {
    const double d = sup_distance(zeta, 0.0, one, K);
    double dense = 0.0;
    const int n = 200;
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; b <= n; ++b) {
        const Complex s = Complex(0.78 + 0.04 * a / n, -0.02 + 0.04 * b / n);
        if (std::abs(s - Complex(0.8, 0.0)) > 0.02) continue;
        dense = std::max(dense, std::abs(eval_riemann_zeta(s) - 1.0));
      }
    }
    CHECK(d > 0.0);
    CHECK(d == doctest::Approx(dense).epsilon(1e-3));
  }
  SUBCASE("duplicated tuple components") {
    const auto pair = ZSpecFunction(ZSpec::tuple({ZSpec::riemann(), ZSpec::riemann()}));
    const MixedTarget twice({}, {PolynomialTarget({0.8, 0.0}, {Complex(1.0)}),
                                 PolynomialTarget({0.8, 0.0}, {Complex(1.0)})});
    CHECK(sup_distance(pair, 5.0, twice, K) == sup_distance(zeta, 5.0, one, K));
    CHECK_THROWS_AS(sup_distance(pair, 5.0, one, K), Error);
  }
  SUBCASE("refinement never reports less") {
    for (double shift : {0.0, 17.0, 101.5}) {
      const double coarse = sup_distance(zeta, shift, one, K.with_density(100.0));
      const double fine = sup_distance(zeta, shift, one, K.with_density(400.0));
      CHECK(fine >= coarse - 1e-10);
    }
  }
}
