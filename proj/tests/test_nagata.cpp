#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qvalued/error.hpp"
#include "qvalued/nagata.hpp"

using namespace qvalued;

TEST_CASE("interval cover tiling") {
  const Cover c = interval_cover(3.0, 1.0, 0.0, 10.0);
  REQUIRE(c.size() == 4);
  const double expected[4][2] = {{0, 3}, {3, 6}, {6, 9}, {9, 12}};
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& iv = std::get<Interval>(c.members[k]);
    CHECK(iv.lo == expected[k][0]);
    CHECK(iv.hi == expected[k][1]);
    CHECK(member_diameter(c, k) == 3.0);
  }
  CHECK(cover_diameter(c) == 3.0);
  CHECK(members_containing(c, Point{3.0}) == std::vector<std::size_t>{1});
  CHECK(members_containing(c, Point{10.0}) == std::vector<std::size_t>{3});
  CHECK(members_containing(c, Point{10.5}).empty());

  CHECK_THROWS_AS(interval_cover(2.5, 1.0, 0.0, 10.0), ParameterRange);
  CHECK_THROWS_AS(interval_cover(3.0, 1.0, 5.0, 5.0), ParameterRange);
  CHECK_THROWS_AS(interval_cover(3.0, 0.0, 0.0, 5.0), ParameterRange);
}

TEST_CASE("grid lookup agrees with member containment") {
  const Cover c = interval_cover(3.0, 0.37, -2.0, 9.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 9.0);
  for (int k = 0; k < 2000; ++k) {
    const Point p{u(rng)};
    std::vector<std::size_t> slow;
    for (std::size_t m = 0; m < c.size(); ++m) {
      if (member_contains(c, m, p)) slow.push_back(m);
    }
    CHECK(members_containing(c, p) == slow);
  }
}

TEST_CASE("exact interval multiplicity") {
  const Cover c = interval_cover(3.0, 1.0, 0.0, 10.0);
  auto m = s_multiplicity(c, 1.0);
  CHECK(m.exact);
  CHECK(m.value == 2);
  CHECK(s_multiplicity(c, 4.0).value == 3);
  CHECK(s_multiplicity(c, 3.0).value == 2);
  CHECK(s_multiplicity(c, 100.0).value == 4);
  // a ground set inside one tile
  CHECK(s_multiplicity(interval_cover(3.0, 1.0, 0.0, 2.0), 1.0).value == 1);
  CHECK_THROWS_AS(s_multiplicity(c, 0.0), ParameterRange);
}

TEST_CASE("exact interval multiplicity matches a brute-force sweep") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> cs(3.0, 5.0), ss(0.2, 2.0), len(1.0, 30.0);
  for (int rep = 0; rep < 40; ++rep) {
    const double c = cs(rng), s = ss(rng), lo = -1.0, hi = lo + len(rng);
    const Cover cover = interval_cover(c, s, lo, hi);
    for (double probe : {0.5 * s, s, 2.5 * s, 7.0 * s}) {
      const std::size_t swept = oracle::swept_interval_multiplicity(
          c * s, cover.size(), lo, hi, probe, 20000);
      const std::size_t exact = s_multiplicity(cover, probe).value;
      // the fine sweep can only miss the supremum
      CHECK(exact >= swept);
      CHECK(exact <= swept + 1);
    }
    CHECK(s_multiplicity(cover, s).value <= 2);
  }
}

TEST_CASE("multiplicity is monotone in s") {
  const Cover c = interval_cover(3.0, 1.0, 0.0, 40.0);
  std::size_t prev = 0;
  for (double s = 0.25; s < 40.0; s *= 1.3) {
    const std::size_t v = s_multiplicity(c, s).value;
    CHECK(v >= prev);
    prev = v;
  }
  // reproducible: the exact path draws nothing
  ProbeStrategy other;
  other.seed = 999;
  CHECK(s_multiplicity(c, 1.0, other).value == s_multiplicity(c, 1.0).value);
}

TEST_CASE("box covers") {
  const Cover sup = box_cover(3.0, 1.0, {0, 0}, {10, 10}, Norm::kSup);
  CHECK(sup.size() == 16);
  CHECK(cover_diameter(sup) == 3.0);
  const auto exact = s_multiplicity(sup, 1.0);
  CHECK(exact.exact);
  CHECK(exact.value == 4);

  const Cover euc = box_cover(3.0, 1.0, {0, 0}, {10, 10}, Norm::kEuclidean);
  CHECK(cover_diameter(euc) == doctest::Approx(3.0 * std::sqrt(2.0)));
  ProbeStrategy probes;
  probes.probes = 4000;
  const auto lower = s_multiplicity(euc, 1.0, probes);
  CHECK_FALSE(lower.exact);
  CHECK(lower.value >= 2);
  CHECK(lower.value <= 4);
  CHECK(lower.per_probe.size() == 4000);

  CHECK(members_containing(sup, Point{3.0, 0.5}) == std::vector<std::size_t>{4});
}

TEST_CASE("sample covers") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<Point> samples;
  for (int k = 0; k < 400; ++k) samples.push_back({u(rng), u(rng)});
  const Space plane{2, Norm::kEuclidean};
  const Cover c = sample_cover(plane, samples, 2.0, 1.0);
  CHECK(cover_diameter(c) <= 2.0);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    CHECK_FALSE(members_containing(c, samples[k]).empty());
  }
  ProbeStrategy probes;
  probes.probes = 500;
  const auto m = s_multiplicity(c, 1.0, probes);
  CHECK_FALSE(m.exact);
  CHECK(m.value >= 1);

  const Cover whole = sample_cover(plane, samples, 100.0, 1.0);
  CHECK(whole.size() == 1);
  CHECK(s_multiplicity(whole, 1.0, probes).value == 1);
}

TEST_CASE("multiset counts") {
  CHECK(multiset_count(2, 2) == 3);
  CHECK(multiset_count(4, 1) == 4);
  CHECK(multiset_count(4, 3) == 20);
  CHECK(multiset_count(10, 5) == 2002);
  CHECK(multiset_count(1u << 20, 5) == std::numeric_limits<std::size_t>::max());
}

TEST_CASE("product cover structure") {
  const Cover two = interval_cover(3.0, 1.0, 0.0, 5.0);
  REQUIRE(two.size() == 2);
  const ProductCover pc = product_cover(two, 2);
  REQUIRE(pc.size() == 3);
  CHECK(pc.members[0] == std::vector<std::size_t>{0, 0});
  CHECK(pc.members[1] == std::vector<std::size_t>{0, 1});
  CHECK(pc.members[2] == std::vector<std::size_t>{1, 1});

  const Cover base = interval_cover(3.0, 1.0, 0.0, 10.0);
  const ProductCover q1 = product_cover(base, 1);
  CHECK(q1.size() == base.size());
  const ProductCover q2 = product_cover(base, 2);
  CHECK(q2.size() == multiset_count(base.size(), 2));
  for (std::size_t m = 0; m < q2.size(); ++m) CHECK(product_member_diameter(q2, m) <= 3.0);
  CHECK(cover_diameter(q2) == 3.0);

  const Cover huge = interval_cover(3.0, 1.0, 0.0, 1e5);
  CHECK_THROWS_AS(product_cover(huge, 5), CapExceeded);
}

TEST_CASE("product member containment") {
  const Space line{1, Norm::kEuclidean};
  const Cover base = interval_cover(3.0, 1.0, 0.0, 10.0);
  const ProductCover pc = product_cover(base, 3);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int rep = 0; rep < 300; ++rep) {
    const QPoint x(line, {{u(rng)}, {u(rng)}, {u(rng)}});
    const auto met = product_members_containing(pc, x);
    REQUIRE(met.size() == 1);  // tiles partition the range
    for (std::size_t m = 0; m < pc.size(); ++m) {
      const bool listed = std::find(met.begin(), met.end(), m) != met.end();
      CHECK(product_member_contains(pc, m, x) == listed);
    }
  }
}

TEST_CASE("Nagata product bound on the line") {
  const Cover base = interval_cover(3.0, 1.0, 0.0, 10.0);
  ProbeStrategy probes;
  probes.probes = 3000;

  const NagataReport q1 = verify_nagata_bound(base, 1, probes);
  CHECK(q1.base_multiplicity == 2);
  CHECK(q1.base_exact);
  CHECK(q1.product_multiplicity == 2);

  const NagataReport q2 = verify_nagata_bound(base, 2, probes);
  CHECK(q2.bound == 4);
  CHECK(q2.product_multiplicity <= 4);
  CHECK(q2.non_vacuous);
  CHECK(q2.coverage_ok);
  CHECK(q2.passed());

  const NagataReport q3 = verify_nagata_bound(base, 3, probes);
  CHECK(q3.bound == 8);
  CHECK(q3.product_multiplicity <= 8);
  CHECK(q3.passed());
  CHECK(q3.per_probe.size() == 3000);

  const NagataReport declared = verify_nagata_bound(base, 2, probes, 3);
  CHECK(declared.bound == 9);
}

TEST_CASE("Nagata product bound for sample and box covers") {
  ProbeStrategy probes;
  probes.probes = 500;
  const Cover box = box_cover(3.0, 1.0, {0, 0}, {6, 6}, Norm::kSup);
  const NagataReport r = verify_nagata_bound(box, 2, probes);
  CHECK(r.base_multiplicity == 4);
  CHECK(r.product_multiplicity <= 16);
  CHECK(r.passed());

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 6.0);
  std::vector<Point> samples;
  for (int k = 0; k < 200; ++k) samples.push_back({u(rng)});
  const Cover sc = sample_cover(Space{1, Norm::kEuclidean}, samples, 3.0, 1.0);
  const NagataReport rs = verify_nagata_bound(sc, 2, probes);
  CHECK(rs.coverage_ok);
  CHECK(rs.product_multiplicity <= rs.bound);
}

TEST_CASE("no probes") {
  ProbeStrategy none;
  none.probes = 0;
  const Cover euc = box_cover(3.0, 1.0, {0, 0}, {4, 4}, Norm::kEuclidean);
  CHECK_THROWS_AS(s_multiplicity(euc, 1.0, none), InputError);
  CHECK_THROWS_AS(verify_nagata_bound(interval_cover(3.0, 1.0, 0.0, 4.0), 2, none),
                  InputError);
}
