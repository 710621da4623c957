#include <doctest.h>

#include <cmath>
#include <random>

#include "covlink/geometry.hpp"

using namespace covlink;

namespace {

Disk unit_disk(double x, double y) { return {Point(x, y), 1.0}; }

double u01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

Point random_point(std::mt19937_64& rng, double lo, double hi) {
  return Point(lo + (hi - lo) * u01(rng), lo + (hi - lo) * u01(rng));
}

// Independent nearest-point oracle over the region's defining disks.
Point dykstra_region_oracle(const ConvexRegion& s, const Point& x) {
  std::vector<Disk> disks;
  double margin = 0.0;
  switch (s.kind()) {
    case ConvexRegion::Kind::Disk:
      disks = {s.as_disk()};
      break;
    case ConvexRegion::Kind::Enlarged:
      margin = s.margin();
      [[fallthrough]];
    case ConvexRegion::Kind::Lens:
      disks = {s.as_lens().d1(), s.as_lens().d2()};
      break;
  }
  const Point core = dykstra_project(disks, x, 1e-13, 50000).point;
  const double d = (x - core).norm();
  if (d <= margin) return x;
  if (margin == 0.0) return core;
  return core + (margin / d) * (x - core);
}

ConvexRegion random_region(std::mt19937_64& rng) {
  const int kind = static_cast<int>(rng() % 3);
  const Point c1 = random_point(rng, -1, 1);
  const double r1 = 0.3 + u01(rng);
  if (kind == 0) return ConvexRegion::disk({c1, r1});
  // Keep the second disk close enough to guarantee a lens.
  const double r2 = 0.3 + u01(rng);
  const double dist = u01(rng) * (r1 + r2) * 0.95;
  const double ang = 2 * M_PI * u01(rng);
  const Point c2 = c1 + dist * Point(std::cos(ang), std::sin(ang));
  const Lens lens({c1, r1}, {c2, r2});
  if (kind == 1) return ConvexRegion::lens(lens);
  return ConvexRegion::enlarged(lens, 0.5 * u01(rng));
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("circle intersections: tangent, generic, disjoint") {
  const auto tangent =
      circle_circle_intersections(unit_disk(0, 0), unit_disk(2, 0));
  REQUIRE(tangent.size() == 1);
  CHECK(tangent[0].x() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tangent[0].y() == doctest::Approx(0.0).epsilon(1e-12));

  const auto generic =
      circle_circle_intersections(unit_disk(0, 0), unit_disk(1, 0));
  REQUIRE(generic.size() == 2);
  const double h = std::sqrt(3.0) / 2.0;  // analytic two-circle solution
  CHECK(generic[0].x() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(generic[0].y() == doctest::Approx(-h).epsilon(1e-12));
  CHECK(generic[1].x() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(generic[1].y() == doctest::Approx(h).epsilon(1e-12));

  CHECK(circle_circle_intersections(unit_disk(0, 0), unit_disk(5, 0)).empty());
}

TEST_CASE("circle intersections: coincident circles rejected") {
  CHECK_THROWS_AS(circle_circle_intersections(unit_disk(0, 0), unit_disk(0, 0)),
                  std::invalid_argument);
  // Concentric with different radii is legal: nested, no intersections.
  CHECK(circle_circle_intersections({Point(0, 0), 1.0}, {Point(0, 0), 2.0})
            .empty());
}

TEST_CASE("lens construction") {
  CHECK_THROWS_AS(Lens(unit_disk(0, 0), unit_disk(5, 0)), std::invalid_argument);
  const Lens l(unit_disk(0, 0), unit_disk(1, 0));
  CHECK(l.vertices().size() == 2);
  for (const Point& v : l.vertices()) {
    CHECK(std::abs((v - Point(0, 0)).norm() - 1.0) < 1e-12);
    CHECK(std::abs((v - Point(1, 0)).norm() - 1.0) < 1e-12);
  }
  // Containment: no vertices cached.
  const Lens nested({Point(0, 0), 2.0}, {Point(0.1, 0), 0.5});
  CHECK(nested.vertices().empty());
}

TEST_CASE("projection examples") {
  const auto disk = ConvexRegion::disk(unit_disk(0, 0));
  const Point pd = project(disk, Point(2, 0));
  CHECK((pd - Point(1, 0)).norm() < 1e-12);

  const Lens lens(unit_disk(0, 0), unit_disk(1, 0));
  const auto rl = ConvexRegion::lens(lens);
  const double h = std::sqrt(3.0) / 2.0;

  // Nearest lens point to (0.5, 2) is the top vertex.
  const Point pv = project(rl, Point(0.5, 2));
  CHECK((pv - Point(0.5, h)).norm() < 1e-12);
  CHECK((pv - dykstra_region_oracle(rl, Point(0.5, 2))).norm() < 1e-6);

  // Projection onto circle 2 lands inside disk 1.
  const Point ps = project(rl, Point(-1, 0));
  CHECK((ps - Point(0, 0)).norm() < 1e-12);
  CHECK((ps - dykstra_region_oracle(rl, Point(-1, 0))).norm() < 1e-6);
}

TEST_CASE("contains on enlarged lenses") {
  const Lens lens(unit_disk(0, 0), unit_disk(1, 0));
  const auto oset = ConvexRegion::enlarged(lens, 0.2);
  CHECK(contains(ConvexRegion::disk(unit_disk(0, 0)), Point(0, 0)));
  // d((0.5, 1.05), lens) = 1.05 - sqrt(3)/2 ~ 0.184
  CHECK(contains(oset, Point(0.5, 1.05)));
  CHECK(!contains(oset, Point(0.5, 1.10)));
}

TEST_CASE("disk pair predicate") {
  CHECK(!disk_pair_nonempty(Point(0, 0), 0.2, Point(0.5, 0), 0.2));
  CHECK(disk_pair_nonempty(Point(0, 0), 0.5, Point(1, 0), 0.5));  // tangent
  CHECK(disk_pair_nonempty(Point(0, 0), 0.1, Point(0, 0), 0.1));
}

TEST_CASE("disk triple predicate") {
  CHECK(disk_triple_nonempty(unit_disk(0, 0), unit_disk(1, 0),
                             unit_disk(0.5, 0.8)));
  // Pairwise nonempty but no common point.
  const Disk a = unit_disk(0, 0), b = unit_disk(1.8, 0), c = unit_disk(0.9, 1.5);
  CHECK(disk_pair_nonempty(a.center, 1, b.center, 1));
  CHECK(disk_pair_nonempty(a.center, 1, c.center, 1));
  CHECK(disk_pair_nonempty(b.center, 1, c.center, 1));
  CHECK(!disk_triple_nonempty(a, b, c));
  // Grid oracle confirmation on a 400x400 grid.
  bool found = false;
  for (int gx = 0; gx < 400 && !found; ++gx)
    for (int gy = 0; gy < 400 && !found; ++gy) {
      const Point q(-1.0 + 3.8 * gx / 399.0, -1.0 + 3.5 * gy / 399.0);
      found = (q - a.center).norm() <= 1 && (q - b.center).norm() <= 1 &&
              (q - c.center).norm() <= 1;
    }
  CHECK(!found);
  CHECK(!disk_triple_nonempty(unit_disk(0, 0), unit_disk(5, 0),
                              unit_disk(0.5, 0)));
}

TEST_CASE("disk-oset predicate") {
  const Lens lens(unit_disk(0, 0), unit_disk(1, 0));
  CHECK(!disk_oset_nonempty(unit_disk(3, 0), lens, 0.2));  // d = 2 > 1.2
  CHECK(disk_oset_nonempty(unit_disk(3, 0), lens, 1.0));   // 2 <= 2, tangent
  const Point vertex = lens.vertices()[0];
  CHECK(disk_oset_nonempty({vertex, 0.05}, lens, 0.0));
}

TEST_CASE("emptiness margin: overlapping disks") {
  const std::vector<ConvexRegion> regs = {
      ConvexRegion::disk(unit_disk(0, 0)), ConvexRegion::disk(unit_disk(0.5, 0))};
  const Emptiness em = emptiness_margin(regs);
  REQUIRE(em.verdict == Emptiness::Verdict::Nonempty);
  CHECK((em.witness - Point(0, 0)).norm() <= 1.0 + 1e-9);
  CHECK((em.witness - Point(0.5, 0)).norm() <= 1.0 + 1e-9);
}

TEST_CASE("emptiness margin: far O-sets are certified empty") {
  const Lens l1(unit_disk(0, 0), unit_disk(1, 0));
  const Lens l2(unit_disk(6, 0), unit_disk(7, 0));
  const std::vector<ConvexRegion> regs = {ConvexRegion::enlarged(l1, 0.1),
                                          ConvexRegion::enlarged(l2, 0.1)};
  const Emptiness em = emptiness_margin(regs);
  CHECK(em.verdict == Emptiness::Verdict::Empty);
  const SetDistance d = set_distance(regs[0], regs[1]);
  CHECK(d.lower > 4.0);  // collinear gap, well beyond the 0.2 enlargements
  CHECK(d.upper >= d.lower - 1e-9);
}

TEST_CASE("emptiness margin agrees with the exact triple predicate") {
  const Disk d1 = unit_disk(0, 0), d2 = unit_disk(2, 0), d3 = unit_disk(1, 2);
  const std::vector<ConvexRegion> regs = {ConvexRegion::disk(d1),
                                          ConvexRegion::disk(d2),
                                          ConvexRegion::disk(d3)};
  const Emptiness em = emptiness_margin(regs);
  const bool exact = disk_triple_nonempty(d1, d2, d3);
  REQUIRE(em.verdict != Emptiness::Verdict::Ambiguous);
  CHECK((em.verdict == Emptiness::Verdict::Nonempty) == exact);
}

TEST_CASE("exact vs iterative agreement on random configurations") {
  std::mt19937_64 rng(42);
  int ambiguous = 0;
  for (int t = 0; t < 1000; ++t) {
    const Point a = random_point(rng, 0, 1), b = random_point(rng, 0, 1),
                c = random_point(rng, 0, 1);
    const double Ra = 0.1 + 0.4 * u01(rng), Rb = 0.1 + 0.4 * u01(rng),
                 Rc = 0.1 + 0.4 * u01(rng);
    const int mode = t % 3;
    if (mode == 0) {
      const std::vector<ConvexRegion> regs = {ConvexRegion::disk({a, Ra}),
                                              ConvexRegion::disk({b, Rb})};
      const Emptiness em = emptiness_margin(regs);
      if (em.verdict == Emptiness::Verdict::Ambiguous) {
        ++ambiguous;
        continue;
      }
      CHECK((em.verdict == Emptiness::Verdict::Nonempty) ==
            disk_pair_nonempty(a, Ra, b, Rb));
    } else if (mode == 1) {
      const std::vector<ConvexRegion> regs = {ConvexRegion::disk({a, Ra}),
                                              ConvexRegion::disk({b, Rb}),
                                              ConvexRegion::disk({c, Rc})};
      const Emptiness em = emptiness_margin(regs);
      if (em.verdict == Emptiness::Verdict::Ambiguous) {
        ++ambiguous;
        continue;
      }
      CHECK((em.verdict == Emptiness::Verdict::Nonempty) ==
            disk_triple_nonempty({a, Ra}, {b, Rb}, {c, Rc}));
    } else {
      if (!disk_pair_nonempty(a, Ra, b, Rb)) continue;
      const Lens lens({a, Ra}, {b, Rb});
      const double r = 0.2 * u01(rng);
      const std::vector<ConvexRegion> regs = {ConvexRegion::disk({c, Rc}),
                                              ConvexRegion::enlarged(lens, r)};
      const Emptiness em = emptiness_margin(regs);
      if (em.verdict == Emptiness::Verdict::Ambiguous) {
        ++ambiguous;
        continue;
      }
      CHECK((em.verdict == Emptiness::Verdict::Nonempty) ==
            disk_oset_nonempty({c, Rc}, lens, r));
    }
  }
  CHECK(ambiguous < 20);  // clear margins dominate random geometry
}

TEST_CASE("projection idempotence and optimality") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const ConvexRegion s = random_region(rng);
    for (int k = 0; k < 50; ++k) {
      const Point x = random_point(rng, -3, 3);
      const Point px = project(s, x);
      CHECK((project(s, px) - px).norm() < 1e-12);
      // Optimality against region samples (projections of random probes).
      const Point b = project(s, random_point(rng, -3, 3));
      CHECK((x - px).norm() <= (x - b).norm() + 1e-9);
    }
  }
}

TEST_CASE("enlargement identity at r = 0") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const Point c1 = random_point(rng, 0, 1);
    const Point c2 = c1 + 0.5 * random_point(rng, -1, 1);
    const double r1 = 0.4 + 0.4 * u01(rng), r2 = 0.4 + 0.4 * u01(rng);
    if (!disk_pair_nonempty(c1, r1, c2, r2)) continue;
    const Lens lens({c1, r1}, {c2, r2});
    const auto flat = ConvexRegion::lens(lens);
    const auto zero = ConvexRegion::enlarged(lens, 0.0);
    for (int k = 0; k < 100; ++k) {
      const Point x = random_point(rng, -1, 2);
      const double d = region_distance(flat, x);
      if (std::abs(d) < 1e-9) continue;  // boundary band excluded
      CHECK(contains(zero, x) == contains(flat, x));
    }
  }
}

TEST_CASE("O-set envelope: enlarged lens sits inside the enlarged disks") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 100; ++t) {
    const Point c1 = random_point(rng, 0, 1);
    const Point c2 = c1 + 0.3 * random_point(rng, -1, 1);
    const double r1 = 0.3 + 0.3 * u01(rng), r2 = 0.3 + 0.3 * u01(rng);
    if (!disk_pair_nonempty(c1, r1, c2, r2)) continue;
    const double r = 0.5 * u01(rng);
    const auto oset = ConvexRegion::enlarged(Lens({c1, r1}, {c2, r2}), r);
    for (int k = 0; k < 50; ++k) {
      const Point x = random_point(rng, -1, 2);
      if (!contains(oset, x, kGeomTol)) continue;
      CHECK((x - c1).norm() <= r1 + r + 1e-9);
      CHECK((x - c2).norm() <= r2 + r + 1e-9);
    }
  }
}

TEST_CASE("minkowski membership oracle") {
  const std::vector<Disk> pair = {unit_disk(0, 0), unit_disk(1, 0)};
  const Point inside(0.5, 0.2);
  CHECK(minkowski_member_oracle(pair, 0.0, inside));
  CHECK(minkowski_member_oracle(pair, 0.2, Point(0.5, 1.05)));
  CHECK(!minkowski_member_oracle(pair, 0.2, Point(0.5, 1.10)));

  const std::vector<Disk> empty_pair = {unit_disk(0, 0), unit_disk(5, 0)};
  CHECK_THROWS_AS(minkowski_member_oracle(empty_pair, 0.1, Point(0, 0)),
                  std::invalid_argument);
}

TEST_CASE("Lemma-3-style identity on a sampled triple") {
  // Enlarging the disk intersection equals intersecting the pairwise
  // enlarged lenses; checked on a grid with a boundary band excluded.
  const std::vector<Disk> disks = {unit_disk(0, 0), unit_disk(1, 0),
                                   unit_disk(0.5, 0.8)};
  const double r = 0.1;
  std::vector<ConvexRegion> osets;
  for (size_t i = 0; i < disks.size(); ++i)
    for (size_t j = i + 1; j < disks.size(); ++j)
      osets.push_back(ConvexRegion::enlarged(Lens(disks[i], disks[j]), r));
  int checked = 0;
  for (int gx = 0; gx < 60; ++gx)
    for (int gy = 0; gy < 60; ++gy) {
      const Point x(-1.3 + 3.6 * gx / 59.0, -1.3 + 3.4 * gy / 59.0);
      const Point core = dykstra_project(disks, x, 1e-12, 20000).point;
      const double dist = (x - core).norm();
      if (std::abs(dist - r) < 1e-6) continue;
      double worst = 0.0;
      for (const auto& o : osets)
        worst = std::max(worst, region_distance(o, x));
      if (worst > 0 && worst < 1e-6) continue;  // boundary band
      const bool left = dist <= r;
      const bool right = worst <= 1e-9;
      CHECK(left == right);
      ++checked;
    }
  CHECK(checked > 3000);
}

}  // TEST_SUITE
