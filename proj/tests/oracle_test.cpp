#include <doctest.h>

#include <random>
#include <set>

#include "covlink/oracle.hpp"

using namespace covlink;

TEST_SUITE("oracle") {

TEST_CASE("collinear example yields the published class pattern") {
  const Instance e2 = builtin_example("example2");
  const GraphStructure g = build_edges(GraphKind::Line, 3);
  const OracleResult res = enumerate(e2, g, {});
  REQUIRE(res.feasible);
  CHECK(res.objective == 5.0);
  bool pattern = false;
  for (const Assignment& a : res.optima) {
    const auto cls = a.classes(3);
    std::set<std::set<int>> shape;
    for (int j = 1; j <= 3; ++j) shape.insert({cls[j].begin(), cls[j].end()});
    pattern |= shape == std::set<std::set<int>>{{0, 1}, {2}, {3, 4}};
  }
  CHECK(pattern);
}

TEST_CASE("single point, single facility") {
  Instance inst;
  inst.points = {Point(0.5, 0.5)};
  inst.weights = {2.5};
  inst.cover_radii = {0.1};
  inst.p = 1;
  const GraphStructure g = build_edges(GraphKind::Complete, 1);
  const OracleResult res = enumerate(inst, g, {});
  REQUIRE(res.feasible);
  CHECK(res.objective == 2.5);
}

TEST_CASE("forced links make far pairs infeasible") {
  Instance inst;
  inst.points = {Point(0, 0), Point(10, 0)};
  inst.weights = {1, 1};
  inst.cover_radii = {0.5, 0.5};
  inst.link_radius = 0.2;
  inst.p = 2;
  const GraphStructure g = build_edges(GraphKind::Complete, 2);
  const OracleResult res = enumerate(inst, g, {});
  CHECK(!res.feasible);
  OracleConfig relaxed;
  relaxed.require_nonempty = false;
  const OracleResult res2 = enumerate(inst, g, relaxed);
  REQUIRE(res2.feasible);
  CHECK(res2.objective == 1.0);
}

TEST_CASE("size guard") {
  const Instance inst = gen_random(3, 25, WeightMode::Unit, 0.1, 0.2, 3);
  const GraphStructure g = build_edges(GraphKind::Line, 3);
  CHECK_THROWS_WITH_AS(enumerate(inst, g, {}),
                       doctest::Contains("too large"), std::invalid_argument);
}

TEST_CASE("listed optima satisfy separation and in-class Helly validity") {
  std::mt19937_64 rng(67);
  for (int t = 0; t < 8; ++t) {
    const Instance inst =
        gen_random(500 + t, 8, WeightMode::Unit, 0.15, 0.35, 3);
    const GraphStructure g = build_edges(GraphKind::Star, 3);
    const OracleResult res = enumerate(inst, g, {});
    if (!res.feasible) continue;
    for (const Assignment& a : res.optima) {
      CHECK(solve_rho(inst, g, a).rho <= kSepTol);
      // Direct Dykstra confirmation of each class's common coverage point.
      const auto cls = a.classes(3);
      for (int j = 1; j <= 3; ++j) {
        if (cls[j].empty()) continue;
        std::vector<Disk> disks;
        Point centroid = Point::Zero();
        for (int i : cls[j]) {
          disks.push_back(inst.cover_disk(i));
          centroid += inst.points[i];
        }
        centroid /= double(cls[j].size());
        const Point common = dykstra_project(disks, centroid, 1e-12, 50000).point;
        for (const Disk& d : disks)
          CHECK((common - d.center).norm() <= d.radius + 1e-7);
      }
    }
  }
}

TEST_CASE("symmetry skipping changes counts, never the objective") {
  std::mt19937_64 rng(71);
  int checked = 0;
  for (int t = 0; t < 20; ++t) {
    const int p = 2 + (t % 2);
    const GraphKind kinds[] = {GraphKind::Complete, GraphKind::Star,
                               GraphKind::Cycle, GraphKind::Matching};
    const GraphKind gk = kinds[t % 4];
    if (gk == GraphKind::Matching && p % 2) continue;
    const Instance inst =
        gen_random(700 + t, 6, WeightMode::Unit, 0.2, 0.3, p);
    const GraphStructure g = build_edges(gk, p);
    OracleConfig with, without;
    without.skip_symmetric = false;
    const OracleResult a = enumerate(inst, g, with);
    const OracleResult b = enumerate(inst, g, without);
    CHECK(a.feasible == b.feasible);
    if (a.feasible) CHECK(a.objective == b.objective);
    CHECK(a.enumerated <= b.enumerated);
    ++checked;
  }
  CHECK(checked >= 15);
}

}  // TEST_SUITE
