// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exit code = number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "covlink/bench.hpp"
#include "covlink/engine.hpp"
#include "covlink/oracle.hpp"
#include "covlink/report.hpp"

using namespace covlink;

namespace {

using Clock = std::chrono::steady_clock;

struct Criterion {
  int id;
  const char* title;
  bool (*fn)(std::string& detail);
};

double u01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

bool placement_feasible(const Instance& inst, const GraphStructure& g,
                        const SolveResult& res, double tol,
                        std::string& detail) {
  for (int i = 0; i < inst.n(); ++i) {
    const int f = res.assignment.choice[i];
    if (f <= 0) continue;
    const double d = (res.placement.coords[f] - inst.points[i]).norm();
    if (d > inst.cover_radii[i] + tol) {
      detail = "coverage violated by " +
               std::to_string(d - inst.cover_radii[i]);
      return false;
    }
  }
  for (auto [j, k] : g.edges) {
    const double d = (res.placement.coords[j] - res.placement.coords[k]).norm();
    if (d > inst.link_radius + tol) {
      detail = "link violated by " + std::to_string(d - inst.link_radius);
      return false;
    }
  }
  return true;
}

// 1. Example 2 exactness on all three strategies.
bool criterion1(std::string& detail) {
  const Instance e2 = builtin_example("example2");
  const GraphStructure g = build_edges(GraphKind::Line, 3);
  for (Strategy st : {Strategy::Full, Strategy::Inc1, Strategy::Inc2}) {
    const auto t0 = Clock::now();
    SolveConfig cfg;
    cfg.strategy = st;
    const SolveResult res = solve(e2, g, cfg);
    const double el = std::chrono::duration<double>(Clock::now() - t0).count();
    if (res.status != SolveStatus::Optimal || res.objective != 5.0) {
      detail = std::string(strategy_name(st)) + ": objective " +
               std::to_string(res.objective);
      return false;
    }
    if (!placement_feasible(e2, g, res, 1e-6, detail)) return false;
    if (el >= 1.0) {
      detail = std::string(strategy_name(st)) + " took " + std::to_string(el);
      return false;
    }
  }
  detail = "objective 5 with feasible placements on full/inc1/inc2";
  return true;
}

// 2. Oracle equivalence over the 40-seed random grid.
bool criterion2(std::string& detail) {
  const GraphKind kinds[] = {GraphKind::Complete, GraphKind::Cycle,
                             GraphKind::Line,     GraphKind::Star,
                             GraphKind::RingStar, GraphKind::Matching};
  long long solves = 0;
  for (int n : {6, 8, 10})
    for (int p : {2, 3})
      for (double R : {0.1, 0.25})
        for (double r : {0.2, 0.5})
          for (int seed = 1; seed <= 40; ++seed) {
            const Instance inst = gen_random(
                1000ull * seed + 17ull * n + int(100 * R) + int(10 * r) + p, n,
                WeightMode::Unit, R, r, p);
            SolveContext ctx(inst);
            for (GraphKind gk : kinds) {
              if (gk == GraphKind::Matching && p % 2) continue;
              const GraphStructure g = build_edges(gk, p);
              const OracleResult orc = enumerate(ctx, g, {});
              for (Strategy st :
                   {Strategy::Full, Strategy::Inc1, Strategy::Inc2}) {
                SolveConfig cfg;
                cfg.strategy = st;
                const SolveResult res = solve(ctx, g, cfg);
                ++solves;
                const bool ok =
                    orc.feasible
                        ? (res.status == SolveStatus::Optimal &&
                           res.objective == orc.objective)
                        : res.status == SolveStatus::Infeasible;
                if (!ok) {
                  char buf[256];
                  std::snprintf(buf, sizeof(buf),
                                "n=%d p=%d R=%.2f r=%.2f seed=%d %s/%s: "
                                "oracle %s %.3f vs %s %.3f",
                                n, p, R, r, seed,
                                std::string(graph_kind_name(gk)).c_str(),
                                std::string(strategy_name(st)).c_str(),
                                orc.feasible ? "feasible" : "infeasible",
                                orc.objective,
                                std::string(status_name(res.status)).c_str(),
                                res.objective);
                  detail = buf;
                  return false;
                }
              }
            }
          }
  detail = std::to_string(solves) + " solves matched the oracle exactly";
  return true;
}

// 3. Example 1: strategy agreement and feasible placements per structure.
bool criterion3(std::string& detail) {
  const Instance e1 = builtin_example("example1");
  const GraphKind kinds[] = {GraphKind::Complete, GraphKind::Cycle,
                             GraphKind::Line,     GraphKind::Star,
                             GraphKind::RingStar, GraphKind::Matching};
  std::string agreed;
  for (GraphKind gk : kinds) {
    const auto t0 = Clock::now();
    const GraphStructure g = build_edges(gk, e1.p);
    SolveContext ctx(e1);
    double obj = -1.0;
    for (Strategy st : {Strategy::Full, Strategy::Inc1, Strategy::Inc2}) {
      SolveConfig cfg;
      cfg.strategy = st;
      const SolveResult res = solve(ctx, g, cfg);
      if (res.status != SolveStatus::Optimal) {
        detail = std::string(graph_kind_name(gk)) + "/" +
                 std::string(strategy_name(st)) + ": " +
                 std::string(status_name(res.status));
        return false;
      }
      if (obj < 0) obj = res.objective;
      if (res.objective != obj) {
        detail = std::string(graph_kind_name(gk)) + ": objectives differ";
        return false;
      }
      if (!placement_feasible(e1, g, res, 1e-6, detail)) return false;
    }
    const double el = std::chrono::duration<double>(Clock::now() - t0).count();
    if (el >= 60.0) {
      detail = std::string(graph_kind_name(gk)) + " took " + std::to_string(el);
      return false;
    }
    agreed += std::string(graph_kind_name(gk)) + "=" +
              std::to_string(int(obj)) + " ";
  }
  detail = agreed;
  return true;
}

// 4. Classical MCLP baseline over the CIP candidates.
bool criterion4(std::string& detail) {
  const Instance e1 = builtin_example("example1");
  const CipSolve sol = solve_mclp_cip(e1);
  detail = "objective " + std::to_string(sol.objective);
  return sol.objective == 13.0;
}

// 5. Minkowski identity on grids over random pairwise-intersecting triples.
bool criterion5(std::string& detail) {
  std::mt19937_64 rng(505);
  long long checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    // Three disks with guaranteed pairwise intersections.
    std::vector<Disk> disks;
    for (;;) {
      disks.clear();
      for (int i = 0; i < 3; ++i)
        disks.push_back(
            {Point(u01(rng), u01(rng)), 0.25 + 0.35 * u01(rng)});
      bool ok = true;
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
          ok &= disk_pair_nonempty(disks[i].center, disks[i].radius,
                                   disks[j].center, disks[j].radius);
      if (ok) break;
    }
    std::vector<ConvexRegion> lenses;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        lenses.push_back(ConvexRegion::lens(Lens(disks[i], disks[j])));

    double xmin = 1e9, xmax = -1e9, ymin = 1e9, ymax = -1e9;
    const double rmaxi = 0.3;
    for (const Disk& d : disks) {
      xmin = std::min(xmin, d.center.x() - d.radius - rmaxi - 0.05);
      xmax = std::max(xmax, d.center.x() + d.radius + rmaxi + 0.05);
      ymin = std::min(ymin, d.center.y() - d.radius - rmaxi - 0.05);
      ymax = std::max(ymax, d.center.y() + d.radius + rmaxi + 0.05);
    }
    for (int gx = 0; gx < 200; ++gx)
      for (int gy = 0; gy < 200; ++gy) {
        const Point x(xmin + (xmax - xmin) * gx / 199.0,
                      ymin + (ymax - ymin) * gy / 199.0);
        // Cheap certified screens before the Dykstra distance.
        double singles = 0.0;
        bool inside_all = true;
        for (const Disk& d : disks) {
          const double dd = (x - d.center).norm() - d.radius;
          singles = std::max(singles, dd);
          inside_all &= dd <= 0;
        }
        double cap_dist;
        if (inside_all)
          cap_dist = 0.0;
        else if (singles > 0.3 + 1e-3)
          cap_dist = singles;  // already above every tested r
        else
          cap_dist =
              (x - dykstra_project(disks, x, 1e-10, 10000).point).norm();
        for (double r : {0.05, 0.1, 0.3}) {
          if (std::abs(cap_dist - r) < 1e-6) continue;  // left boundary band
          const bool left = cap_dist <= r;
          bool right = true;
          double worst = 0.0;
          for (const auto& lr : lenses) {
            const double d = region_distance(lr, x);
            worst = std::max(worst, d - r);
            if (d > r) right = false;
          }
          if (std::abs(worst) < 1e-6) continue;  // right boundary band
          if (left != right) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "mismatch at trial %d r=%.2f x=(%.4f,%.4f)", trial,
                          r, x.x(), x.y());
            detail = buf;
            return false;
          }
          ++checked;
        }
      }
  }
  detail = std::to_string(checked) + " grid points agreed";
  return true;
}

// 6. Helly reduction: direct emptiness equals the min-over-triples verdict.
bool criterion6(std::string& detail) {
  std::mt19937_64 rng(606);
  int ambiguous = 0, agreed = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + int(rng() % 5);  // up to 6 regions
    std::vector<ConvexRegion> regions;
    for (int k = 0; k < m; ++k) {
      const Point c(u01(rng), u01(rng));
      const double R = 0.2 + 0.3 * u01(rng);
      if (rng() % 2) {
        regions.push_back(ConvexRegion::disk({c, R}));
      } else {
        const double ang = 2 * M_PI * u01(rng);
        const double R2 = 0.2 + 0.3 * u01(rng);
        const double dist = 0.9 * (R + R2) * u01(rng);
        const Disk d2{c + dist * Point(std::cos(ang), std::sin(ang)), R2};
        regions.push_back(
            ConvexRegion::enlarged(Lens({c, R}, d2), 0.1 + 0.2 * u01(rng)));
      }
    }
    const IterConfig cfg{1e-9, 20000};
    const Emptiness direct = emptiness_margin(regions, cfg);
    if (direct.verdict == Emptiness::Verdict::Ambiguous) {
      ++ambiguous;
      continue;
    }
    // Helly in the plane: empty iff some <=3-subfamily is empty.
    bool triple_empty = false, triple_ambiguous = false;
    if (m <= 3) {
      triple_empty = direct.verdict == Emptiness::Verdict::Empty;
      const Emptiness again = emptiness_margin(regions, cfg);
      triple_ambiguous = again.verdict == Emptiness::Verdict::Ambiguous;
    } else {
      for (int a = 0; a < m && !triple_empty; ++a)
        for (int b = a + 1; b < m && !triple_empty; ++b)
          for (int c = b + 1; c < m && !triple_empty; ++c) {
            const std::vector<ConvexRegion> tri = {regions[a], regions[b],
                                                   regions[c]};
            const Emptiness em = emptiness_margin(tri, cfg);
            if (em.verdict == Emptiness::Verdict::Empty) triple_empty = true;
            if (em.verdict == Emptiness::Verdict::Ambiguous)
              triple_ambiguous = true;
          }
    }
    if (triple_ambiguous && !triple_empty) {
      ++ambiguous;
      continue;
    }
    const bool direct_empty = direct.verdict == Emptiness::Verdict::Empty;
    if (direct_empty != triple_empty) {
      detail = "family " + std::to_string(trial) + " disagreed";
      return false;
    }
    ++agreed;
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d agreed, %d ambiguous (limit 4)", agreed,
                ambiguous);
  detail = buf;
  return ambiguous < 4;  // < 2% of 200
}

// 7. Separation soundness and completeness.
bool criterion7(std::string& detail) {
  std::mt19937_64 rng(707);
  int built = 0;
  while (built < 200) {
    const int p = 2 + int(rng() % 2);
    const double r = 0.2 + 0.3 * u01(rng);
    const double R = 0.08 + 0.12 * u01(rng);
    const GraphStructure g =
        build_edges(built % 2 ? GraphKind::Star : GraphKind::Line, p);
    std::vector<Point> sites(p + 1);
    sites[1] = Point(u01(rng), u01(rng));
    bool ok = true;
    for (int j = 2; j <= p && ok; ++j) {
      int attempt = 0;
      for (;; ++attempt) {
        if (attempt > 300) {
          ok = false;
          break;
        }
        const Point cand(u01(rng), u01(rng));
        bool fits = true;
        for (int k : g.neighborhoods[j])
          if (k < j && (cand - sites[k]).norm() > 0.95 * r) fits = false;
        if (fits) {
          sites[j] = cand;
          break;
        }
      }
    }
    if (!ok) continue;
    ++built;
    Instance inst;
    inst.link_radius = r;
    inst.p = p;
    Assignment a;
    for (int j = 1; j <= p; ++j)
      for (int m = 0; m < 3; ++m) {
        const double ang = 2 * M_PI * u01(rng);
        inst.points.push_back(sites[j] + R * u01(rng) *
                                             Point(std::cos(ang), std::sin(ang)));
        inst.weights.push_back(1.0);
        inst.cover_radii.push_back(R);
        a.choice.push_back(j);
      }
    const Placement pl = solve_rho(inst, g, a);
    if (pl.rho > 1e-6) {
      detail = "constructed-feasible case got rho " + std::to_string(pl.rho);
      return false;
    }
  }

  // Rigid stretch family, including the canonical gap-8 case.
  for (int t = 0; t < 40; ++t) {
    const double R = t == 0 ? 0.5 : 0.1 + 0.4 * u01(rng);
    const double r = t == 0 ? 1.0 : 0.2 + 0.6 * u01(rng);
    const double centers = t == 0 ? 10.0 : 2 * R + r + 0.01 + 4.0 * u01(rng);
    Instance inst;
    inst.points = {Point(0, 0), Point(centers, 0)};
    inst.weights = {1, 1};
    inst.cover_radii = {R, R};
    inst.link_radius = r;
    inst.p = 2;
    const GraphStructure g = build_edges(GraphKind::Line, 2);
    Assignment a(2);
    a.choice = {1, 2};
    const double truth = centers - 2 * R - r;
    const Placement pl = solve_rho(inst, g, a);
    if (std::abs(pl.rho - truth) > 1e-4) {
      detail = "stretch slack " + std::to_string(pl.rho) + " vs " +
               std::to_string(truth);
      return false;
    }
  }
  detail = "200 feasible cases at rho<=1e-6; 40 stretch slacks within 1e-4";
  return true;
}

// 8. Monotone optimal value along r and R sweeps.
bool criterion8(std::string& detail) {
  for (int seed = 1; seed <= 20; ++seed) {
    const Instance base =
        gen_random(8000 + seed, 12, WeightMode::Unit, 0.1, 0.1, 3);
    for (GraphKind gk : {GraphKind::Line, GraphKind::Star}) {
      const GraphStructure g = build_edges(gk, 3);
      double prev = -2.0;
      for (double r : {0.1, 0.2, 0.3, 0.4, 0.5}) {
        Instance inst = base;
        inst.link_radius = r;
        const SolveResult res = solve(inst, g, {});
        const double v =
            res.status == SolveStatus::Optimal ? res.objective : -1.0;
        if (v < prev) {
          detail = "seed " + std::to_string(seed) + " not monotone in r";
          return false;
        }
        prev = v;
      }
      prev = -2.0;
      for (double R : {0.05, 0.1, 0.15, 0.2}) {
        Instance inst = base;
        inst.cover_radii.assign(12, R);
        inst.link_radius = 0.3;
        const SolveResult res = solve(inst, g, {});
        const double v =
            res.status == SolveStatus::Optimal ? res.objective : -1.0;
        if (v < prev) {
          detail = "seed " + std::to_string(seed) + " not monotone in R";
          return false;
        }
        prev = v;
      }
    }
  }
  detail = "20 seeds monotone along both sweeps on line and star";
  return true;
}

// 9. Bench summary reports a majority O-share on the dense grid.
bool criterion9(std::string& detail) {
  BenchSpec spec;
  for (int seed = 1; seed <= 5; ++seed)
    spec.instances.emplace_back(
        "n20_s" + std::to_string(seed),
        gen_random(9000 + seed, 20, WeightMode::Unit, 0.1, 0.2, 6));
  spec.graphs = {GraphKind::Complete};
  spec.strategies = {Strategy::Full};
  spec.time_limit = 60;
  const BenchResult res = run_bench(spec, nullptr);
  if (res.failures) {
    detail = "bench failures";
    return false;
  }
  if (res.summaries.size() != 1) {
    detail = "expected one (graph,n,p) summary group";
    return false;
  }
  const double share = res.summaries[0].avg_o_share;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "average O-share %.3f over 5 runs", share);
  detail = buf;
  return share > 0.5;
}

// 10. Byte-identical reruns excluding the timing fields.
bool criterion10(std::string& detail) {
  auto strip = [](std::string json) {
    const size_t at = json.find("\"time_rules_s\"");
    if (at != std::string::npos) json.resize(at);
    return json;
  };
  const Instance insts[] = {builtin_example("example1"),
                            gen_random(42, 10, WeightMode::Unit, 0.12, 0.3, 4)};
  for (const Instance& inst : insts)
    for (GraphKind gk : {GraphKind::Cycle, GraphKind::Matching})
      for (Strategy st : {Strategy::Full, Strategy::Inc1, Strategy::Inc2,
                          Strategy::Oracle}) {
        if (gk == GraphKind::Matching && inst.p % 2) continue;
        const GraphStructure g = build_edges(gk, inst.p);
        SolveConfig cfg;
        cfg.strategy = st;
        if (st == Strategy::Oracle && inst.n() > 12) continue;
        const std::string a = strip(result_to_json(solve(inst, g, cfg), inst, g));
        const std::string b = strip(result_to_json(solve(inst, g, cfg), inst, g));
        if (a != b) {
          detail = std::string(graph_kind_name(gk)) + "/" +
                   std::string(strategy_name(st)) + " differed";
          return false;
        }
      }
  detail = "all rerun pairs byte-identical modulo timing";
  return true;
}

const Criterion kCriteria[] = {
    {1, "collinear example exactness on all strategies", criterion1},
    {2, "oracle equivalence on the 40-seed random grid", criterion2},
    {3, "15-point instance cross-strategy consistency", criterion3},
    {4, "classical MCLP baseline over CIP candidates", criterion4},
    {5, "Minkowski identity grid suite", criterion5},
    {6, "Helly triple reduction", criterion6},
    {7, "separation soundness and completeness", criterion7},
    {8, "objective monotonicity in r and R", criterion8},
    {9, "O-share majority in the bench summary", criterion9},
    {10, "deterministic result JSON", criterion10},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (only && c.id != only) continue;
    const auto t0 = Clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double el = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("[%s] criterion %2d: %s (%.2fs) %s\n", ok ? "PASS" : "FAIL",
                c.id, c.title, el, detail.c_str());
    std::fflush(stdout);
    failures += !ok;
  }
  return failures;
}
