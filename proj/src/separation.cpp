#include "covlink/separation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace covlink {

namespace {

// Exact projector onto one facility's coverage intersection. Classes of size
// 0/1/2 have closed forms; larger classes use Dykstra.
class CoverageProjector {
 public:
  CoverageProjector(const Instance& inst, const std::vector<int>& cls,
                    const RhoConfig& cfg)
      : cfg_(cfg) {
    for (int i : cls) disks_.push_back(inst.cover_disk(i));
    if (disks_.size() == 2) lens_.emplace(disks_[0], disks_[1]);
  }

  bool empty_coverage(const ProblemGeometry* geom,
                      const std::vector<int>& cls) const {
    if (geom == nullptr || cls.size() < 2) return false;
    for (size_t a = 0; a < cls.size(); ++a)
      for (size_t b = a + 1; b < cls.size(); ++b)
        if (!geom->pair_nonempty(cls[a], cls[b])) return true;
    for (size_t a = 0; a < cls.size(); ++a)
      for (size_t b = a + 1; b < cls.size(); ++b)
        for (size_t c = b + 1; c < cls.size(); ++c)
          if (!geom->triple_nonempty(cls[a], cls[b], cls[c])) return true;
    return false;
  }

  Point operator()(const Point& x) const {
    switch (disks_.size()) {
      case 0:
        return x;
      case 1:
        return project(disks_[0], x);
      case 2:
        return project(*lens_, x);
      default:
        return dykstra_project(disks_, x, cfg_.dykstra_tol, cfg_.dykstra_cap)
            .point;
    }
  }

  const std::vector<Disk>& disks() const { return disks_; }

 private:
  RhoConfig cfg_;
  std::vector<Disk> disks_;
  std::optional<Lens> lens_;
};

bool coverage_intersection_empty(const Instance& inst,
                                 const std::vector<int>& cls) {
  for (size_t a = 0; a < cls.size(); ++a)
    for (size_t b = a + 1; b < cls.size(); ++b)
      if (!disk_pair_nonempty(inst.points[cls[a]], inst.cover_radii[cls[a]],
                              inst.points[cls[b]], inst.cover_radii[cls[b]]))
        return true;
  for (size_t a = 0; a < cls.size(); ++a)
    for (size_t b = a + 1; b < cls.size(); ++b)
      for (size_t c = b + 1; c < cls.size(); ++c)
        if (!disk_triple_nonempty(inst.cover_disk(cls[a]),
                                  inst.cover_disk(cls[b]),
                                  inst.cover_disk(cls[c])))
          return true;
  return false;
}

std::vector<Point> initial_positions(
    const Instance& inst, const std::vector<std::vector<int>>& classes,
    const GraphStructure& g, const std::vector<CoverageProjector>& proj) {
  const int p = g.p;
  Point centroid = Point::Zero();
  for (const Point& a : inst.points) centroid += a;
  centroid /= inst.n();

  std::vector<Point> X(p + 1, Point::Zero());
  std::vector<char> seeded(p + 1, 0);
  for (int j = 1; j <= p; ++j) {
    if (classes[j].empty()) continue;
    Point m = Point::Zero();
    for (int i : classes[j]) m += inst.points[i];
    X[j] = proj[j](m / classes[j].size());
    seeded[j] = 1;
  }
  // Facilities with no coverage: centroid of seeded neighbors, else the
  // instance centroid.
  for (int j = 1; j <= p; ++j) {
    if (seeded[j]) continue;
    Point m = Point::Zero();
    int cnt = 0;
    for (int k : g.neighborhoods[j])
      if (seeded[k]) {
        m += X[k];
        ++cnt;
      }
    X[j] = cnt ? Point(m / cnt) : centroid;
  }
  return X;
}

double link_objective(const std::vector<Point>& X, const GraphStructure& g,
                      double r) {
  double f = 0.0;
  for (auto [j, k] : g.edges) f += std::max(0.0, (X[j] - X[k]).norm() - r);
  return f;
}

}  // namespace

Placement solve_rho(const Instance& inst, const GraphStructure& structure,
                    const Assignment& assignment, const RhoConfig& cfg) {
  const int p = structure.p;
  const double r = inst.link_radius;
  const auto classes = assignment.classes(p);

  for (int j = 1; j <= p; ++j)
    if (coverage_intersection_empty(inst, classes[j]))
      throw std::runtime_error("infeasible coverage");
  std::vector<CoverageProjector> proj;
  proj.reserve(p + 1);
  for (int j = 0; j <= p; ++j) proj.emplace_back(inst, classes[j], cfg);

  std::vector<Point> X;
  if (!cfg.initial_override.empty()) {
    X = cfg.initial_override;
    for (int j = 1; j <= p; ++j) X[j] = proj[j](X[j]);
  } else {
    X = initial_positions(inst, classes, structure, proj);
  }

  double maxR = 0.0;
  for (double R : inst.cover_radii) maxR = std::max(maxR, R);
  const double c = r + maxR;

  std::vector<Point> Xbest = X;
  double fbest = link_objective(X, structure, r);
  bool converged = false;
  int last_improve = 0;
  std::vector<Point> grad(p + 1);

  // Alternating-projection burst between the coverage product set and the
  // link-cap set. On feasible instances it closes tangential gaps that the
  // subgradient approaches only sublinearly; the main loop keeps the
  // guarantees for positive rho.
  auto pocs_burst = [&](std::vector<Point> Y) {
    double local_best = link_objective(Y, structure, r);
    int idle = 0;
    for (int pass = 0; pass < 400; ++pass) {
      for (auto [j, k] : structure.edges) {
        const Point d = Y[k] - Y[j];
        const double len = d.norm();
        if (len > r) {
          const double pull = (len - r) / 2.0;
          const Point u = d / len;
          Y[j] += pull * u;
          Y[k] -= pull * u;
        }
      }
      for (int j = 1; j <= p; ++j) Y[j] = proj[j](Y[j]);
      const double f = link_objective(Y, structure, r);
      if (f < local_best - 1e-13) {
        local_best = f;
        idle = 0;
      } else if (++idle > 25) {
        break;
      }
      if (f < fbest) {
        fbest = f;
        Xbest = Y;
      }
      if (fbest == 0.0) break;
    }
  };

  pocs_burst(X);

  for (int t = 1; t <= cfg.max_iters; ++t) {
    const double f = link_objective(X, structure, r);
    if (f < fbest - cfg.stall_eps) {
      fbest = f;
      Xbest = X;
      last_improve = t;
    } else if (f < fbest) {
      fbest = f;
      Xbest = X;
    }
    if (fbest == 0.0 || t - last_improve >= cfg.stall_window) {
      converged = true;
      break;
    }

    for (auto& gv : grad) gv.setZero();
    double gnorm2 = 0.0;
    for (auto [j, k] : structure.edges) {
      const Point d = X[j] - X[k];
      const double len = d.norm();
      if (len > r && len > 0) {
        const Point u = d / len;
        grad[j] += u;
        grad[k] -= u;
      }
    }
    for (int j = 1; j <= p; ++j) gnorm2 += grad[j].squaredNorm();
    if (gnorm2 == 0.0) {
      converged = true;  // 0 in the subdifferential: f is already minimal
      break;
    }
    const double step = std::min(f / gnorm2, c / std::sqrt(double(t)));
    for (int j = 1; j <= p; ++j)
      if (grad[j].squaredNorm() > 0) X[j] = proj[j](X[j] - step * grad[j]);
    if (t % 64 == 0) pocs_burst(X);
  }
  if (fbest > 0.0) pocs_burst(Xbest);

  Placement out;
  out.coords = Xbest;
  out.rho = fbest;
  out.converged = converged;
  for (auto [j, k] : structure.edges)
    out.per_edge_slack[{j, k}] =
        std::max(0.0, (Xbest[j] - Xbest[k]).norm() - r);
  return out;
}

Placement recover_placement(const Instance& inst,
                            const GraphStructure& structure,
                            const Assignment& assignment, bool compact,
                            const RhoConfig& cfg) {
  Placement base = solve_rho(inst, structure, assignment, cfg);
  if (!compact) return base;

  const int p = structure.p;
  const double r = inst.link_radius;
  const auto classes = assignment.classes(p);
  std::vector<CoverageProjector> proj;
  proj.reserve(p + 1);
  for (int j = 0; j <= p; ++j) proj.emplace_back(inst, classes[j], cfg);

  double maxR = 0.0;
  for (double R : inst.cover_radii) maxR = std::max(maxR, R);
  const double c = r + maxR;

  auto repair = [&](std::vector<Point>& X) {
    for (int pass = 0; pass < 200; ++pass) {
      for (int j = 1; j <= p; ++j) X[j] = proj[j](X[j]);
      double worst = 0.0;
      for (auto [j, k] : structure.edges) {
        const Point d = X[k] - X[j];
        const double len = d.norm();
        if (len > r) {
          // Exact pair projection onto {|Xj - Xk| <= r}: pull both endpoints
          // toward the midpoint.
          const double pull = (len - r) / 2.0;
          const Point u = d / len;
          X[j] += pull * u;
          X[k] -= pull * u;
          worst = std::max(worst, len - r);
        }
      }
      double viol = 0.0;
      for (int j = 1; j <= p; ++j)
        viol = std::max(viol, (X[j] - proj[j](X[j])).norm());
      for (auto [j, k] : structure.edges)
        viol = std::max(viol, (X[j] - X[k]).norm() - r);
      if (viol <= kFeasTol) return true;
    }
    return false;
  };

  std::vector<Point> X = base.coords;
  if (!repair(X)) return base;  // keep the rho witness if caps cannot close

  auto total_len = [&](const std::vector<Point>& Y) {
    double L = 0.0;
    for (auto [j, k] : structure.edges) L += (Y[j] - Y[k]).norm();
    return L;
  };

  std::vector<Point> Xbest = X;
  double Lbest = total_len(X);
  int last_improve = 0;
  std::vector<Point> grad(p + 1);
  for (int t = 1; t <= 20000; ++t) {
    for (auto& gv : grad) gv.setZero();
    for (auto [j, k] : structure.edges) {
      const Point d = X[j] - X[k];
      const double len = d.norm();
      if (len > 0) {
        const Point u = d / len;
        grad[j] += u;
        grad[k] -= u;
      }
    }
    const double step = c / std::sqrt(double(t));
    for (int j = 1; j <= p; ++j) X[j] -= step * grad[j];
    if (!repair(X)) {
      X = Xbest;
      continue;
    }
    const double L = total_len(X);
    if (L < Lbest - cfg.stall_eps) {
      Lbest = L;
      Xbest = X;
      last_improve = t;
    }
    if (t - last_improve >= cfg.stall_window) break;
  }

  // Neighbor-centroid polish: adopt sweeps only while they stay feasible and
  // strictly shorten the layout (exact for a single edge).
  X = Xbest;
  for (int pass = 0; pass < 2000; ++pass) {
    std::vector<Point> Y = X;
    for (int j = 1; j <= p; ++j) {
      if (structure.neighborhoods[j].empty()) continue;
      Point m = Point::Zero();
      for (int k : structure.neighborhoods[j]) m += X[k];
      Y[j] = proj[j](m / double(structure.degree(j)));
    }
    if (!repair(Y)) break;
    const double L = total_len(Y);
    if (L >= Lbest - 1e-12) break;
    Lbest = L;
    Xbest = Y;
    X = std::move(Y);
  }

  Placement out;
  out.coords = Xbest;
  out.converged = true;
  out.rho = 0.0;
  for (auto [j, k] : structure.edges) {
    const double slack = std::max(0.0, (Xbest[j] - Xbest[k]).norm() - r);
    out.per_edge_slack[{j, k}] = slack;
    out.rho += slack;
  }
  return out;
}

Constraint make_lazy_cut(const Assignment& assignment,
                         const GraphStructure& structure) {
  (void)structure;  // the x-part is constant under fixed structures
  Constraint cut;
  cut.kind = RuleKind::LazyCut;
  for (int i = 0; i < assignment.n(); ++i)
    if (assignment.choice[i] > 0) cut.terms.emplace_back(i, assignment.choice[i]);
  cut.rhs = static_cast<int>(cut.terms.size()) - 1;
  return cut;
}

}  // namespace covlink
