#include "covlink/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace covlink {

namespace {

bool lex_less(const Point& a, const Point& b) {
  if (a.x() != b.x()) return a.x() < b.x();
  return a.y() < b.y();
}

bool in_disk(const Disk& d, const Point& x, double tol = kGeomTol) {
  return (x - d.center).norm() <= d.radius + tol;
}

// d1 contains d2 as sets (closed comparison).
bool disk_contains(const Disk& d1, const Disk& d2) {
  return (d1.center - d2.center).norm() + d2.radius <= d1.radius + kGeomTol;
}

}  // namespace

std::vector<Point> circle_circle_intersections(const Disk& d1, const Disk& d2) {
  const double d = (d2.center - d1.center).norm();
  const double r1 = d1.radius, r2 = d2.radius;
  if (d <= kGeomTol && std::abs(r1 - r2) <= kGeomTol)
    throw std::invalid_argument("coincident circles");
  if (d > r1 + r2 + kGeomTol) return {};               // disjoint
  if (d < std::abs(r1 - r2) - kGeomTol) return {};     // nested
  const Point u = (d > 0) ? Point((d2.center - d1.center) / d) : Point(1, 0);
  const double a = (d * d + r1 * r1 - r2 * r2) / (2 * d);
  const double h2 = r1 * r1 - a * a;
  // Tangency band: external (d ~ r1+r2) or internal (d ~ |r1-r2|).
  if (d >= r1 + r2 - kGeomTol || d <= std::abs(r1 - r2) + kGeomTol || h2 <= 0)
    return {d1.center + a * u};
  const double h = std::sqrt(h2);
  const Point v(-u.y(), u.x());
  Point p = d1.center + a * u + h * v;
  Point q = d1.center + a * u - h * v;
  if (lex_less(q, p)) std::swap(p, q);
  return {p, q};
}

Lens::Lens(const Disk& d1, const Disk& d2) : d1_(d1), d2_(d2) {
  const double d = (d2.center - d1.center).norm();
  if (d > d1.radius + d2.radius + kGeomTol)
    throw std::invalid_argument("disjoint disks form no lens");
  if (disk_contains(d1, d2) || disk_contains(d2, d1)) return;  // no vertices
  vertices_ = circle_circle_intersections(d1, d2);
}

ConvexRegion ConvexRegion::disk(const Disk& d) {
  ConvexRegion r;
  r.kind_ = Kind::Disk;
  r.disk_ = d;
  return r;
}

ConvexRegion ConvexRegion::lens(const Lens& l) {
  ConvexRegion r;
  r.kind_ = Kind::Lens;
  r.lens_.push_back(l);
  return r;
}

ConvexRegion ConvexRegion::enlarged(const Lens& l, double margin) {
  ConvexRegion r;
  r.kind_ = Kind::Enlarged;
  r.lens_.push_back(l);
  r.margin_ = margin;
  return r;
}

std::vector<Point> ConvexRegion::anchors() const {
  if (kind_ == Kind::Disk) return {disk_.center};
  const Lens& l = lens_[0];
  if (!l.vertices().empty()) return l.vertices();
  // Containment case: the smaller disk's center lies in the lens.
  return {l.d1().radius <= l.d2().radius ? l.d1().center : l.d2().center};
}

Disk ConvexRegion::bounding_disk() const {
  if (kind_ == Kind::Disk) return disk_;
  const Lens& l = lens_[0];
  Disk b = l.d1().radius <= l.d2().radius ? l.d1() : l.d2();
  b.radius += margin_;
  return b;
}

Point project(const Disk& d, const Point& x) {
  const Point v = x - d.center;
  const double n = v.norm();
  if (n <= d.radius) return x;
  return d.center + (d.radius / n) * v;
}

Point project(const Lens& l, const Point& x) {
  const bool in1 = in_disk(l.d1(), x);
  const bool in2 = in_disk(l.d2(), x);
  if (in1 && in2) return x;

  bool found = false;
  Point best = Point::Zero();
  double best_d = 0.0;
  auto consider = [&](const Point& c) {
    const double dd = (x - c).norm();
    if (!found || dd < best_d) {
      found = true;
      best = c;
      best_d = dd;
    }
  };
  if (!in1) {
    const Point p1 = project(l.d1(), x);
    if (in_disk(l.d2(), p1)) consider(p1);
  }
  if (!in2) {
    const Point p2 = project(l.d2(), x);
    if (in_disk(l.d1(), p2)) consider(p2);
  }
  if (!found)
    for (const Point& v : l.vertices()) consider(v);
  return best;
}

Point project(const ConvexRegion& region, const Point& x) {
  switch (region.kind()) {
    case ConvexRegion::Kind::Disk:
      return project(region.as_disk(), x);
    case ConvexRegion::Kind::Lens:
      return project(region.as_lens(), x);
    case ConvexRegion::Kind::Enlarged: {
      const Point p = project(region.as_lens(), x);
      const double d = (x - p).norm();
      if (d <= region.margin()) return x;
      return p + (region.margin() / d) * (x - p);
    }
  }
  return x;
}

double lens_distance(const Lens& l, const Point& x) {
  return (x - project(l, x)).norm();
}

double region_distance(const ConvexRegion& region, const Point& x) {
  switch (region.kind()) {
    case ConvexRegion::Kind::Disk:
      return std::max(0.0, (x - region.as_disk().center).norm() -
                               region.as_disk().radius);
    case ConvexRegion::Kind::Lens:
      return lens_distance(region.as_lens(), x);
    case ConvexRegion::Kind::Enlarged:
      return std::max(0.0, lens_distance(region.as_lens(), x) - region.margin());
  }
  return 0.0;
}

bool contains(const ConvexRegion& region, const Point& x, double tol) {
  return region_distance(region, x) <= tol;
}

double support(const ConvexRegion& region, const Point& dir) {
  if (region.kind() == ConvexRegion::Kind::Disk)
    return dir.dot(region.as_disk().center) + region.as_disk().radius;
  const Lens& l = region.as_lens();
  bool found = false;
  double best = 0.0;
  auto consider = [&](const Point& c) {
    const double v = dir.dot(c);
    if (!found || v > best) {
      found = true;
      best = v;
    }
  };
  const Point q1 = l.d1().center + l.d1().radius * dir;
  if (in_disk(l.d2(), q1)) consider(q1);
  const Point q2 = l.d2().center + l.d2().radius * dir;
  if (in_disk(l.d1(), q2)) consider(q2);
  for (const Point& v : l.vertices()) consider(v);
  if (!found) {
    // Containment case with both arc candidates outside by a rounding hair:
    // fall back to the smaller disk.
    const Disk& s = l.d1().radius <= l.d2().radius ? l.d1() : l.d2();
    best = dir.dot(s.center) + s.radius;
  }
  return best + (region.kind() == ConvexRegion::Kind::Enlarged
                     ? region.margin()
                     : 0.0);
}

bool disk_pair_nonempty(const Point& a1, double R1, const Point& a2, double R2) {
  return (a1 - a2).norm() <= R1 + R2 + kGeomTol;
}

bool disk_triple_nonempty(const Disk& d1, const Disk& d2, const Disk& d3) {
  const Disk* ds[3] = {&d1, &d2, &d3};
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (!disk_pair_nonempty(ds[i]->center, ds[i]->radius, ds[j]->center,
                              ds[j]->radius))
        return false;
  // Containment: drop the larger disk and test the remaining pair.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      if (disk_contains(*ds[i], *ds[j])) {
        const int k = 3 - i - j;
        return disk_pair_nonempty(ds[j]->center, ds[j]->radius, ds[k]->center,
                                  ds[k]->radius);
      }
    }
  // General position: nonempty iff some pairwise circle intersection point
  // lies in the third disk.
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const int k = 3 - i - j;
      for (const Point& q : circle_circle_intersections(*ds[i], *ds[j]))
        if (in_disk(*ds[k], q)) return true;
    }
  return false;
}

bool disk_oset_nonempty(const Disk& d, const Lens& l, double r) {
  return lens_distance(l, d.center) <= d.radius + r + kGeomTol;
}

SetDistance set_distance(const ConvexRegion& a, const ConvexRegion& b,
                         int max_iters) {
  // Every region is core ⊕ ball(m): Disk = point ⊕ ball(R),
  // Lens = lens ⊕ ball(0), Enlarged = lens ⊕ ball(r). Reduce to the cores.
  const bool a_pt = a.kind() == ConvexRegion::Kind::Disk;
  const bool b_pt = b.kind() == ConvexRegion::Kind::Disk;
  const double ma = a_pt ? a.as_disk().radius : a.margin();
  const double mb = b_pt ? b.as_disk().radius : b.margin();

  double core = 0.0, core_lo = 0.0;
  if (a_pt && b_pt) {
    core = core_lo = (a.as_disk().center - b.as_disk().center).norm();
  } else if (a_pt) {
    core = core_lo = lens_distance(b.as_lens(), a.as_disk().center);
  } else if (b_pt) {
    core = core_lo = lens_distance(a.as_lens(), b.as_disk().center);
  } else {
    // Lens-lens distance by alternating projections.
    const Lens& la = a.as_lens();
    const Lens& lb = b.as_lens();
    Point x = la.vertices().empty()
                  ? (la.d1().radius <= la.d2().radius ? la.d1().center
                                                      : la.d2().center)
                  : la.vertices()[0];
    Point y = project(lb, x);
    double prev = std::numeric_limits<double>::infinity();
    for (int t = 0; t < max_iters; ++t) {
      x = project(la, y);
      y = project(lb, x);
      const double d = (x - y).norm();
      if (prev - d < 1e-14) break;
      prev = d;
    }
    core = (x - y).norm();
    core_lo = 0.0;
    if (core > kGeomTol) {
      const Point u = (y - x) / core;
      // d(A,B) >= inf_B <u,.> - sup_A <u,.> for any unit u.
      const double sep = -support(ConvexRegion::lens(lb), -u) -
                         support(ConvexRegion::lens(la), u);
      core_lo = std::max(0.0, sep);
    }
  }
  SetDistance out;
  out.upper = std::max(0.0, core - ma - mb);
  out.lower = std::max(0.0, core_lo - ma - mb);
  return out;
}

namespace {

double max_region_distance(std::span<const ConvexRegion> regions,
                           const Point& x, int* arg = nullptr) {
  double worst = 0.0;
  int wi = 0;
  for (size_t i = 0; i < regions.size(); ++i) {
    const double d = region_distance(regions[i], x);
    if (d > worst) {
      worst = d;
      wi = static_cast<int>(i);
    }
  }
  if (arg) *arg = wi;
  return worst;
}

}  // namespace

Emptiness emptiness_margin(std::span<const ConvexRegion> regions,
                           const IterConfig& cfg) {
  Emptiness out;
  if (regions.empty()) {
    out.verdict = Emptiness::Verdict::Nonempty;
    return out;
  }
  const double delta = cfg.delta;
  const int m = static_cast<int>(regions.size());

  // Seed candidates: every anchor, then the anchor mean.
  std::vector<Point> seeds;
  Point mean = Point::Zero();
  int na = 0;
  for (const auto& s : regions)
    for (const Point& p : s.anchors()) {
      seeds.push_back(p);
      mean += p;
      ++na;
    }
  mean /= std::max(1, na);
  seeds.push_back(mean);

  Point x = mean;
  double fbest = std::numeric_limits<double>::infinity();
  for (const Point& s : seeds) {
    const double f = max_region_distance(regions, s);
    if (f < fbest) {
      fbest = f;
      x = s;
    }
  }
  if (fbest <= delta) {
    out.verdict = Emptiness::Verdict::Nonempty;
    out.witness = x;
    out.residual = fbest;
    return out;
  }

  // Phase 1: projection onto the farthest region.
  Point xb = x;
  int stall = 0;
  for (int t = 0; t < cfg.max_iters; ++t) {
    int far = 0;
    const double f = max_region_distance(regions, x, &far);
    if (f < fbest - 1e-14) {
      fbest = f;
      xb = x;
      stall = 0;
    } else if (++stall > 120) {
      break;
    }
    if (fbest <= delta) {
      out.verdict = Emptiness::Verdict::Nonempty;
      out.witness = x;
      out.residual = fbest;
      return out;
    }
    x = project(regions[far], x);
  }
  if (fbest <= delta) {
    out.verdict = Emptiness::Verdict::Nonempty;
    out.witness = xb;
    out.residual = fbest;
    return out;
  }

  // Certificate 1: a disjoint pair certifies global emptiness.
  double pair_lo = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      pair_lo = std::max(pair_lo, set_distance(regions[i], regions[j]).lower);
  if (pair_lo > 10 * delta) {
    out.verdict = Emptiness::Verdict::Empty;
    out.residual = pair_lo;
    return out;
  }

  // Certificate 2: lower bound on min g, g = 1/2 sum d(x,S_i)^2, via the
  // gradient at a near-minimizer (averaged projections) and a diameter bound.
  double diam = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Disk bi = regions[i].bounding_disk();
      const Disk bj = regions[j].bounding_disk();
      diam = std::max(diam, (bi.center - bj.center).norm() + bi.radius +
                                bj.radius);
    }
  Point y = xb;
  double cert = 0.0;
  for (int t = 0; t < 4000; ++t) {
    Point avg = Point::Zero();
    double g = 0.0;
    for (const auto& s : regions) {
      const Point p = project(s, y);
      avg += p;
      g += 0.5 * (y - p).squaredNorm();
    }
    avg /= m;
    const double grad = m * (y - avg).norm();
    const double lb = g - grad * diam;
    if (lb > 0) cert = std::max(cert, std::sqrt(2.0 * lb / m));
    if (cert > 10 * delta) {
      out.verdict = Emptiness::Verdict::Empty;
      out.residual = cert;
      return out;
    }
    const double f = max_region_distance(regions, y);
    if (f < fbest) {
      fbest = f;
      xb = y;
      if (fbest <= delta) {
        out.verdict = Emptiness::Verdict::Nonempty;
        out.witness = xb;
        out.residual = fbest;
        return out;
      }
    }
    y = avg;
  }

  out.verdict = Emptiness::Verdict::Ambiguous;
  out.witness = xb;
  out.residual = fbest;
  return out;
}

DykstraResult dykstra_project(std::span<const Disk> disks, const Point& x,
                              double tol, int cap) {
  DykstraResult out;
  if (disks.empty()) {
    out.point = x;
    out.converged = true;
    return out;
  }
  const int m = static_cast<int>(disks.size());
  std::vector<Point> inc(m, Point::Zero());
  Point cur = x;
  for (int t = 0; t < cap; ++t) {
    double moved = 0.0;
    for (int i = 0; i < m; ++i) {
      const Point y = cur + inc[i];
      const Point z = project(disks[i], y);
      inc[i] = y - z;
      moved += (z - cur).norm();
      cur = z;
    }
    ++out.iterations;
    if (moved <= tol) {
      out.converged = true;
      break;
    }
  }
  out.point = cur;
  return out;
}

bool minkowski_member_oracle(std::span<const Disk> disks, double r,
                             const Point& x) {
  const int m = static_cast<int>(disks.size());
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (!disk_pair_nonempty(disks[i].center, disks[i].radius,
                              disks[j].center, disks[j].radius))
        throw std::invalid_argument("empty disk intersection");
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k)
        if (!disk_triple_nonempty(disks[i], disks[j], disks[k]))
          throw std::invalid_argument("empty disk intersection");
  const DykstraResult pr = dykstra_project(disks, x);
  return (x - pr.point).norm() <= r + kGeomTol;
}

}  // namespace covlink
