#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

// Planar Euclidean predicates over disks, lenses (two-disk intersections)
// and their r-enlargements (Minkowski sums with a centered disk).
// All sets are closed; equality within kGeomTol counts as intersection.

namespace covlink {

using Point = Eigen::Vector2d;

inline constexpr double kGeomTol = 1e-12;

struct Disk {
  Point center = Point::Zero();
  double radius = 0.0;
};

// Boundary intersection points of two circles, in lexicographic (x, y)
// order. Tangency yields one point, disjoint or nested circles none.
// Throws std::invalid_argument on coincident circles.
std::vector<Point> circle_circle_intersections(const Disk& d1, const Disk& d2);

// Nonempty intersection of two disks. The boundary vertices are cached at
// construction; they are empty when one disk contains the other.
class Lens {
 public:
  Lens(const Disk& d1, const Disk& d2);  // throws if the disks are disjoint

  const Disk& d1() const { return d1_; }
  const Disk& d2() const { return d2_; }
  const std::vector<Point>& vertices() const { return vertices_; }

 private:
  Disk d1_, d2_;
  std::vector<Point> vertices_;
};

// Closed bounded convex region: a disk, a lens, or an r-enlarged lens
// (Lens ⊕ ball(r), the O-set of the two generating disks).
class ConvexRegion {
 public:
  enum class Kind { Disk, Lens, Enlarged };

  static ConvexRegion disk(const Disk& d);
  static ConvexRegion lens(const Lens& l);
  static ConvexRegion enlarged(const Lens& l, double margin);

  Kind kind() const { return kind_; }
  const Disk& as_disk() const { return disk_; }
  const Lens& as_lens() const { return lens_[0]; }
  double margin() const { return margin_; }

  // Representative points used to seed iterative schemes.
  std::vector<Point> anchors() const;
  // A disk guaranteed to contain the region.
  Disk bounding_disk() const;

 private:
  ConvexRegion() = default;
  Kind kind_ = Kind::Disk;
  Disk disk_;
  std::vector<Lens> lens_;  // 0 or 1 entries
  double margin_ = 0.0;
};

// Euclidean nearest point of the region to x (exact, case-analytic).
Point project(const ConvexRegion& region, const Point& x);
Point project(const Disk& d, const Point& x);
Point project(const Lens& l, const Point& x);

// d(x, region), closed form.
double region_distance(const ConvexRegion& region, const Point& x);
double lens_distance(const Lens& l, const Point& x);

bool contains(const ConvexRegion& region, const Point& x, double tol = kGeomTol);

// Support value max_{y in region} <dir, y> for a unit direction.
double support(const ConvexRegion& region, const Point& dir);

// ||a1-a2|| <= R1+R2, closed form.
bool disk_pair_nonempty(const Point& a1, double R1, const Point& a2, double R2);

// Exact combinatorial three-disk intersection test.
bool disk_triple_nonempty(const Disk& d1, const Disk& d2, const Disk& d3);

// B(d) ∩ (L ⊕ ball(r)) nonempty: d(center, L) <= radius + r.
bool disk_oset_nonempty(const Disk& d, const Lens& l, double r);

// Certified bracket for the distance between two regions.
// lower <= d(A,B) <= upper; lower comes from a separating direction.
struct SetDistance {
  double upper = 0.0;
  double lower = 0.0;
};
SetDistance set_distance(const ConvexRegion& a, const ConvexRegion& b,
                         int max_iters = 5000);

struct IterConfig {
  double delta = 1e-9;
  int max_iters = 20000;
};

struct Emptiness {
  enum class Verdict { Nonempty, Empty, Ambiguous };
  Verdict verdict = Verdict::Ambiguous;
  Point witness = Point::Zero();  // meaningful for Nonempty
  double residual = 0.0;          // best max-distance seen (Nonempty/Ambiguous)
                                  // or certified lower bound (Empty)
};

// Minimizes f(x) = max_i d(x, S_i) by projection onto the farthest set
// (Polyak step with target 0), from the mean of the regions' anchors.
// Nonempty when f <= delta; Empty when a certificate exceeds 10*delta.
Emptiness emptiness_margin(std::span<const ConvexRegion> regions,
                           const IterConfig& cfg = {});

struct DykstraResult {
  Point point = Point::Zero();
  bool converged = false;
  int iterations = 0;
};

// Dykstra cyclic projection of x onto the intersection of disks.
DykstraResult dykstra_project(std::span<const Disk> disks, const Point& x,
                              double tol = 1e-10, int cap = 10000);

// Membership of x in (⋂ disks) ⊕ ball(r), decided by Dykstra distance.
// Throws std::invalid_argument if the disk intersection is empty.
bool minkowski_member_oracle(std::span<const Disk> disks, double r,
                             const Point& x);

}  // namespace covlink
