#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "covlink/geometry.hpp"

namespace covlink {

// Problem data: demand points a_1..a_n with weights and coverage radii,
// the link radius r and the facility count p. Facility indices are 1-based.
struct Instance {
  std::vector<Point> points;
  std::vector<double> weights;
  std::vector<double> cover_radii;
  double link_radius = 0.0;
  int p = 1;

  int n() const { return static_cast<int>(points.size()); }
  Disk cover_disk(int i) const { return {points[i], cover_radii[i]}; }
  double total_weight() const;
  void validate() const;  // throws std::invalid_argument on bad fields
};

enum class GraphKind { Complete, Cycle, Line, Star, RingStar, Matching };

GraphKind parse_graph_kind(std::string_view name);
std::string_view graph_kind_name(GraphKind kind);

// Fixed facility graph: the edge set realizes the structure's fixing rule.
struct GraphStructure {
  GraphKind kind = GraphKind::Complete;
  int p = 1;
  std::vector<std::pair<int, int>> edges;         // 1 <= j < k <= p
  std::vector<std::vector<int>> neighborhoods;    // index 1..p, sorted
  std::vector<std::vector<char>> adjacency;       // (p+1)x(p+1)

  int degree(int j) const { return static_cast<int>(neighborhoods[j].size()); }
  int max_degree() const;
};

GraphStructure build_edges(GraphKind kind, int p);

Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& inst);

Instance builtin_example(std::string_view name);  // "example1" | "example2"

enum class WeightMode { Unit, Uniform };

Instance gen_random(std::uint64_t seed, int n, WeightMode mode, double R,
                    double r, int p);

// Circle Intersection Points: demand points plus all pairwise boundary
// intersections of the coverage disks, deduplicated at 1e-9.
struct CipSet {
  std::vector<Point> candidates;
  std::vector<std::vector<int>> coverage;  // candidate -> demand indices
};

CipSet compute_cip(const Instance& inst);

// Classical no-link planar MCLP over the CIP candidates: pick p candidates
// maximizing the weighted number of demand points covered by at least one.
struct CipSolve {
  double objective = 0.0;
  std::vector<int> chosen;  // candidate indices
};

CipSolve solve_mclp_cip(const Instance& inst);

}  // namespace covlink
