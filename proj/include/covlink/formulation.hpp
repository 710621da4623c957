#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "covlink/geometry.hpp"
#include "covlink/instance.hpp"

namespace covlink {

enum class RuleKind : std::uint8_t {
  Int1,
  Int2,
  Int3,
  Int4,
  Int5,
  Int6,
  Int7,
  Int3R,
  Int4R,
  Int5R,
  Int6R,
  Int7R,
  LazyCut,
};

std::string_view rule_kind_name(RuleKind kind);

// One geometric incompatibility, stored per demand-point tuple; the engine
// expands it over facility tuples consistent with the edge set. Slot layout
// by kind (demand indices, 0-based):
//   Int1  {a,b} same facility            Int2  {a,b,c} same facility
//   Int3  l | {u,v}                      Int4  {a,b} | {u,v}
//   Int5  {a,b} | {u,v}                  Int6  s | {a,b} | {u,v}
//   Int7  {a,b} | {c,d} | {e,f}
//   Int3R a | b     Int4R a | b          Int5R {a,b} | u
//   Int6R s | a | b                      Int7R a | b | c
struct PointTupleRule {
  RuleKind kind = RuleKind::Int1;
  std::array<std::int16_t, 6> idx{};
  std::int8_t arity = 0;
  double premise_margin = 0.0;  // certified emptiness gap of the premise
};

// Materialized inequality sum(z terms) <= rhs with x-variables folded out.
struct Constraint {
  RuleKind kind = RuleKind::LazyCut;
  std::vector<std::pair<int, int>> terms;  // (demand index, facility index)
  int rhs = 0;
  std::array<std::int16_t, 6> tuple{};
};

std::vector<PointTupleRule> gen_int12(const Instance& inst);
std::vector<PointTupleRule> gen_int37(const Instance& inst,
                                      const GraphStructure& structure);
std::vector<PointTupleRule> gen_relaxed(const Instance& inst,
                                        const GraphStructure& structure);

struct ConstraintStats {
  std::map<RuleKind, int> rule_counts;
  std::map<RuleKind, long long> expanded_by_kind;
  long long expanded_total = 0;
  double o_share = 0.0;  // share of expanded constraints from O-set families
};

ConstraintStats constraint_stats(std::span<const PointTupleRule> rules,
                                 const GraphStructure& structure, int p);

// Audit dump, one rule per line: KIND i1,i2[,...] premise_margin
std::string dump_rules(std::span<const PointTupleRule> rules);

// ---------------------------------------------------------------------------
// Shared geometric tables for one instance and link radius: pairwise disk
// tests, the lens set, point-lens and lens-lens distances, and memoized
// verdicts for the M-set triple tests of the Helly reduction.

enum class TriState : std::int8_t { Empty, Nonempty, Ambiguous };

// Region of an M-set: a coverage disk (oset=false, a=point) or the O-set of
// the pair {a,b} (oset=true; a==b is the degenerate disk of radius R_a + r).
struct MRegion {
  std::int16_t a = 0;
  std::int16_t b = 0;
  bool oset = false;
};

class ProblemGeometry {
 public:
  ProblemGeometry(const Instance& inst, double delta = 1e-9);

  const Instance& instance() const { return *inst_; }

  bool pair_nonempty(int i, int j) const { return pair_ok_[i][j]; }
  bool triple_nonempty(int i, int j, int k) const;
  int lens_index(int i, int j) const { return lens_id_[i][j]; }  // -1 if none
  const Lens& lens(int id) const { return lenses_[id]; }
  const std::pair<int, int>& lens_points(int id) const { return lens_pts_[id]; }
  int lens_count() const { return static_cast<int>(lenses_.size()); }

  double point_lens_distance(int point, int lens_id) const;
  SetDistance lens_lens_distance(int id1, int id2) const;  // memoized

  ConvexRegion region(const MRegion& r) const;

  // Emptiness of up to three M-set regions; Empty verdicts carry a certified
  // gap in *gap (lower bound on the min-max distance).
  TriState mset_pair(const MRegion& x, const MRegion& y, double* gap) const;
  TriState mset_triple(const MRegion& x, const MRegion& y, const MRegion& z,
                       double* gap) const;  // memoized

  // A certified-empty pair or triple of one facility's M-set, with the
  // facilities owning each region (j itself for coverage disks, the linked
  // k for O-sets).
  struct Witness {
    int facility = 0;
    struct Piece {
      MRegion region;
      int owner = 0;
    };
    std::vector<Piece> pieces;  // 2 or 3
  };

  // Full Theorem-2 feasibility of a labeled class pattern under a structure:
  // all triples of every facility's M-set nonempty. Empty verdicts carry the
  // certified gap of the witnessing pair/triple and, optionally, the witness.
  TriState mset_feasible(const std::vector<std::vector<int>>& classes,
                         const GraphStructure& structure, double* gap,
                         Witness* witness = nullptr) const;

  double delta() const { return delta_; }

 private:
  const Instance* inst_;
  double delta_;
  std::vector<std::vector<char>> pair_ok_;
  std::vector<std::vector<double>> center_dist_;
  std::vector<std::vector<int>> lens_id_;
  std::vector<Lens> lenses_;
  std::vector<std::pair<int, int>> lens_pts_;
  mutable std::vector<std::vector<double>> pt_lens_;  // lazy, -1 = unset
  mutable std::map<std::pair<int, int>, SetDistance> lens_lens_;
  mutable std::map<std::array<std::int32_t, 3>, std::pair<TriState, double>>
      triple_memo_;
  mutable std::map<std::array<std::int16_t, 3>, bool> disk_triple_memo_;

  std::int32_t region_key(const MRegion& r) const;
};

// Structure-aware rule bundle for one solve strategy.
struct RulePool {
  std::vector<PointTupleRule> rules;
  ConstraintStats stats;
};

namespace detail {

// What the structure can expand: any edge, a 2-wedge, a 3-claw.
struct Capability {
  bool edges = false;
  bool wedges = false;
  bool claws = false;
};

Capability capability_of(const GraphStructure& structure);

std::vector<PointTupleRule> gen_exact_link_rules(const ProblemGeometry& geom,
                                                 const Capability& cap);
std::vector<PointTupleRule> gen_relaxed_rules(const Instance& inst,
                                              const Capability& cap);

}  // namespace detail

}  // namespace covlink
