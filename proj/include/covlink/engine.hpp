#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "covlink/assignment.hpp"
#include "covlink/formulation.hpp"
#include "covlink/instance.hpp"
#include "covlink/separation.hpp"

namespace covlink {

enum class Strategy { Full, Inc1, Inc2, Oracle };
enum class SolveStatus { Optimal, Infeasible, TimeLimit };

Strategy parse_strategy(std::string_view name);
std::string_view strategy_name(Strategy s);
std::string_view status_name(SolveStatus s);

struct SolveConfig {
  Strategy strategy = Strategy::Inc2;
  double time_limit = 3600.0;  // seconds
  bool require_nonempty = true;
  bool compact_layout = false;
  double sep_tol = kSepTol;
  double geom_delta = 1e-9;
  std::uint64_t seed = 0;  // reserved for randomized tie-breaking; unused by
                           // the default deterministic search
  bool symmetry_breaking = true;
};

struct SolveStats {
  long long nodes = 0;
  int lazy_cuts = 0;
  int separation_calls = 0;
  std::map<RuleKind, int> rules_by_kind;
  long long expanded_constraints = 0;
  double o_share = 0.0;
  double time_rules_s = 0.0;
  double time_search_s = 0.0;
  double time_sep_s = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  Assignment assignment;
  Placement placement;
  double best_bound = 0.0;
  double gap = 0.0;
  SolveStats stats;
};

// Shared per-instance state: geometric tables, generated rule families and
// a separation cache, reusable across structures and strategies.
class SolveContext {
 public:
  explicit SolveContext(const Instance& inst, double delta = 1e-9);

  const Instance& instance() const { return inst_; }
  ProblemGeometry& geometry() { return geom_; }

  const std::vector<PointTupleRule>& int12_rules();
  const std::vector<PointTupleRule>& exact_link_rules();  // full capability
  const std::vector<PointTupleRule>& relaxed_rules();     // full capability
  double rule_gen_seconds() const { return rule_gen_seconds_; }

  // Separation results keyed by (structure kind, p, assignment).
  const Placement* cached_rho(GraphKind kind, int p,
                              const std::vector<int>& choice) const;
  void store_rho(GraphKind kind, int p, const std::vector<int>& choice,
                 const Placement& placement);

 private:
  const Instance& inst_;
  ProblemGeometry geom_;
  std::optional<std::vector<PointTupleRule>> int12_, exact_, relaxed_;
  double rule_gen_seconds_ = 0.0;
  std::map<std::tuple<GraphKind, int, std::vector<int>>, Placement> rho_cache_;
};

SolveResult solve(const Instance& inst, const GraphStructure& structure,
                  const SolveConfig& cfg = {});
SolveResult solve(SolveContext& ctx, const GraphStructure& structure,
                  const SolveConfig& cfg = {});

// Forward-checking filter: per-point candidate masks (bit 0 = unassigned,
// bit f = facility f) consistent with the fixed part of `partial`, iterated
// to fixpoint with the nonempty-class counting rule.
std::vector<std::uint32_t> propagate(const Instance& inst,
                                     const GraphStructure& structure,
                                     const Assignment& partial,
                                     std::span<const PointTupleRule> rules,
                                     std::span<const Constraint> cuts,
                                     bool require_nonempty);

// First violated expanded constraint of a full assignment, or nullopt.
std::optional<Constraint> expanded_violation(
    const Assignment& assignment, std::span<const PointTupleRule> rules,
    std::span<const Constraint> cuts, const GraphStructure& structure);

}  // namespace covlink
