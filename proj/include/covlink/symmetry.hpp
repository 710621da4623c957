#pragma once

#include <cstdint>
#include <vector>

#include "covlink/instance.hpp"

namespace covlink {

// Prunes facility-relabeling duplicates during depth-first assignment search.
// Complete/Star/Matching use first-occurrence canonical orderings over their
// interchangeable labels; Line/Cycle/RingStar use lex-leader pruning against
// the explicit edge-set automorphism group. Every orbit of a feasible
// assignment keeps at least one representative.
class SymmetryBreaker {
 public:
  SymmetryBreaker(const GraphStructure& structure, bool enabled);

  // May the next branched point take facility f (0 = unassigned)?
  bool allows(int f) const;
  // Commit the next value in branch order.
  void push(int f);
  void pop();

  static std::vector<std::vector<int>> automorphisms(
      const GraphStructure& structure);  // excludes the identity

 private:
  enum class Mode { None, Groups, Matching, PermLex };
  Mode mode_ = Mode::None;
  int p_ = 0;

  // Groups: ordered interchangeable label groups (first-occurrence).
  std::vector<std::vector<int>> groups_;
  std::vector<int> group_of_;  // label -> group index or -1
  std::vector<int> pos_in_group_;

  // Matching two-level state; Groups state. Snapshots per depth.
  struct Snap {
    std::vector<int> prefix_len;   // per group (Groups mode)
    std::vector<int> class_count;  // per facility (Matching mode)
    int used_blocks = 0;
    std::vector<std::int8_t> perm_state;  // 0 = equal so far, 1 = lex-less
  };
  std::vector<Snap> stack_;
  std::vector<std::vector<int>> perms_;
};

}  // namespace covlink
