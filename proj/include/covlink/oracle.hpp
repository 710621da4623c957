#pragma once

#include <vector>

#include "covlink/assignment.hpp"
#include "covlink/engine.hpp"
#include "covlink/instance.hpp"

namespace covlink {

struct OracleConfig {
  bool require_nonempty = true;
  bool skip_symmetric = true;
  double sep_tol = kSepTol;
};

struct OracleResult {
  bool feasible = false;
  double objective = 0.0;
  std::vector<Assignment> optima;  // all optima reached by the enumeration
  long long enumerated = 0;        // complete assignments visited
  int separation_calls = 0;
};

// Brute-force ground truth: every map from points to {unassigned, 1..p},
// class coverage decided by the exact pair/triple Helly cascade and link
// feasibility certified by solve_rho. Guard: (p+1)^n <= 1e7.
OracleResult enumerate(const Instance& inst, const GraphStructure& structure,
                       const OracleConfig& cfg = {});
OracleResult enumerate(SolveContext& ctx, const GraphStructure& structure,
                       const OracleConfig& cfg = {});

}  // namespace covlink
