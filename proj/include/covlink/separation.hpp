#pragma once

#include <map>
#include <vector>

#include "covlink/assignment.hpp"
#include "covlink/formulation.hpp"
#include "covlink/geometry.hpp"
#include "covlink/instance.hpp"

namespace covlink {

inline constexpr double kSepTol = 1e-6;
inline constexpr double kFeasTol = 1e-7;

// Facility coordinates recovered for a fixed assignment. Coverage is hard:
// every X_j lies in the intersection of its class's coverage disks (within
// kFeasTol); rho is the minimized total link slack sum_e max(0, |e| - r).
struct Placement {
  std::vector<Point> coords;  // index 1..p at [1..p]; [0] unused
  double rho = 0.0;
  std::map<std::pair<int, int>, double> per_edge_slack;
  bool converged = true;
};

struct RhoConfig {
  int max_iters = 100000;
  int stall_window = 200;
  double stall_eps = 1e-9;
  double dykstra_tol = 1e-10;
  int dykstra_cap = 10000;
  std::vector<Point> initial_override;  // test hook: size p+1 when used
};

// Globally minimizes the convex link-slack objective subject to the coverage
// balls, by projected subgradient with Polyak steps capped at c/sqrt(t),
// c = r + max R. Throws std::runtime_error("infeasible coverage") when some
// facility's coverage intersection is empty.
Placement solve_rho(const Instance& inst, const GraphStructure& structure,
                    const Assignment& assignment, const RhoConfig& cfg = {});

// Explicit coordinates for a feasible assignment. compact=false returns the
// solve_rho witness; compact=true further shortens total link length under
// hard link caps |X_j - X_k| <= r.
Placement recover_placement(const Instance& inst,
                            const GraphStructure& structure,
                            const Assignment& assignment, bool compact,
                            const RhoConfig& cfg = {});

// No-good cut excluding this covering pattern and all its supersets:
// sum over assigned (i,j) of z_ij <= (number assigned) - 1.
Constraint make_lazy_cut(const Assignment& assignment,
                         const GraphStructure& structure);

}  // namespace covlink
