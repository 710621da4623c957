#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "covlink/engine.hpp"
#include "covlink/instance.hpp"

namespace covlink {

// Cross-product benchmark: instances x R x r x p x graphs x strategies.
// Empty override lists keep the instance's own values.
struct BenchSpec {
  std::vector<std::pair<std::string, Instance>> instances;  // (name, data)
  std::vector<double> R_values;
  std::vector<double> r_values;
  std::vector<int> p_values;
  std::vector<GraphKind> graphs;
  std::vector<Strategy> strategies;
  double time_limit = 60.0;
  bool require_nonempty = true;
  int jobs = 1;
};

struct BenchRecord {
  std::string instance_name;
  std::string instance_hash;
  GraphKind graph = GraphKind::Complete;
  Strategy strategy = Strategy::Inc2;
  int n = 0;
  int p = 0;
  double R = 0.0;  // -1 when per-point radii were kept
  double r = 0.0;
  bool failed = false;
  std::string error;
  SolveResult result;
  double wall_s = 0.0;
  std::string json;  // one JSON line
};

struct BenchGroupSummary {
  GraphKind graph = GraphKind::Complete;
  int n = 0;
  int p = 0;
  int runs = 0;
  int failures = 0;
  int optimal = 0;
  double avg_objective = 0.0;
  double avg_gap = 0.0;
  double avg_cuts = 0.0;
  double avg_nodes = 0.0;
  double avg_wall_s = 0.0;
  double avg_o_share = 0.0;
  double avg_expanded = 0.0;
};

struct BenchResult {
  std::vector<BenchRecord> records;
  std::vector<BenchGroupSummary> summaries;  // grouped by (graph, n, p)
  int failures = 0;
};

// Runs the whole grid; when `records_out` is non-null every record's JSON
// line is streamed to it as soon as the record exists.
BenchResult run_bench(const BenchSpec& spec, std::ostream* records_out);

std::string summary_table(const BenchResult& result);

}  // namespace covlink
