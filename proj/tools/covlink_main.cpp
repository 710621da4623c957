#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "covlink/bench.hpp"
#include "covlink/engine.hpp"
#include "covlink/instance.hpp"
#include "covlink/report.hpp"

namespace {

using namespace covlink;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

Instance load_instance(const std::string& path, const std::string& builtin) {
  if (!builtin.empty()) return builtin_example(builtin);
  return parse_instance(read_file(path));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

int cmd_solve(const std::string& instance_path, const std::string& builtin,
              const std::string& graph, const std::string& strategy,
              int p_override, double R_override, double r_override,
              double time_limit, bool require_nonempty, bool compact,
              const std::string& out_path, const std::string& svg_path) {
  Instance inst = load_instance(instance_path, builtin);
  if (p_override > 0) inst.p = p_override;
  if (R_override >= 0) inst.cover_radii.assign(inst.n(), R_override);
  if (r_override >= 0) inst.link_radius = r_override;
  inst.validate();

  const GraphStructure structure =
      build_edges(parse_graph_kind(graph), inst.p);
  SolveConfig cfg;
  cfg.strategy = parse_strategy(strategy);
  cfg.time_limit = time_limit;
  cfg.require_nonempty = require_nonempty;
  cfg.compact_layout = compact;

  const SolveResult result = solve(inst, structure, cfg);
  write_output(out_path, result_to_json(result, inst, structure));
  if (!svg_path.empty())
    write_output(svg_path, solution_to_svg(result, inst, structure));
  if (result.status == SolveStatus::Infeasible) return 3;
  if (result.status == SolveStatus::TimeLimit) return 4;
  return 0;
}

int cmd_gen(std::uint64_t seed, int n, const std::string& weight_mode,
            double R, double r, int p, const std::string& out_path) {
  const WeightMode mode = weight_mode == "uniform" ? WeightMode::Uniform
                                                   : WeightMode::Unit;
  const Instance inst = gen_random(seed, n, mode, R, r, p);
  const std::string text = serialize_instance(inst);
  write_output(out_path, text);
  std::cerr << "hash " << hash_hex(content_hash(text)) << "\n";
  return 0;
}

int cmd_bench(const std::vector<std::string>& instance_paths,
              const std::vector<std::string>& builtins,
              const std::string& n_list, const std::string& R_list,
              const std::string& r_list, const std::string& p_list,
              const std::string& graphs, const std::string& strategies,
              int seeds, std::uint64_t seed0, double time_limit,
              bool require_nonempty, int jobs, const std::string& out_path) {
  BenchSpec spec;
  for (const std::string& path : instance_paths)
    spec.instances.emplace_back(path, parse_instance(read_file(path)));
  for (const std::string& name : builtins)
    spec.instances.emplace_back(name, builtin_example(name));

  std::vector<double> Rs, rs;
  for (const std::string& t : split_list(R_list)) Rs.push_back(std::stod(t));
  for (const std::string& t : split_list(r_list)) rs.push_back(std::stod(t));
  std::vector<int> ps;
  for (const std::string& t : split_list(p_list)) ps.push_back(std::stoi(t));

  if (spec.instances.empty()) {
    // Generator spec: seeded random instances on the unit square.
    std::vector<int> ns;
    for (const std::string& t : split_list(n_list)) ns.push_back(std::stoi(t));
    if (ns.empty() || Rs.empty() || rs.empty() || ps.empty())
      throw CLI::ValidationError(
          "bench requires --instances/--builtin or --n/--R/--r/--p");
    const double gen_R = Rs.front();
    const double gen_r = rs.front();
    const int gen_p = ps.front();
    for (int n : ns)
      for (int s = 0; s < std::max(1, seeds); ++s) {
        const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(s);
        std::string name = "gen_n" + std::to_string(n) + "_s" +
                           std::to_string(seed);
        spec.instances.emplace_back(
            name, gen_random(seed, n, WeightMode::Unit, gen_R, gen_r, gen_p));
      }
  }
  spec.R_values = Rs;
  spec.r_values = rs;
  spec.p_values = ps;

  const std::vector<std::string> graph_names =
      graphs == "all" ? std::vector<std::string>{"complete", "cycle", "line",
                                                 "star", "ringstar",
                                                 "matching"}
                      : split_list(graphs);
  for (const std::string& gname : graph_names)
    spec.graphs.push_back(parse_graph_kind(gname));
  for (const std::string& sname : split_list(strategies))
    spec.strategies.push_back(parse_strategy(sname));
  if (spec.strategies.empty()) spec.strategies.push_back(Strategy::Inc2);
  spec.time_limit = time_limit;
  spec.require_nonempty = require_nonempty;
  spec.jobs = jobs;

  std::ofstream file_out;
  std::ostream* stream = &std::cout;
  if (!out_path.empty()) {
    file_out.open(out_path, std::ios::binary);
    if (!file_out) throw std::runtime_error("cannot write " + out_path);
    stream = &file_out;
  }
  const BenchResult result = run_bench(spec, stream);
  std::cerr << summary_table(result);
  const bool all_failed =
      !result.records.empty() &&
      result.failures == static_cast<int>(result.records.size());
  return all_failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covlink: planar maximal covering location with interconnected "
               "facilities"};
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "solve one instance");
  std::string instance_path, builtin, graph = "line", strategy = "inc2";
  std::string out_path, svg_path;
  int p_override = 0;
  double R_override = -1.0, r_override = -1.0, time_limit = 3600.0;
  bool compact = false;
  std::string require_nonempty = "true";
  solve_cmd->add_option("--instance", instance_path, "instance file path");
  solve_cmd->add_option("--builtin", builtin, "builtin instance name");
  solve_cmd->add_option("--graph", graph, "graph structure")->required();
  solve_cmd->add_option("--strategy", strategy, "full|inc1|inc2|oracle");
  solve_cmd->add_option("--p", p_override, "override facility count");
  solve_cmd->add_option("--R", R_override, "override uniform coverage radius");
  solve_cmd->add_option("--r", r_override, "override link radius");
  solve_cmd->add_option("--time-limit", time_limit, "seconds");
  solve_cmd->add_option("--require-nonempty", require_nonempty, "true|false");
  solve_cmd->add_flag("--compact", compact, "compact layout refinement");
  std::uint64_t seed = 0;
  solve_cmd->add_option("--seed", seed, "tie-breaking seed (reserved)");
  solve_cmd->add_option("--out", out_path, "result JSON path (default stdout)");
  solve_cmd->add_option("--svg", svg_path, "solution drawing path");

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "generate a random instance");
  std::uint64_t gen_seed = 0;
  int gen_n = 20, gen_p = 6;
  double gen_R = 0.1, gen_r = 0.2;
  std::string weight_mode = "unit", gen_out;
  gen_cmd->add_option("--seed", gen_seed, "RNG seed");
  gen_cmd->add_option("--n", gen_n, "number of demand points");
  gen_cmd->add_option("--R", gen_R, "uniform coverage radius");
  gen_cmd->add_option("--r", gen_r, "link radius");
  gen_cmd->add_option("--p", gen_p, "facility count");
  gen_cmd->add_option("--weight-mode", weight_mode, "unit|uniform");
  gen_cmd->add_option("--out", gen_out, "output path (default stdout)");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "run a benchmark grid");
  std::vector<std::string> bench_instances, bench_builtins;
  std::string bn, bR, br, bp, bgraphs = "all", bstrategies = "inc2";
  int bench_seeds = 1, bench_jobs = 1;
  std::uint64_t bench_seed0 = 1;
  double bench_tl = 60.0;
  std::string bench_out;
  std::string bench_nonempty = "true";
  bench_cmd->add_option("--instances", bench_instances, "instance files");
  bench_cmd->add_option("--builtin", bench_builtins, "builtin names");
  bench_cmd->add_option("--n", bn, "comma list of sizes (generator)");
  bench_cmd->add_option("--R", bR, "comma list of coverage radii");
  bench_cmd->add_option("--r", br, "comma list of link radii");
  bench_cmd->add_option("--p", bp, "comma list of facility counts");
  bench_cmd->add_option("--graphs", bgraphs, "comma list or 'all'");
  bench_cmd->add_option("--strategies", bstrategies, "comma list");
  bench_cmd->add_option("--seeds", bench_seeds, "samples per size");
  bench_cmd->add_option("--seed0", bench_seed0, "first seed");
  bench_cmd->add_option("--time-limit", bench_tl, "per-run seconds");
  bench_cmd->add_option("--require-nonempty", bench_nonempty, "true|false");
  bench_cmd->add_option("--jobs", bench_jobs, "concurrent workers");
  bench_cmd->add_option("--out", bench_out, "records path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) {
      if (instance_path.empty() == builtin.empty())
        throw CLI::ValidationError("pass exactly one of --instance/--builtin");
      if (require_nonempty != "true" && require_nonempty != "false")
        throw CLI::ValidationError("--require-nonempty expects true|false");
      return cmd_solve(instance_path, builtin, graph, strategy, p_override,
                       R_override, r_override, time_limit,
                       require_nonempty == "true", compact, out_path, svg_path);
    }
    if (gen_cmd->parsed())
      return cmd_gen(gen_seed, gen_n, weight_mode, gen_R, gen_r, gen_p,
                     gen_out);
    if (bench_cmd->parsed()) {
      if (bench_nonempty != "true" && bench_nonempty != "false")
        throw CLI::ValidationError("--require-nonempty expects true|false");
      return cmd_bench(bench_instances, bench_builtins, bn, bR, br, bp,
                       bgraphs, bstrategies, bench_seeds, bench_seed0,
                       bench_tl, bench_nonempty == "true", bench_jobs,
                       bench_out);
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
