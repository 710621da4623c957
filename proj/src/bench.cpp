#include "covlink/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <thread>

#include "covlink/report.hpp"

namespace covlink {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string record_json(const BenchRecord& rec, const Instance& inst,
                        const GraphStructure& structure) {
  std::string j = "{";
  j += "\"instance\":\"" + rec.instance_name + "\",";
  j += "\"instance_hash\":\"" + rec.instance_hash + "\",";
  j += "\"graph\":\"" + std::string(graph_kind_name(rec.graph)) + "\",";
  j += "\"strategy\":\"" + std::string(strategy_name(rec.strategy)) + "\",";
  j += "\"n\":" + std::to_string(rec.n) + ",";
  j += "\"p\":" + std::to_string(rec.p) + ",";
  j += "\"R\":" + (rec.R >= 0 ? num(rec.R) : std::string("null")) + ",";
  j += "\"r\":" + num(rec.r) + ",";
  j += "\"wall_s\":" + num(rec.wall_s) + ",";
  if (rec.failed) {
    j += "\"failed\":true,\"error\":\"" + rec.error + "\"}";
    return j;
  }
  j += "\"failed\":false,";
  j += "\"result\":" + result_to_json(rec.result, inst, structure) + "}";
  return j;
}

struct Task {
  size_t index;
  std::string name;
  Instance instance;  // overrides applied
  double R = -1.0;
  GraphKind graph;
  Strategy strategy;
};

}  // namespace

BenchResult run_bench(const BenchSpec& spec, std::ostream* records_out) {
  BenchResult out;

  std::vector<double> Rs = spec.R_values.empty()
                               ? std::vector<double>{-1.0}
                               : spec.R_values;
  std::vector<double> rs = spec.r_values;
  std::vector<int> ps = spec.p_values;
  std::vector<Task> tasks;
  for (const auto& [name, base] : spec.instances)
    for (double R : Rs) {
      Instance withR = base;
      if (R >= 0) withR.cover_radii.assign(base.n(), R);
      const std::vector<double> rlist =
          rs.empty() ? std::vector<double>{base.link_radius} : rs;
      for (double r : rlist) {
        Instance withr = withR;
        withr.link_radius = r;
        const std::vector<int> plist =
            ps.empty() ? std::vector<int>{base.p} : ps;
        for (int p : plist) {
          Instance full = withr;
          full.p = p;
          for (GraphKind gk : spec.graphs)
            for (Strategy st : spec.strategies) {
              Task t;
              t.index = tasks.size();
              t.name = name;
              t.instance = full;
              t.R = R;
              t.graph = gk;
              t.strategy = st;
              tasks.push_back(std::move(t));
            }
        }
      }
    }

  out.records.resize(tasks.size());

  // Group consecutive tasks sharing identical instance data so each group
  // reuses one SolveContext (geometry tables, rules, separation cache).
  std::vector<std::pair<size_t, size_t>> groups;
  size_t s = 0;
  while (s < tasks.size()) {
    size_t e = s + 1;
    while (e < tasks.size() &&
           tasks[e].instance.points == tasks[s].instance.points &&
           tasks[e].instance.cover_radii == tasks[s].instance.cover_radii &&
           tasks[e].instance.link_radius == tasks[s].instance.link_radius)
      ++e;
    groups.emplace_back(s, e);
    s = e;
  }

  std::mutex emit_mu;
  size_t next_emit = 0;
  auto emit_ready = [&]() {
    if (!records_out) return;
    while (next_emit < out.records.size() &&
           !out.records[next_emit].json.empty()) {
      (*records_out) << out.records[next_emit].json << "\n";
      ++next_emit;
    }
    records_out->flush();
  };

  auto run_group = [&](size_t gs, size_t ge) {
    SolveContext ctx(tasks[gs].instance);
    for (size_t ti = gs; ti < ge; ++ti) {
      const Task& t = tasks[ti];
      BenchRecord rec;
      rec.instance_name = t.name;
      rec.instance_hash = hash_hex(content_hash(serialize_instance(t.instance)));
      rec.graph = t.graph;
      rec.strategy = t.strategy;
      rec.n = t.instance.n();
      rec.p = t.instance.p;
      rec.R = t.R;
      rec.r = t.instance.link_radius;
      const auto t0 = std::chrono::steady_clock::now();
      GraphStructure structure;
      try {
        structure = build_edges(t.graph, t.instance.p);
        SolveConfig cfg;
        cfg.strategy = t.strategy;
        cfg.time_limit = spec.time_limit;
        cfg.require_nonempty = spec.require_nonempty;
        rec.result = solve(ctx, structure, cfg);
      } catch (const std::exception& e) {
        rec.failed = true;
        rec.error = e.what();
      }
      rec.wall_s = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
      rec.json = record_json(rec, t.instance, structure);
      {
        std::lock_guard<std::mutex> lock(emit_mu);
        out.records[t.index] = std::move(rec);
        emit_ready();
      }
    }
  };

  const int jobs = std::max(1, spec.jobs);
  if (jobs == 1 || groups.size() <= 1) {
    for (auto [gs, ge] : groups) run_group(gs, ge);
  } else {
    std::mutex queue_mu;
    size_t next_group = 0;
    auto worker = [&]() {
      for (;;) {
        size_t gi;
        {
          std::lock_guard<std::mutex> lock(queue_mu);
          if (next_group >= groups.size()) return;
          gi = next_group++;
        }
        run_group(groups[gi].first, groups[gi].second);
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Summaries grouped by (graph, n, p).
  std::map<std::tuple<GraphKind, int, int>, BenchGroupSummary> summap;
  for (const BenchRecord& rec : out.records) {
    auto& g = summap[{rec.graph, rec.n, rec.p}];
    g.graph = rec.graph;
    g.n = rec.n;
    g.p = rec.p;
    g.runs += 1;
    if (rec.failed) {
      g.failures += 1;
      out.failures += 1;
      continue;
    }
    g.optimal += rec.result.status == SolveStatus::Optimal;
    g.avg_objective += rec.result.objective;
    g.avg_gap += rec.result.gap;
    g.avg_cuts += rec.result.stats.lazy_cuts;
    g.avg_nodes += double(rec.result.stats.nodes);
    g.avg_wall_s += rec.wall_s;
    g.avg_o_share += rec.result.stats.o_share;
    g.avg_expanded += double(rec.result.stats.expanded_constraints);
  }
  for (auto& [key, g] : summap) {
    (void)key;
    const int ok = g.runs - g.failures;
    if (ok > 0) {
      g.avg_objective /= ok;
      g.avg_gap /= ok;
      g.avg_cuts /= ok;
      g.avg_nodes /= ok;
      g.avg_wall_s /= ok;
      g.avg_o_share /= ok;
      g.avg_expanded /= ok;
    }
    out.summaries.push_back(g);
  }
  return out;
}

std::string summary_table(const BenchResult& result) {
  std::string s;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-10s %4s %3s %5s %5s %10s %9s %8s %8s %10s %8s\n",
                "graph", "n", "p", "runs", "fail", "avg_obj", "avg_gap",
                "avg_cuts", "avg_node", "avg_wall_s", "o_share");
  s += buf;
  for (const BenchGroupSummary& g : result.summaries) {
    std::snprintf(buf, sizeof(buf),
                  "%-10s %4d %3d %5d %5d %10.3f %9.4f %8.1f %8.0f %10.3f %8.3f\n",
                  std::string(graph_kind_name(g.graph)).c_str(), g.n, g.p,
                  g.runs, g.failures, g.avg_objective, g.avg_gap, g.avg_cuts,
                  g.avg_nodes, g.avg_wall_s, g.avg_o_share);
    s += buf;
  }
  return s;
}

}  // namespace covlink
