#include "covlink/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "covlink/symmetry.hpp"

namespace covlink {

namespace {

constexpr double kCutBand = 1e-5;  // matches the engine's screen band

struct Enumerator {
  SolveContext& ctx;
  const GraphStructure& g;
  const OracleConfig& cfg;
  const Instance& inst;
  int n, p;

  std::vector<int> choice;
  std::vector<std::vector<int>> classes;
  SymmetryBreaker sym;

  long long enumerated = 0;
  std::map<double, long long, std::greater<double>> level_counts;

  // Collection pass state.
  double target_level = -1.0;
  std::vector<Assignment>* collect = nullptr;
  double suffix_weight_at(int depth) const { return suffix_weight[depth]; }
  std::vector<double> suffix_weight;

  Enumerator(SolveContext& c, const GraphStructure& gs, const OracleConfig& oc)
      : ctx(c), g(gs), cfg(oc), inst(c.instance()), n(inst.n()), p(gs.p),
        choice(n, 0), classes(p + 1), sym(gs, oc.skip_symmetric) {
    suffix_weight.assign(n + 1, 0.0);
    for (int i = n - 1; i >= 0; --i)
      suffix_weight[i] = suffix_weight[i + 1] + inst.weights[i];
  }

  bool class_extends(int f, int i) const {
    for (int other : classes[f]) {
      if (!ctx.geometry().pair_nonempty(other, i)) return false;
    }
    const int sz = static_cast<int>(classes[f].size());
    for (int a = 0; a < sz; ++a)
      for (int b = a + 1; b < sz; ++b)
        if (!ctx.geometry().triple_nonempty(classes[f][a], classes[f][b], i))
          return false;
    return true;
  }

  double objective() const {
    double w = 0.0;
    for (int i = 0; i < n; ++i)
      if (choice[i] > 0) w += inst.weights[i];
    return w;
  }

  void walk(int depth, double assigned) {
    if (collect && assigned + suffix_weight_at(depth) < target_level - 1e-12)
      return;
    if (depth == n) {
      if (cfg.require_nonempty)
        for (int f = 1; f <= p; ++f)
          if (classes[f].empty()) return;
      const double obj = objective();
      if (collect) {
        if (obj == target_level) {
          Assignment a;
          a.choice = choice;
          collect->push_back(a);
        }
      } else {
        ++enumerated;
        ++level_counts[obj];
      }
      return;
    }
    for (int f = 1; f <= p; ++f) {
      if (!sym.allows(f)) continue;
      if (!class_extends(f, depth)) continue;
      choice[depth] = f;
      classes[f].push_back(depth);
      sym.push(f);
      walk(depth + 1, assigned + inst.weights[depth]);
      sym.pop();
      classes[f].pop_back();
      choice[depth] = 0;
    }
    sym.push(0);
    walk(depth + 1, assigned);
    sym.pop();
  }
};

bool certify_feasible(SolveContext& ctx, const GraphStructure& g,
                      const Assignment& a, double sep_tol, int* sep_calls) {
  double gap = 0.0;
  const TriState screen =
      ctx.geometry().mset_feasible(a.classes(g.p), g, &gap);
  if (screen == TriState::Empty && gap >= kCutBand) return false;
  if (const Placement* hit = ctx.cached_rho(g.kind, g.p, a.choice))
    return hit->rho <= sep_tol || screen == TriState::Nonempty;
  const Placement pl = solve_rho(ctx.instance(), g, a);
  ctx.store_rho(g.kind, g.p, a.choice, pl);
  if (sep_calls) ++(*sep_calls);
  return pl.rho <= sep_tol || screen == TriState::Nonempty;
}

}  // namespace

OracleResult enumerate(const Instance& inst, const GraphStructure& structure,
                       const OracleConfig& cfg) {
  SolveContext ctx(inst);
  return enumerate(ctx, structure, cfg);
}

OracleResult enumerate(SolveContext& ctx, const GraphStructure& structure,
                       const OracleConfig& cfg) {
  const Instance& inst = ctx.instance();
  inst.validate();
  const double space = std::pow(double(structure.p) + 1.0, double(inst.n()));
  if (space > 1e7)
    throw std::invalid_argument("instance too large for oracle");

  OracleResult out;
  Enumerator en(ctx, structure, cfg);
  en.walk(0, 0.0);
  out.enumerated = en.enumerated;

  for (const auto& [level, count] : en.level_counts) {
    (void)count;
    if (cfg.require_nonempty && level <= 0) break;
    std::vector<Assignment> candidates;
    Enumerator coll(ctx, structure, cfg);
    coll.target_level = level;
    coll.collect = &candidates;
    coll.walk(0, 0.0);
    std::vector<Assignment> winners;
    for (const Assignment& a : candidates)
      if (certify_feasible(ctx, structure, a, cfg.sep_tol,
                           &out.separation_calls))
        winners.push_back(a);
    if (!winners.empty()) {
      out.feasible = true;
      out.objective = level;
      out.optima = std::move(winners);
      return out;
    }
  }
  // The all-unassigned map with empty classes everywhere.
  if (!cfg.require_nonempty) {
    Assignment empty(inst.n());
    if (certify_feasible(ctx, structure, empty, cfg.sep_tol,
                         &out.separation_calls)) {
      out.feasible = true;
      out.objective = 0.0;
      out.optima = {empty};
    }
  }
  return out;
}

}  // namespace covlink
