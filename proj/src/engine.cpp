#include "covlink/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "covlink/oracle.hpp"
#include "covlink/symmetry.hpp"

namespace covlink {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Certified-emptiness gap above which a leaf is rejected without running
// the separation solver (far above sep_tol, so no near-feasible assignment
// can ever be cut).
constexpr double kCutBand = 1e-5;

int folded_rhs(RuleKind kind) {
  switch (kind) {
    case RuleKind::Int1: return 1;
    case RuleKind::Int2: return 2;
    case RuleKind::Int3: return 2;
    case RuleKind::Int4: return 3;
    case RuleKind::Int5: return 3;
    case RuleKind::Int6: return 4;
    case RuleKind::Int7: return 5;
    case RuleKind::Int3R: return 1;
    case RuleKind::Int4R: return 1;
    case RuleKind::Int5R: return 2;
    case RuleKind::Int6R: return 2;
    case RuleKind::Int7R: return 2;
    case RuleKind::LazyCut: return 0;
  }
  return 0;
}

}  // namespace

Strategy parse_strategy(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), ::tolower);
  if (s == "full") return Strategy::Full;
  if (s == "inc1") return Strategy::Inc1;
  if (s == "inc2") return Strategy::Inc2;
  if (s == "oracle") return Strategy::Oracle;
  throw std::invalid_argument("unknown strategy: " + s);
}

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Full: return "full";
    case Strategy::Inc1: return "inc1";
    case Strategy::Inc2: return "inc2";
    case Strategy::Oracle: return "oracle";
  }
  return "?";
}

std::string_view status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::TimeLimit: return "TimeLimit";
  }
  return "?";
}

SolveContext::SolveContext(const Instance& inst, double delta)
    : inst_(inst), geom_(inst, delta) {}

const std::vector<PointTupleRule>& SolveContext::int12_rules() {
  if (!int12_) {
    const auto t0 = Clock::now();
    int12_ = gen_int12(inst_);
    rule_gen_seconds_ += seconds_since(t0);
  }
  return *int12_;
}

const std::vector<PointTupleRule>& SolveContext::exact_link_rules() {
  if (!exact_) {
    const auto t0 = Clock::now();
    exact_ = detail::gen_exact_link_rules(geom_, {true, true, true});
    rule_gen_seconds_ += seconds_since(t0);
  }
  return *exact_;
}

const std::vector<PointTupleRule>& SolveContext::relaxed_rules() {
  if (!relaxed_) {
    const auto t0 = Clock::now();
    relaxed_ = detail::gen_relaxed_rules(inst_, {true, true, true});
    rule_gen_seconds_ += seconds_since(t0);
  }
  return *relaxed_;
}

const Placement* SolveContext::cached_rho(GraphKind kind, int p,
                                          const std::vector<int>& choice) const {
  const auto it = rho_cache_.find(std::make_tuple(kind, p, choice));
  return it == rho_cache_.end() ? nullptr : &it->second;
}

void SolveContext::store_rho(GraphKind kind, int p,
                             const std::vector<int>& choice,
                             const Placement& placement) {
  rho_cache_.emplace(std::make_tuple(kind, p, choice), placement);
}

namespace {

bool family_allowed(RuleKind kind, const detail::Capability& cap) {
  switch (kind) {
    case RuleKind::Int1:
    case RuleKind::Int2: return true;
    case RuleKind::Int3:
    case RuleKind::Int4:
    case RuleKind::Int3R:
    case RuleKind::Int5R: return cap.edges;
    case RuleKind::Int5:
    case RuleKind::Int6:
    case RuleKind::Int4R:
    case RuleKind::Int6R: return cap.wedges;
    case RuleKind::Int7:
    case RuleKind::Int7R: return cap.claws;
    case RuleKind::LazyCut: return true;
  }
  return false;
}

// Does fixing q -> f (f >= 1) saturate `rule` beyond its folded rhs, given
// the other fixed choices? fixed[x]: -1 undecided, 0 unassigned, 1..p.
bool rule_blocks(const PointTupleRule& r, const GraphStructure& g,
                 const std::vector<int>& fixed, int q, int f) {
  const auto at = [&](int x) { return x == q ? f : fixed[x]; };
  const auto adj = [&](int a, int b) {
    return a >= 1 && b >= 1 && g.adjacency[a][b];
  };
  const auto wedge = [&](int k1, int k2) {  // common neighbor exists
    if (k1 < 1 || k2 < 1 || k1 == k2) return false;
    for (int j : g.neighborhoods[k1])
      if (g.adjacency[j][k2]) return true;
    return false;
  };
  const auto claw = [&](int k1, int k2, int k3) {
    if (k1 < 1 || k2 < 1 || k3 < 1) return false;
    if (k1 == k2 || k1 == k3 || k2 == k3) return false;
    for (int j : g.neighborhoods[k1])
      if (g.adjacency[j][k2] && g.adjacency[j][k3]) return true;
    return false;
  };
  const auto* ix = r.idx.data();

  switch (r.kind) {
    case RuleKind::Int1: {
      const int a = ix[0], b = ix[1];
      return (q == a && at(b) == f) || (q == b && at(a) == f);
    }
    case RuleKind::Int2: {
      const int a = ix[0], b = ix[1], c = ix[2];
      if (q == a) return at(b) == f && at(c) == f;
      if (q == b) return at(a) == f && at(c) == f;
      if (q == c) return at(a) == f && at(b) == f;
      return false;
    }
    case RuleKind::Int3: {
      const int l = ix[0], u = ix[1], v = ix[2];
      if (q == l) {
        const int k = at(u);
        return k >= 1 && at(v) == k && adj(f, k);
      }
      const int other = (q == u) ? v : (q == v ? u : -1);
      if (other < 0) return false;
      return at(other) == f && adj(at(l), f);
    }
    case RuleKind::Int4: {
      const int a = ix[0], b = ix[1], u = ix[2], v = ix[3];
      if (q == a || q == b) {
        const int mate = (q == a) ? b : a;
        const int k = at(u);
        return at(mate) == f && k >= 1 && at(v) == k && adj(f, k);
      }
      if (q == u || q == v) {
        const int mate = (q == u) ? v : u;
        const int j = at(a);
        return at(mate) == f && j >= 1 && at(b) == j && adj(j, f);
      }
      return false;
    }
    case RuleKind::Int5: {
      const int a = ix[0], b = ix[1], u = ix[2], v = ix[3];
      if (q == a || q == b) {
        const int mate = (q == a) ? b : a;
        const int k2 = at(u);
        return at(mate) == f && k2 >= 1 && at(v) == k2 && wedge(f, k2);
      }
      if (q == u || q == v) {
        const int mate = (q == u) ? v : u;
        const int k1 = at(a);
        return at(mate) == f && k1 >= 1 && at(b) == k1 && wedge(f, k1);
      }
      return false;
    }
    case RuleKind::Int6: {
      const int s = ix[0], a = ix[1], b = ix[2], u = ix[3], v = ix[4];
      if (q == s) {
        const int k1 = at(a), k2 = at(u);
        return k1 >= 1 && at(b) == k1 && k2 >= 1 && at(v) == k2 && k1 != k2 &&
               adj(f, k1) && adj(f, k2);
      }
      if (q == a || q == b) {
        const int mate = (q == a) ? b : a;
        const int j = at(s), k2 = at(u);
        return at(mate) == f && j >= 1 && adj(j, f) && k2 >= 1 && at(v) == k2 &&
               k2 != f && adj(j, k2);
      }
      if (q == u || q == v) {
        const int mate = (q == u) ? v : u;
        const int j = at(s), k1 = at(a);
        return at(mate) == f && j >= 1 && adj(j, f) && k1 >= 1 && at(b) == k1 &&
               k1 != f && adj(j, k1);
      }
      return false;
    }
    case RuleKind::Int7: {
      const int pr[3][2] = {{ix[0], ix[1]}, {ix[2], ix[3]}, {ix[4], ix[5]}};
      for (int me = 0; me < 3; ++me) {
        if (q != pr[me][0] && q != pr[me][1]) continue;
        const int mate = (q == pr[me][0]) ? pr[me][1] : pr[me][0];
        if (at(mate) != f) return false;
        const int o1 = (me + 1) % 3, o2 = (me + 2) % 3;
        const int k2 = at(pr[o1][0]);
        const int k3 = at(pr[o2][0]);
        return k2 >= 1 && at(pr[o1][1]) == k2 && k3 >= 1 &&
               at(pr[o2][1]) == k3 && claw(f, k2, k3);
      }
      return false;
    }
    case RuleKind::Int3R: {
      const int i1 = ix[0], i2 = ix[1];
      if (q == i1) return adj(f, at(i2));
      if (q == i2) return adj(at(i1), f);
      return false;
    }
    case RuleKind::Int4R: {
      const int i1 = ix[0], i2 = ix[1];
      if (q == i1) return wedge(f, at(i2));
      if (q == i2) return wedge(at(i1), f);
      return false;
    }
    case RuleKind::Int5R: {
      const int a = ix[0], b = ix[1], u = ix[2];
      if (q == a || q == b) {
        const int mate = (q == a) ? b : a;
        return at(mate) == f && adj(f, at(u));
      }
      if (q == u) {
        const int j = at(a);
        return j >= 1 && at(b) == j && adj(j, f);
      }
      return false;
    }
    case RuleKind::Int6R: {
      const int s = ix[0], a = ix[1], b = ix[2];
      if (q == s) {
        const int k1 = at(a), k2 = at(b);
        return k1 >= 1 && k2 >= 1 && k1 != k2 && adj(f, k1) && adj(f, k2);
      }
      if (q == a || q == b) {
        const int mate = (q == a) ? b : a;
        const int j = at(s), k2 = at(mate);
        return j >= 1 && adj(j, f) && k2 >= 1 && k2 != f && adj(j, k2);
      }
      return false;
    }
    case RuleKind::Int7R: {
      const int a = ix[0], b = ix[1], c = ix[2];
      int o1 = -1, o2 = -1;
      if (q == a) {
        o1 = b;
        o2 = c;
      } else if (q == b) {
        o1 = a;
        o2 = c;
      } else if (q == c) {
        o1 = a;
        o2 = b;
      } else {
        return false;
      }
      return claw(f, at(o1), at(o2));
    }
    case RuleKind::LazyCut:
      return false;
  }
  return false;
}

bool cut_blocks(const Constraint& cut, const std::vector<int>& fixed, int q,
                int f) {
  bool self = false;
  for (const auto& [i, j] : cut.terms) {
    if (i == q) {
      if (j != f) return false;
      self = true;
    } else if (fixed[i] != j) {
      return false;
    }
  }
  return self;
}

struct Searcher {
  const Instance& inst;
  const GraphStructure& g;
  const SolveConfig& cfg;
  SolveContext& ctx;
  SolveStats& stats;
  int n, p;

  std::vector<int> order;            // branch order of points
  std::vector<int> fixed;            // -1 undecided / 0 unassigned / 1..p
  std::vector<std::uint32_t> cand;   // facility bits (bit f)
  std::vector<double> weight;
  double assigned_weight = 0.0;
  double sum_possible = 0.0;  // over undecided points with cand != 0
  std::vector<int> class_size;
  int empty_count = 0;

  std::vector<PointTupleRule> rules;
  std::vector<std::vector<int>> rules_by_point;
  std::vector<Constraint> cuts;
  std::vector<std::vector<int>> cuts_by_point;
  // Rules discovered lazily from certified separation witnesses. They join
  // the forward-checking index, but fixes made before injection never fired
  // events for them, so branching also scans this (small) list directly.
  std::vector<int> live_rules;
  std::vector<std::vector<int>> live_by_point;
  std::set<std::pair<RuleKind, std::array<std::int16_t, 6>>> injected;
  std::set<std::vector<std::pair<int, int>>> cut_keys;

  SymmetryBreaker sym;

  double best_obj = -1.0;
  Assignment best_assignment;
  Placement best_placement;
  bool have_incumbent = false;

  Clock::time_point deadline;
  bool aborted = false;
  double abort_bound = 0.0;
  double sep_seconds = 0.0;

  struct TrailEntry {
    int point;
    std::uint32_t bit;
    bool possible_drop;  // sum_possible lost this point's weight
  };
  std::vector<TrailEntry> trail;

  Searcher(const Instance& in, const GraphStructure& gs, const SolveConfig& c,
           SolveContext& cx, SolveStats& st)
      : inst(in), g(gs), cfg(c), ctx(cx), stats(st), n(in.n()), p(gs.p),
        sym(gs, c.symmetry_breaking) {
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return in.weights[a] > in.weights[b];
    });
    fixed.assign(n, -1);
    weight = in.weights;
    cand.assign(n, 0);
    for (int i = 0; i < n; ++i)
      cand[i] = ((1u << p) - 1u) << 1;  // bits 1..p
    class_size.assign(p + 1, 0);
    empty_count = p;
    for (int i = 0; i < n; ++i) sum_possible += weight[i];
    rules_by_point.assign(n, {});
    cuts_by_point.assign(n, {});
    live_by_point.assign(n, {});
  }

  void add_rules(std::span<const PointTupleRule> rs) {
    for (const PointTupleRule& r : rs) {
      const int id = static_cast<int>(rules.size());
      rules.push_back(r);
      for (int s = 0; s < r.arity; ++s) rules_by_point[r.idx[s]].push_back(id);
    }
  }

  void add_cut(const Constraint& cut) {
    if (!cut_keys.insert(cut.terms).second) return;
    const int id = static_cast<int>(cuts.size());
    cuts.push_back(cut);
    for (const auto& [i, j] : cut.terms) {
      (void)j;
      cuts_by_point[i].push_back(id);
    }
    ++stats.lazy_cuts;
  }

  void add_live_rule(const PointTupleRule& r) {
    if (!injected.insert({r.kind, r.idx}).second) return;
    const int id = static_cast<int>(rules.size());
    rules.push_back(r);
    for (int s = 0; s < r.arity; ++s) {
      rules_by_point[r.idx[s]].push_back(id);
      live_by_point[r.idx[s]].push_back(id);
    }
    live_rules.push_back(id);
    ++stats.lazy_cuts;
  }

  // Witness-derived strengthening: the certified-empty pair/triple maps back
  // to its Int family when its shape matches one, else to a no-good on the
  // sub-pattern alone (still valid: M-sets only shrink as classes grow).
  void reject_with_witness(const ProblemGeometry::Witness& w) {
    auto canonical_pair = [](int a, int b) {
      return a <= b ? std::pair<int, int>(a, b) : std::pair<int, int>(b, a);
    };
    std::vector<std::pair<int, int>> covs;        // (point, owner)
    std::vector<std::array<int, 3>> osets;        // (a, b, owner), a <= b
    for (const auto& piece : w.pieces) {
      if (!piece.region.oset) {
        covs.push_back({piece.region.a, piece.owner});
      } else {
        const auto [a, b] = canonical_pair(piece.region.a, piece.region.b);
        osets.push_back({a, b, piece.owner});
      }
    }
    std::sort(covs.begin(), covs.end());
    std::sort(osets.begin(), osets.end());
    const auto deg = [](const std::array<int, 3>& o) { return o[0] == o[1]; };

    auto rule = [&](RuleKind kind,
                    std::initializer_list<int> pts) -> PointTupleRule {
      PointTupleRule r;
      r.kind = kind;
      r.arity = static_cast<std::int8_t>(pts.size());
      int s = 0;
      for (int v : pts) r.idx[s++] = static_cast<std::int16_t>(v);
      return r;
    };

    const size_t nc = covs.size(), no = osets.size();
    if (nc == 1 && no == 1) {
      if (deg(osets[0]))
        add_live_rule(rule(RuleKind::Int3R, {covs[0].first, osets[0][0]}));
      else
        add_live_rule(
            rule(RuleKind::Int3, {covs[0].first, osets[0][0], osets[0][1]}));
      return;
    }
    if (nc == 0 && no == 2) {
      if (deg(osets[0]) && deg(osets[1])) {
        add_live_rule(rule(RuleKind::Int4R, {osets[0][0], osets[1][0]}));
        return;
      }
      if (!deg(osets[0]) && !deg(osets[1])) {
        add_live_rule(rule(RuleKind::Int5, {osets[0][0], osets[0][1],
                                            osets[1][0], osets[1][1]}));
        return;
      }
    }
    if (nc == 2 && no == 1) {
      if (deg(osets[0]))
        add_live_rule(rule(RuleKind::Int5R,
                           {covs[0].first, covs[1].first, osets[0][0]}));
      else
        add_live_rule(rule(RuleKind::Int4, {covs[0].first, covs[1].first,
                                            osets[0][0], osets[0][1]}));
      return;
    }
    if (nc == 1 && no == 2) {
      if (deg(osets[0]) && deg(osets[1])) {
        add_live_rule(
            rule(RuleKind::Int6R, {covs[0].first, osets[0][0], osets[1][0]}));
        return;
      }
      if (!deg(osets[0]) && !deg(osets[1])) {
        add_live_rule(rule(RuleKind::Int6,
                           {covs[0].first, osets[0][0], osets[0][1],
                            osets[1][0], osets[1][1]}));
        return;
      }
    }
    if (nc == 0 && no == 3) {
      const int degs = deg(osets[0]) + deg(osets[1]) + deg(osets[2]);
      if (degs == 3) {
        add_live_rule(
            rule(RuleKind::Int7R, {osets[0][0], osets[1][0], osets[2][0]}));
        return;
      }
      if (degs == 0) {
        add_live_rule(rule(RuleKind::Int7,
                           {osets[0][0], osets[0][1], osets[1][0], osets[1][1],
                            osets[2][0], osets[2][1]}));
        return;
      }
    }
    if (nc == 2 && no == 0) {
      add_live_rule(rule(RuleKind::Int1, {covs[0].first, covs[1].first}));
      return;
    }
    if (nc == 3 && no == 0) {
      add_live_rule(rule(RuleKind::Int2,
                         {covs[0].first, covs[1].first, covs[2].first}));
      return;
    }
    // Mixed degenerate shapes: no-good on the sub-pattern.
    Constraint cut;
    cut.kind = RuleKind::LazyCut;
    std::set<std::pair<int, int>> terms;
    for (const auto& [pt, owner] : covs) terms.insert({pt, owner});
    for (const auto& o : osets) {
      terms.insert({o[0], o[2]});
      terms.insert({o[1], o[2]});
    }
    cut.terms.assign(terms.begin(), terms.end());
    cut.rhs = static_cast<int>(cut.terms.size()) - 1;
    add_cut(cut);
  }

  bool time_up() {
    if ((stats.nodes & 1023) == 0 && Clock::now() > deadline) aborted = true;
    return aborted;
  }

  void clear_candidate(int x, int f, size_t trail_mark) {
    (void)trail_mark;
    const std::uint32_t bit = 1u << f;
    if (!(cand[x] & bit)) return;
    cand[x] &= ~bit;
    bool dropped = false;
    if (cand[x] == 0 && fixed[x] == -1) {
      sum_possible -= weight[x];
      dropped = true;
    }
    trail.push_back({x, bit, dropped});
  }

  // Forward checking after fixing q -> f: for every rule at q with exactly
  // one undecided slot left, clear that slot's now-conflicting facilities.
  void forward_check(int q, int f) {
    for (int rid : rules_by_point[q]) {
      const PointTupleRule& r = rules[rid];
      int hole = -1;
      int holes = 0;
      for (int s = 0; s < r.arity; ++s) {
        const int x = r.idx[s];
        if (x != q && fixed[x] == -1) {
          hole = x;
          if (++holes > 1) break;
        }
      }
      if (holes != 1) continue;
      for (int gfac = 1; gfac <= p; ++gfac)
        if ((cand[hole] >> gfac) & 1u)
          if (rule_blocks(r, g, fixed, hole, gfac)) clear_candidate(hole, gfac, 0);
    }
    for (int cid : cuts_by_point[q]) {
      const Constraint& cut = cuts[cid];
      int hole = -1, holef = 0, holes = 0;
      bool dead = false;
      for (const auto& [i, j] : cut.terms) {
        if (i == q) {
          if (j != f) {
            dead = true;
            break;
          }
        } else if (fixed[i] == -1) {
          hole = i;
          holef = j;
          if (++holes > 1) break;
        } else if (fixed[i] != j) {
          dead = true;
          break;
        }
      }
      if (dead || holes != 1) continue;
      clear_candidate(hole, holef, 0);
    }
  }

  void apply(int q, int f, size_t& trail_mark) {
    trail_mark = trail.size();
    fixed[q] = f;
    if (cand[q] != 0) sum_possible -= weight[q];
    if (f >= 1) {
      assigned_weight += weight[q];
      if (class_size[f]++ == 0) --empty_count;
      forward_check(q, f);
    }
    sym.push(f);
  }

  void undo(int q, int f, size_t trail_mark) {
    sym.pop();
    while (trail.size() > trail_mark) {
      const TrailEntry e = trail.back();
      trail.pop_back();
      cand[e.point] |= e.bit;
      if (e.possible_drop) sum_possible += weight[e.point];
    }
    if (f >= 1) {
      assigned_weight -= weight[q];
      if (--class_size[f] == 0) ++empty_count;
    }
    if (cand[q] != 0) sum_possible += weight[q];
    fixed[q] = -1;
  }

  double canonical_objective(const std::vector<int>& choice) const {
    double w = 0.0;
    for (int i = 0; i < n; ++i)
      if (choice[i] > 0) w += weight[i];
    return w;
  }

  Placement run_separation(const std::vector<int>& choice, bool retry_budget) {
    const auto t0 = Clock::now();
    if (const Placement* hit = ctx.cached_rho(g.kind, p, choice)) {
      sep_seconds += seconds_since(t0);
      return *hit;
    }
    Assignment a;
    a.choice = choice;
    RhoConfig rc;
    Placement pl = solve_rho(inst, g, a, rc);
    if (retry_budget && pl.rho > cfg.sep_tol) {
      rc.max_iters *= 4;
      rc.stall_window *= 4;
      const Placement pl2 = solve_rho(inst, g, a, rc);
      if (pl2.rho < pl.rho) pl = pl2;
    }
    ctx.store_rho(g.kind, p, choice, pl);
    ++stats.separation_calls;
    sep_seconds += seconds_since(t0);
    return pl;
  }

  void leaf() {
    if (cfg.require_nonempty && empty_count > 0) return;
    const double obj = canonical_objective(fixed);
    if (obj <= best_obj) return;

    Assignment a;
    a.choice = fixed;
    const auto classes = a.classes(p);
    double gap = 0.0;
    ProblemGeometry::Witness witness;
    const TriState screen =
        ctx.geometry().mset_feasible(classes, g, &gap, &witness);
    if (screen == TriState::Empty && gap >= kCutBand) {
      reject_with_witness(witness);
      return;
    }
    const Placement pl = run_separation(fixed, screen == TriState::Nonempty);
    const bool feasible = pl.rho <= cfg.sep_tol || screen == TriState::Nonempty;
    if (!feasible) {
      add_cut(make_lazy_cut(a, g));
      return;
    }
    best_obj = obj;
    best_assignment = a;
    best_placement = pl;
    have_incumbent = true;
  }

  void search(int depth) {
    ++stats.nodes;
    if (time_up()) return;
    if (depth == n) {
      leaf();
      return;
    }
    const int remaining = n - depth;
    bool forced = false;
    if (cfg.require_nonempty) {
      if (remaining < empty_count) return;
      forced = remaining == empty_count;
    }
    const double bound = assigned_weight + sum_possible;
    if (bound <= best_obj) return;

    const int q = order[depth];
    for (int f = 1; f <= p; ++f) {
      if (!((cand[q] >> f) & 1u)) continue;
      if (forced && class_size[f] > 0) continue;
      if (!sym.allows(f)) continue;
      bool blocked = false;
      for (int cid : cuts_by_point[q])
        if (cut_blocks(cuts[cid], fixed, q, f)) {
          blocked = true;
          break;
        }
      if (!blocked)
        for (int rid : live_by_point[q])
          if (rule_blocks(rules[rid], g, fixed, q, f)) {
            blocked = true;
            break;
          }
      if (blocked) continue;
      size_t mark;
      apply(q, f, mark);
      search(depth + 1);
      undo(q, f, mark);
      if (aborted) {
        abort_bound = std::max(abort_bound, bound);
        return;
      }
    }
    if (!forced) {
      size_t mark;
      apply(q, 0, mark);
      search(depth + 1);
      undo(q, 0, mark);
      if (aborted) abort_bound = std::max(abort_bound, bound);
    }
  }
};

SolveResult solve_via_oracle(SolveContext& ctx, const GraphStructure& structure,
                             const SolveConfig& cfg);

}  // namespace

SolveResult solve(const Instance& inst, const GraphStructure& structure,
                  const SolveConfig& cfg) {
  SolveContext ctx(inst, cfg.geom_delta);
  return solve(ctx, structure, cfg);
}

SolveResult solve(SolveContext& ctx, const GraphStructure& structure,
                  const SolveConfig& cfg) {
  if (cfg.time_limit <= 0) throw std::invalid_argument("time limit must be positive");
  if (cfg.strategy == Strategy::Oracle)
    return solve_via_oracle(ctx, structure, cfg);

  const Instance& inst = ctx.instance();
  inst.validate();
  if (structure.p < 1) throw std::invalid_argument("structure has no facilities");

  SolveResult res;
  SolveStats& stats = res.stats;

  const auto cap = detail::capability_of(structure);
  const auto t_rules0 = Clock::now();
  const double pre_gen = ctx.rule_gen_seconds();
  std::vector<PointTupleRule> pool = ctx.int12_rules();
  if (cfg.strategy == Strategy::Full) {
    for (const PointTupleRule& r : ctx.exact_link_rules())
      if (family_allowed(r.kind, cap)) pool.push_back(r);
  } else if (cfg.strategy == Strategy::Inc2) {
    for (const PointTupleRule& r : ctx.relaxed_rules())
      if (family_allowed(r.kind, cap)) pool.push_back(r);
  }
  (void)pre_gen;
  stats.time_rules_s = seconds_since(t_rules0);

  const ConstraintStats cs = constraint_stats(pool, structure, structure.p);
  stats.rules_by_kind = cs.rule_counts;
  stats.expanded_constraints = cs.expanded_total;
  stats.o_share = cs.o_share;

  const auto t_search0 = Clock::now();
  Searcher searcher(inst, structure, cfg, ctx, stats);
  searcher.add_rules(pool);
  searcher.deadline =
      Clock::now() + std::chrono::duration_cast<Clock::duration>(
                         std::chrono::duration<double>(cfg.time_limit));
  searcher.search(0);
  stats.time_sep_s = searcher.sep_seconds;
  stats.time_search_s = seconds_since(t_search0) - searcher.sep_seconds;

  const double total_weight = inst.total_weight();
  if (searcher.aborted) {
    res.status = SolveStatus::TimeLimit;
    res.best_bound = std::max(searcher.abort_bound,
                              searcher.have_incumbent ? searcher.best_obj : 0.0);
  } else {
    res.status = searcher.have_incumbent ? SolveStatus::Optimal
                                         : SolveStatus::Infeasible;
    res.best_bound = searcher.have_incumbent ? searcher.best_obj : 0.0;
  }
  res.best_bound = std::min(res.best_bound, total_weight);

  if (searcher.have_incumbent) {
    res.objective = searcher.best_obj;
    res.assignment = searcher.best_assignment;
    res.placement = searcher.best_placement;
    if (cfg.compact_layout && res.status == SolveStatus::Optimal) {
      const auto t0 = Clock::now();
      res.placement =
          recover_placement(inst, structure, res.assignment, true);
      stats.time_sep_s += seconds_since(t0);
    }
  } else {
    res.objective = 0.0;
    res.assignment = Assignment(inst.n());
  }
  if (res.status == SolveStatus::Optimal) {
    res.gap = 0.0;
  } else if (res.status == SolveStatus::TimeLimit) {
    res.gap = res.best_bound > 0
                  ? (res.best_bound - res.objective) / res.best_bound
                  : 0.0;
  }
  return res;
}

namespace {

SolveResult solve_via_oracle(SolveContext& ctx, const GraphStructure& structure,
                             const SolveConfig& cfg) {
  OracleConfig ocfg;
  ocfg.require_nonempty = cfg.require_nonempty;
  ocfg.skip_symmetric = cfg.symmetry_breaking;
  ocfg.sep_tol = cfg.sep_tol;
  const auto t0 = Clock::now();
  const OracleResult orc = enumerate(ctx, structure, ocfg);
  SolveResult res;
  res.stats.time_search_s = seconds_since(t0);
  res.stats.nodes = orc.enumerated;
  res.stats.separation_calls = orc.separation_calls;
  if (!orc.feasible) {
    res.status = SolveStatus::Infeasible;
    res.assignment = Assignment(ctx.instance().n());
    return res;
  }
  res.status = SolveStatus::Optimal;
  res.objective = orc.objective;
  res.best_bound = orc.objective;
  res.assignment = orc.optima.front();
  const auto t1 = Clock::now();
  res.placement = recover_placement(ctx.instance(), structure, res.assignment,
                                    cfg.compact_layout);
  res.stats.time_sep_s = seconds_since(t1);
  return res;
}

}  // namespace

std::vector<std::uint32_t> propagate(const Instance& inst,
                                     const GraphStructure& structure,
                                     const Assignment& partial,
                                     std::span<const PointTupleRule> rules,
                                     std::span<const Constraint> cuts,
                                     bool require_nonempty) {
  const int n = inst.n();
  const int p = structure.p;
  std::vector<int> fixed(partial.choice);
  fixed.resize(n, -1);
  std::vector<std::uint32_t> masks(n, 0);

  std::vector<int> class_size(p + 1, 0);
  int undecided = 0;
  for (int i = 0; i < n; ++i)
    if (fixed[i] >= 1) ++class_size[fixed[i]];
  for (int i = 0; i < n; ++i)
    if (fixed[i] == -1) ++undecided;

  for (int i = 0; i < n; ++i) {
    if (fixed[i] >= 0) {
      masks[i] = 1u << fixed[i];
      continue;
    }
    std::uint32_t m = 1u;  // unassigned always representable
    for (int f = 1; f <= p; ++f) {
      bool ok = true;
      for (const PointTupleRule& r : rules) {
        bool involves = false;
        for (int s = 0; s < r.arity; ++s) involves |= r.idx[s] == i;
        if (involves && rule_blocks(r, structure, fixed, i, f)) {
          ok = false;
          break;
        }
      }
      if (ok)
        for (const Constraint& cut : cuts)
          if (cut_blocks(cut, fixed, i, f)) {
            ok = false;
            break;
          }
      if (ok) m |= 1u << f;
    }
    masks[i] = m;
  }

  if (require_nonempty) {
    int empty = 0;
    std::uint32_t empty_bits = 0;
    for (int f = 1; f <= p; ++f)
      if (class_size[f] == 0) {
        ++empty;
        empty_bits |= 1u << f;
      }
    if (undecided < empty) {
      for (int i = 0; i < n; ++i)
        if (fixed[i] == -1) masks[i] = 0;  // dead node
    } else if (undecided == empty && empty > 0) {
      for (int i = 0; i < n; ++i)
        if (fixed[i] == -1) masks[i] &= empty_bits;
    }
  }
  return masks;
}

std::optional<Constraint> expanded_violation(
    const Assignment& assignment, std::span<const PointTupleRule> rules,
    std::span<const Constraint> cuts, const GraphStructure& structure) {
  const std::vector<int>& ch = assignment.choice;
  const auto cls_at = [&](int i) { return i >= 0 ? ch[i] : -1; };

  for (const PointTupleRule& r : rules) {
    // A full assignment violates the rule iff fixing the first slot's point
    // to its own chosen facility saturates it.
    const int q = r.idx[0];
    const int f = cls_at(q);
    if (f < 1) continue;
    std::vector<int> fixed(ch);
    if (rule_blocks(r, structure, fixed, q, f)) {
      Constraint c;
      c.kind = r.kind;
      c.rhs = folded_rhs(r.kind);
      c.tuple = r.idx;
      for (int s = 0; s < r.arity; ++s)
        c.terms.emplace_back(r.idx[s], ch[r.idx[s]]);
      return c;
    }
  }
  for (const Constraint& cut : cuts) {
    bool all = !cut.terms.empty();
    for (const auto& [i, j] : cut.terms) all &= ch[i] == j;
    if (all) return cut;
  }
  return std::nullopt;
}

}  // namespace covlink
