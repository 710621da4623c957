#include "covlink/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace covlink {

namespace {

constexpr double kEmitBand = 1e-9;  // premise must be empty by at least this

PointTupleRule make_rule(RuleKind kind, std::initializer_list<int> pts,
                         double margin) {
  PointTupleRule r;
  r.kind = kind;
  r.arity = static_cast<std::int8_t>(pts.size());
  int s = 0;
  for (int v : pts) r.idx[s++] = static_cast<std::int16_t>(v);
  r.premise_margin = margin;
  return r;
}

}  // namespace

namespace detail {

Capability capability_of(const GraphStructure& g) {
  Capability c;
  c.edges = !g.edges.empty();
  c.wedges = g.max_degree() >= 2;
  c.claws = g.max_degree() >= 3;
  return c;
}

}  // namespace detail

using detail::Capability;

std::string_view rule_kind_name(RuleKind kind) {
  switch (kind) {
    case RuleKind::Int1: return "Int1";
    case RuleKind::Int2: return "Int2";
    case RuleKind::Int3: return "Int3";
    case RuleKind::Int4: return "Int4";
    case RuleKind::Int5: return "Int5";
    case RuleKind::Int6: return "Int6";
    case RuleKind::Int7: return "Int7";
    case RuleKind::Int3R: return "Int3R";
    case RuleKind::Int4R: return "Int4R";
    case RuleKind::Int5R: return "Int5R";
    case RuleKind::Int6R: return "Int6R";
    case RuleKind::Int7R: return "Int7R";
    case RuleKind::LazyCut: return "LazyCut";
  }
  return "?";
}

ProblemGeometry::ProblemGeometry(const Instance& inst, double delta)
    : inst_(&inst), delta_(delta) {
  const int n = inst.n();
  pair_ok_.assign(n, std::vector<char>(n, 1));
  center_dist_.assign(n, std::vector<double>(n, 0.0));
  lens_id_.assign(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = (inst.points[i] - inst.points[j]).norm();
      center_dist_[i][j] = center_dist_[j][i] = d;
      const bool ok = disk_pair_nonempty(inst.points[i], inst.cover_radii[i],
                                         inst.points[j], inst.cover_radii[j]);
      pair_ok_[i][j] = pair_ok_[j][i] = ok;
      if (ok) {
        lens_id_[i][j] = lens_id_[j][i] = static_cast<int>(lenses_.size());
        lenses_.emplace_back(inst.cover_disk(i), inst.cover_disk(j));
        lens_pts_.emplace_back(i, j);
      }
    }
  pt_lens_.assign(n, std::vector<double>(lenses_.size(), -1.0));
}

bool ProblemGeometry::triple_nonempty(int i, int j, int k) const {
  std::array<std::int16_t, 3> key = {static_cast<std::int16_t>(i),
                                     static_cast<std::int16_t>(j),
                                     static_cast<std::int16_t>(k)};
  std::sort(key.begin(), key.end());
  auto it = disk_triple_memo_.find(key);
  if (it != disk_triple_memo_.end()) return it->second;
  const bool v = disk_triple_nonempty(inst_->cover_disk(i), inst_->cover_disk(j),
                                      inst_->cover_disk(k));
  disk_triple_memo_.emplace(key, v);
  return v;
}

double ProblemGeometry::point_lens_distance(int point, int lens_id) const {
  double& slot = pt_lens_[point][lens_id];
  if (slot < 0) slot = lens_distance(lenses_[lens_id], inst_->points[point]);
  return slot;
}

SetDistance ProblemGeometry::lens_lens_distance(int id1, int id2) const {
  if (id1 > id2) std::swap(id1, id2);
  auto it = lens_lens_.find({id1, id2});
  if (it != lens_lens_.end()) return it->second;
  const SetDistance d = set_distance(ConvexRegion::lens(lenses_[id1]),
                                     ConvexRegion::lens(lenses_[id2]));
  lens_lens_.emplace(std::make_pair(id1, id2), d);
  return d;
}

ConvexRegion ProblemGeometry::region(const MRegion& r) const {
  const double link_r = inst_->link_radius;
  if (!r.oset) return ConvexRegion::disk(inst_->cover_disk(r.a));
  if (r.a == r.b)
    return ConvexRegion::disk(
        {inst_->points[r.a], inst_->cover_radii[r.a] + link_r});
  return ConvexRegion::enlarged(lenses_[lens_id_[r.a][r.b]], link_r);
}

std::int32_t ProblemGeometry::region_key(const MRegion& r) const {
  const int n = inst_->n();
  if (!r.oset) return r.a;
  int a = r.a, b = r.b;
  if (a > b) std::swap(a, b);
  return n + a * n + b;
}

TriState ProblemGeometry::mset_pair(const MRegion& x, const MRegion& y,
                                    double* gap) const {
  *gap = 0.0;
  const double r = inst_->link_radius;
  // Every M-region is (point or lens) ⊕ ball(m).
  const bool x_deg = !x.oset || x.a == x.b;
  const bool y_deg = !y.oset || y.a == y.b;
  const double mx =
      x.oset ? (x_deg ? inst_->cover_radii[x.a] + r : r) : inst_->cover_radii[x.a];
  const double my =
      y.oset ? (y_deg ? inst_->cover_radii[y.a] + r : r) : inst_->cover_radii[y.a];

  double lo, hi;
  if (x_deg && y_deg) {
    lo = hi = center_dist_[x.a][y.a];
  } else if (x_deg) {
    lo = hi = point_lens_distance(x.a, lens_id_[y.a][y.b]);
  } else if (y_deg) {
    lo = hi = point_lens_distance(y.a, lens_id_[x.a][x.b]);
  } else {
    const SetDistance d =
        lens_lens_distance(lens_id_[x.a][x.b], lens_id_[y.a][y.b]);
    lo = d.lower;
    hi = d.upper;
  }
  if (hi <= mx + my + kGeomTol) return TriState::Nonempty;
  if (lo > mx + my + kEmitBand) {
    *gap = lo - mx - my;
    return TriState::Empty;
  }
  return TriState::Ambiguous;
}

TriState ProblemGeometry::mset_triple(const MRegion& x, const MRegion& y,
                                      const MRegion& z, double* gap) const {
  *gap = 0.0;
  std::array<std::int32_t, 3> key = {region_key(x), region_key(y),
                                     region_key(z)};
  std::sort(key.begin(), key.end());
  auto it = triple_memo_.find(key);
  if (it != triple_memo_.end()) {
    *gap = it->second.second;
    return it->second.first;
  }

  TriState verdict = TriState::Ambiguous;
  double g = 0.0;
  const MRegion* rs[3] = {&x, &y, &z};

  bool pair_ambiguous = false;
  for (int a = 0; a < 3 && verdict == TriState::Ambiguous; ++a)
    for (int b = a + 1; b < 3; ++b) {
      double pg = 0.0;
      const TriState ps = mset_pair(*rs[a], *rs[b], &pg);
      if (ps == TriState::Empty) {
        verdict = TriState::Empty;
        g = pg;
        break;
      }
      if (ps == TriState::Ambiguous) pair_ambiguous = true;
    }

  if (verdict == TriState::Ambiguous && !pair_ambiguous) {
    const bool all_disks = (!x.oset || x.a == x.b) && (!y.oset || y.a == y.b) &&
                           (!z.oset || z.a == z.b);
    std::vector<ConvexRegion> regs = {region(x), region(y), region(z)};
    if (all_disks) {
      const bool ne = disk_triple_nonempty(regs[0].as_disk(), regs[1].as_disk(),
                                           regs[2].as_disk());
      if (ne) {
        verdict = TriState::Nonempty;
      } else {
        // Exact emptiness; ask the iterative solver for a certified gap.
        const Emptiness em = emptiness_margin(regs, {delta_, 20000});
        verdict = TriState::Empty;
        g = em.verdict == Emptiness::Verdict::Empty ? em.residual : 0.0;
      }
    } else {
      const Emptiness em = emptiness_margin(regs, {delta_, 20000});
      switch (em.verdict) {
        case Emptiness::Verdict::Nonempty:
          verdict = TriState::Nonempty;
          break;
        case Emptiness::Verdict::Empty:
          verdict = TriState::Empty;
          g = em.residual;
          break;
        case Emptiness::Verdict::Ambiguous:
          verdict = TriState::Ambiguous;
          break;
      }
    }
  }

  triple_memo_.emplace(key, std::make_pair(verdict, g));
  *gap = g;
  return verdict;
}

TriState ProblemGeometry::mset_feasible(
    const std::vector<std::vector<int>>& classes,
    const GraphStructure& structure, double* gap, Witness* witness) const {
  *gap = 0.0;
  bool ambiguous = false;
  std::vector<MRegion> regions;
  std::vector<int> owners;
  for (int j = 1; j <= structure.p; ++j) {
    regions.clear();
    owners.clear();
    for (int i : classes[j]) {
      regions.push_back({static_cast<std::int16_t>(i),
                         static_cast<std::int16_t>(i), false});
      owners.push_back(j);
    }
    for (int k : structure.neighborhoods[j]) {
      const auto& ck = classes[k];
      for (size_t a = 0; a < ck.size(); ++a)
        for (size_t b = a; b < ck.size(); ++b) {
          if (a != b && lens_id_[ck[a]][ck[b]] < 0) {
            // The linked class itself has a disjoint coverage pair; its
            // O-set is empty and so is M_j.
            *gap = center_dist_[ck[a]][ck[b]] - inst_->cover_radii[ck[a]] -
                   inst_->cover_radii[ck[b]];
            if (witness) {
              witness->facility = j;
              witness->pieces = {
                  {{static_cast<std::int16_t>(ck[a]),
                    static_cast<std::int16_t>(ck[a]), false},
                   k},
                  {{static_cast<std::int16_t>(ck[b]),
                    static_cast<std::int16_t>(ck[b]), false},
                   k}};
            }
            return TriState::Empty;
          }
          regions.push_back({static_cast<std::int16_t>(ck[a]),
                             static_cast<std::int16_t>(ck[b]), true});
          owners.push_back(k);
        }
    }
    const int m = static_cast<int>(regions.size());
    auto fill_witness = [&](std::initializer_list<int> ids) {
      if (!witness) return;
      witness->facility = j;
      witness->pieces.clear();
      for (int id : ids) witness->pieces.push_back({regions[id], owners[id]});
    };
    bool facility_ambiguous = false;
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        double g = 0.0;
        const TriState s = mset_pair(regions[a], regions[b], &g);
        if (s == TriState::Empty) {
          *gap = g;
          fill_witness({a, b});
          return TriState::Empty;
        }
        if (s == TriState::Ambiguous) facility_ambiguous = true;
      }
    if (facility_ambiguous) {
      ambiguous = true;
      continue;  // triples cannot be trusted past unclear pairs
    }
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b)
        for (int c = b + 1; c < m; ++c) {
          double g = 0.0;
          const TriState s = mset_triple(regions[a], regions[b], regions[c], &g);
          if (s == TriState::Empty) {
            *gap = g;
            fill_witness({a, b, c});
            return TriState::Empty;
          }
          if (s == TriState::Ambiguous) ambiguous = true;
        }
  }
  return ambiguous ? TriState::Ambiguous : TriState::Nonempty;
}

std::vector<PointTupleRule> gen_int12(const Instance& inst) {
  std::vector<PointTupleRule> rules;
  const int n = inst.n();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!disk_pair_nonempty(inst.points[i], inst.cover_radii[i],
                              inst.points[j], inst.cover_radii[j])) {
        const double margin = (inst.points[i] - inst.points[j]).norm() -
                              inst.cover_radii[i] - inst.cover_radii[j];
        rules.push_back(make_rule(RuleKind::Int1, {i, j}, margin));
      }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!disk_pair_nonempty(inst.points[i], inst.cover_radii[i],
                              inst.points[j], inst.cover_radii[j]))
        continue;
      for (int k = j + 1; k < n; ++k) {
        if (!disk_pair_nonempty(inst.points[i], inst.cover_radii[i],
                                inst.points[k], inst.cover_radii[k]) ||
            !disk_pair_nonempty(inst.points[j], inst.cover_radii[j],
                                inst.points[k], inst.cover_radii[k]))
          continue;
        if (!disk_triple_nonempty(inst.cover_disk(i), inst.cover_disk(j),
                                  inst.cover_disk(k)))
          rules.push_back(make_rule(RuleKind::Int2, {i, j, k}, 0.0));
      }
    }
  return rules;
}

namespace detail {

// Structure-independent generation of the exact link families; the caller
// gates whole families by the structure's expansion capability.
std::vector<PointTupleRule> gen_exact_link_rules(const ProblemGeometry& geom,
                                                 const Capability& cap) {
  std::vector<PointTupleRule> rules;
  const Instance& inst = geom.instance();
  const int n = inst.n();
  const int m = geom.lens_count();
  const double r = inst.link_radius;
  if (!cap.edges || m == 0) return rules;

  // Int3: B_l ∩ O_q = ∅ with the O pair's lens nonempty.
  // certainly_empty[l][q] doubles as the Int3 hierarchy gate below.
  std::vector<std::vector<char>> bo_empty(n, std::vector<char>(m, 0));
  for (int q = 0; q < m; ++q) {
    const auto [u, v] = geom.lens_points(q);
    for (int l = 0; l < n; ++l) {
      if (l == u || l == v) continue;
      const double margin =
          geom.point_lens_distance(l, q) - inst.cover_radii[l] - r;
      if (margin > kEmitBand) {
        bo_empty[l][q] = 1;
        rules.push_back(make_rule(RuleKind::Int3, {l, u, v}, margin));
      }
    }
  }

  // Int4: lens_ab nonempty, both B ∩ O nonempty, but B_a ∩ B_b ∩ O_q = ∅,
  // i.e. d(lens_ab, lens_q) > r.
  for (int qa = 0; qa < m; ++qa) {
    const auto [a, b] = geom.lens_points(qa);
    for (int qo = 0; qo < m; ++qo) {
      if (qo == qa) continue;
      const auto [u, v] = geom.lens_points(qo);
      if (a == u || a == v || b == u || b == v) continue;
      if (bo_empty[a][qo] || bo_empty[b][qo]) continue;  // Int3 dominates
      const SetDistance d = geom.lens_lens_distance(qa, qo);
      if (d.upper <= r + kGeomTol) continue;  // nonempty
      if (d.lower > r + kEmitBand)
        rules.push_back(make_rule(RuleKind::Int4, {a, b, u, v}, d.lower - r));
    }
  }

  if (!cap.wedges) return rules;

  // Int5: O ∩ O = ∅, i.e. lens distance > 2r.
  std::vector<std::vector<char>> oo_empty(m, std::vector<char>(m, 0));
  for (int q1 = 0; q1 < m; ++q1) {
    const auto [a, b] = geom.lens_points(q1);
    for (int q2 = q1 + 1; q2 < m; ++q2) {
      const auto [u, v] = geom.lens_points(q2);
      if (a == u || a == v || b == u || b == v) continue;
      const SetDistance d = geom.lens_lens_distance(q1, q2);
      if (d.lower > 2 * r + kEmitBand) {
        oo_empty[q1][q2] = oo_empty[q2][q1] = 1;
        rules.push_back(
            make_rule(RuleKind::Int5, {a, b, u, v}, d.lower - 2 * r));
      }
    }
  }

  // Int6: B ∩ O ∩ O empty with all pairs nonempty.
  for (int l = 0; l < n; ++l)
    for (int q1 = 0; q1 < m; ++q1) {
      const auto [a, b] = geom.lens_points(q1);
      if (l == a || l == b || bo_empty[l][q1]) continue;
      for (int q2 = q1 + 1; q2 < m; ++q2) {
        const auto [u, v] = geom.lens_points(q2);
        if (l == u || l == v || a == u || a == v || b == u || b == v) continue;
        if (bo_empty[l][q2] || oo_empty[q1][q2]) continue;
        const std::vector<ConvexRegion> regs = {
            ConvexRegion::disk(inst.cover_disk(l)),
            ConvexRegion::enlarged(geom.lens(q1), r),
            ConvexRegion::enlarged(geom.lens(q2), r)};
        const Emptiness em = emptiness_margin(regs, {geom.delta(), 20000});
        if (em.verdict == Emptiness::Verdict::Empty)
          rules.push_back(
              make_rule(RuleKind::Int6, {l, a, b, u, v}, em.residual));
      }
    }

  if (!cap.claws) return rules;

  // Int7: O ∩ O ∩ O empty with all pairs nonempty.
  for (int q1 = 0; q1 < m; ++q1)
    for (int q2 = q1 + 1; q2 < m; ++q2) {
      if (oo_empty[q1][q2]) continue;
      const auto [a, b] = geom.lens_points(q1);
      const auto [u, v] = geom.lens_points(q2);
      if (a == u || a == v || b == u || b == v) continue;
      for (int q3 = q2 + 1; q3 < m; ++q3) {
        if (oo_empty[q1][q3] || oo_empty[q2][q3]) continue;
        const auto [s, w] = geom.lens_points(q3);
        if (s == a || s == b || s == u || s == v || w == a || w == b ||
            w == u || w == v)
          continue;
        const std::vector<ConvexRegion> regs = {
            ConvexRegion::enlarged(geom.lens(q1), r),
            ConvexRegion::enlarged(geom.lens(q2), r),
            ConvexRegion::enlarged(geom.lens(q3), r)};
        const Emptiness em = emptiness_margin(regs, {geom.delta(), 20000});
        if (em.verdict == Emptiness::Verdict::Empty)
          rules.push_back(
              make_rule(RuleKind::Int7, {a, b, u, v, s, w}, em.residual));
      }
    }

  return rules;
}

std::vector<PointTupleRule> gen_relaxed_rules(const Instance& inst,
                                              const Capability& cap) {
  std::vector<PointTupleRule> rules;
  const int n = inst.n();
  const double r = inst.link_radius;
  if (!cap.edges) return rules;

  auto pair_margin = [&](int i, double exti, int j, double extj) {
    return (inst.points[i] - inst.points[j]).norm() - inst.cover_radii[i] -
           exti - inst.cover_radii[j] - extj;
  };

  // Int3': B_i ∩ B_{j,+r} = ∅ (ordered: the plain disk first).
  std::vector<std::vector<char>> e3(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double margin = pair_margin(i, 0.0, j, r);
      if (margin > kEmitBand) {
        e3[i][j] = 1;
        rules.push_back(make_rule(RuleKind::Int3R, {i, j}, margin));
      }
    }

  // Int4': B_{i,+r} ∩ B_{j,+r} = ∅ (needs a wedge to expand).
  std::vector<std::vector<char>> e4(n, std::vector<char>(n, 0));
  if (cap.wedges)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double margin = pair_margin(i, r, j, r);
        if (margin > kEmitBand) {
          e4[i][j] = e4[j][i] = 1;
          rules.push_back(make_rule(RuleKind::Int4R, {i, j}, margin));
        }
      }

  auto enlarged_disk = [&](int i, double ext) {
    return Disk{inst.points[i], inst.cover_radii[i] + ext};
  };

  // Int5': B_a ∩ B_b ∩ B_{u,+r} = ∅, pair subtests nonempty.
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (!disk_pair_nonempty(inst.points[a], inst.cover_radii[a],
                              inst.points[b], inst.cover_radii[b]))
        continue;
      for (int u = 0; u < n; ++u) {
        if (u == a || u == b || e3[a][u] || e3[b][u]) continue;
        if (!disk_triple_nonempty(enlarged_disk(a, 0), enlarged_disk(b, 0),
                                  enlarged_disk(u, r)))
          rules.push_back(make_rule(RuleKind::Int5R, {a, b, u}, 0.0));
      }
    }

  // Int6': B_s ∩ B_{a,+r} ∩ B_{b,+r} = ∅, pair subtests nonempty.
  if (cap.wedges)
    for (int s = 0; s < n; ++s)
      for (int a = 0; a < n; ++a) {
        if (a == s || e3[s][a]) continue;
        for (int b = a + 1; b < n; ++b) {
          if (b == s || e3[s][b] || e4[a][b]) continue;
          if (!disk_triple_nonempty(enlarged_disk(s, 0), enlarged_disk(a, r),
                                    enlarged_disk(b, r)))
            rules.push_back(make_rule(RuleKind::Int6R, {s, a, b}, 0.0));
        }
      }

  // Int7': B_{a,+r} ∩ B_{b,+r} ∩ B_{c,+r} = ∅, pair subtests nonempty.
  if (cap.claws)
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        if (e4[a][b]) continue;
        for (int c = b + 1; c < n; ++c) {
          if (e4[a][c] || e4[b][c]) continue;
          if (!disk_triple_nonempty(enlarged_disk(a, r), enlarged_disk(b, r),
                                    enlarged_disk(c, r)))
            rules.push_back(make_rule(RuleKind::Int7R, {a, b, c}, 0.0));
        }
      }

  return rules;
}

}  // namespace detail

std::vector<PointTupleRule> gen_int37(const Instance& inst,
                                      const GraphStructure& structure) {
  ProblemGeometry geom(inst);
  return detail::gen_exact_link_rules(geom, detail::capability_of(structure));
}

std::vector<PointTupleRule> gen_relaxed(const Instance& inst,
                                        const GraphStructure& structure) {
  return detail::gen_relaxed_rules(inst, detail::capability_of(structure));
}

ConstraintStats constraint_stats(std::span<const PointTupleRule> rules,
                                 const GraphStructure& structure, int p) {
  (void)p;
  ConstraintStats stats;
  const long long E2 = 2ll * structure.edges.size();
  long long W2 = 0, W3 = 0;
  for (int j = 1; j <= structure.p; ++j) {
    const long long d = structure.degree(j);
    W2 += d * (d - 1);
    W3 += d * (d - 1) * (d - 2);
  }
  auto expansions = [&](RuleKind kind) -> long long {
    switch (kind) {
      case RuleKind::Int1:
      case RuleKind::Int2: return structure.p;
      case RuleKind::Int3:
      case RuleKind::Int4:
      case RuleKind::Int3R:
      case RuleKind::Int5R: return E2;
      case RuleKind::Int5:
      case RuleKind::Int6:
      case RuleKind::Int4R:
      case RuleKind::Int6R: return W2;
      case RuleKind::Int7:
      case RuleKind::Int7R: return W3;
      case RuleKind::LazyCut: return 1;
    }
    return 0;
  };
  long long oset = 0;
  for (const PointTupleRule& rule : rules) {
    stats.rule_counts[rule.kind] += 1;
    const long long e = expansions(rule.kind);
    stats.expanded_by_kind[rule.kind] += e;
    stats.expanded_total += e;
    if (rule.kind != RuleKind::Int1 && rule.kind != RuleKind::Int2 &&
        rule.kind != RuleKind::LazyCut)
      oset += e;
  }
  stats.o_share =
      stats.expanded_total ? double(oset) / double(stats.expanded_total) : 0.0;
  return stats;
}

std::string dump_rules(std::span<const PointTupleRule> rules) {
  std::string out;
  char buf[160];
  for (const PointTupleRule& r : rules) {
    std::string pts;
    for (int s = 0; s < r.arity; ++s)
      pts += (s ? "," : "") + std::to_string(r.idx[s] + 1);
    std::snprintf(buf, sizeof(buf), "%s %s %.12g\n",
                  std::string(rule_kind_name(r.kind)).c_str(), pts.c_str(),
                  r.premise_margin);
    out += buf;
  }
  return out;
}

}  // namespace covlink
