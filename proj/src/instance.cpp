#include "covlink/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace covlink {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw std::invalid_argument("parse error at line " + std::to_string(line) +
                              ": " + what);
}

}  // namespace

double Instance::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

void Instance::validate() const {
  const size_t n = points.size();
  if (n == 0) throw std::invalid_argument("instance has no demand points");
  if (weights.size() != n) throw std::invalid_argument("weights length mismatch");
  if (cover_radii.size() != n)
    throw std::invalid_argument("cover radii length mismatch");
  for (double w : weights)
    if (!(w > 0) || !std::isfinite(w))
      throw std::invalid_argument("nonpositive weight");
  for (double R : cover_radii)
    if (R < 0 || !std::isfinite(R)) throw std::invalid_argument("negative radius");
  for (const Point& a : points)
    if (!a.allFinite()) throw std::invalid_argument("nonfinite coordinate");
  if (link_radius < 0 || !std::isfinite(link_radius))
    throw std::invalid_argument("negative link radius");
  if (p < 1) throw std::invalid_argument("facility count must be positive");
}

GraphKind parse_graph_kind(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), ::tolower);
  if (s == "complete") return GraphKind::Complete;
  if (s == "cycle") return GraphKind::Cycle;
  if (s == "line") return GraphKind::Line;
  if (s == "star") return GraphKind::Star;
  if (s == "ringstar" || s == "ring-star") return GraphKind::RingStar;
  if (s == "matching") return GraphKind::Matching;
  throw std::invalid_argument("unknown graph kind: " + s);
}

std::string_view graph_kind_name(GraphKind kind) {
  switch (kind) {
    case GraphKind::Complete: return "complete";
    case GraphKind::Cycle: return "cycle";
    case GraphKind::Line: return "line";
    case GraphKind::Star: return "star";
    case GraphKind::RingStar: return "ringstar";
    case GraphKind::Matching: return "matching";
  }
  return "?";
}

int GraphStructure::max_degree() const {
  int d = 0;
  for (int j = 1; j <= p; ++j) d = std::max(d, degree(j));
  return d;
}

GraphStructure build_edges(GraphKind kind, int p) {
  if (p < 1) throw std::invalid_argument("p must be positive");
  if (kind == GraphKind::Matching && p % 2 != 0)
    throw std::invalid_argument("matching requires even p");
  if (p == 1 && kind != GraphKind::Complete)
    throw std::invalid_argument("p=1 is only allowed for the complete graph");

  GraphStructure g;
  g.kind = kind;
  g.p = p;
  auto add = [&](int j, int k) {
    if (j > k) std::swap(j, k);
    if (j == k) return;
    if (std::find(g.edges.begin(), g.edges.end(), std::make_pair(j, k)) ==
        g.edges.end())
      g.edges.emplace_back(j, k);
  };
  switch (kind) {
    case GraphKind::Complete:
      for (int j = 1; j <= p; ++j)
        for (int k = j + 1; k <= p; ++k) add(j, k);
      break;
    case GraphKind::Cycle:
      for (int j = 1; j < p; ++j) add(j, j + 1);
      add(1, p);
      break;
    case GraphKind::Line:
      for (int j = 1; j < p; ++j) add(j, j + 1);
      break;
    case GraphKind::Star:
      for (int k = 2; k <= p; ++k) add(1, k);
      break;
    case GraphKind::RingStar:
      for (int k = 2; k <= p; ++k) add(1, k);
      for (int j = 2; j < p; ++j) add(j, j + 1);
      break;
    case GraphKind::Matching:
      for (int j = 1; j <= p; j += 2) add(j, j + 1);
      break;
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.neighborhoods.assign(p + 1, {});
  g.adjacency.assign(p + 1, std::vector<char>(p + 1, 0));
  for (auto [j, k] : g.edges) {
    g.neighborhoods[j].push_back(k);
    g.neighborhoods[k].push_back(j);
    g.adjacency[j][k] = g.adjacency[k][j] = 1;
  }
  for (auto& nb : g.neighborhoods) std::sort(nb.begin(), nb.end());
  return g;
}

namespace {

Instance parse_instance_json(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Instance inst;
  for (const auto& pt : j.at("points"))
    inst.points.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
  inst.weights = j.at("weights").get<std::vector<double>>();
  inst.cover_radii = j.at("cover_radii").get<std::vector<double>>();
  inst.link_radius = j.at("link_radius").get<double>();
  inst.p = j.at("p").get<int>();
  inst.validate();
  return inst;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  // JSON form is detected by a leading '{'.
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '{') return parse_instance_json(text);
    break;
  }

  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  // Logical lines with their numbers, comments and blanks skipped.
  std::vector<std::pair<int, std::string>> lines;
  while (std::getline(in, raw)) {
    ++lineno;
    size_t b = raw.find_first_not_of(" \t\r");
    if (b == std::string::npos || raw[b] == '#') continue;
    lines.emplace_back(lineno, raw);
  }
  if (lines.empty()) throw std::invalid_argument("empty instance file");

  auto parse_doubles = [](const std::pair<int, std::string>& ln, size_t count,
                          const char* what) {
    std::istringstream ls(ln.second);
    std::vector<double> vals;
    double v;
    while (ls >> v) vals.push_back(v);
    if (!ls.eof()) parse_fail(ln.first, std::string("non-numeric token in ") + what);
    if (count != 0 && vals.size() != count)
      parse_fail(ln.first, std::string(what) + " length mismatch");
    return vals;
  };

  const auto head = parse_doubles(lines[0], 3, "header (n p r)");
  const int n = static_cast<int>(head[0]);
  const int p = static_cast<int>(head[1]);
  const double r = head[2];
  if (n < 1 || head[0] != n) parse_fail(lines[0].first, "bad n");
  if (p < 1 || head[1] != p) parse_fail(lines[0].first, "bad p");
  if (static_cast<int>(lines.size()) != 3 + n)
    throw std::invalid_argument("expected " + std::to_string(3 + n) +
                                " data lines, got " +
                                std::to_string(lines.size()));

  Instance inst;
  inst.p = p;
  inst.link_radius = r;
  inst.cover_radii = parse_doubles(lines[1], n, "radii");
  inst.weights = parse_doubles(lines[2], n, "weights");
  for (int i = 0; i < n; ++i) {
    const auto xy = parse_doubles(lines[3 + i], 2, "point");
    inst.points.emplace_back(xy[0], xy[1]);
  }
  for (int i = 0; i < n; ++i) {
    if (inst.cover_radii[i] < 0) parse_fail(lines[1].first, "negative radius");
    if (!(inst.weights[i] > 0)) parse_fail(lines[2].first, "nonpositive weight");
  }
  if (r < 0) parse_fail(lines[0].first, "negative link radius");
  inst.validate();
  return inst;
}

std::string serialize_instance(const Instance& inst) {
  std::string out = std::to_string(inst.n()) + " " + std::to_string(inst.p) +
                    " " + fmt(inst.link_radius) + "\n";
  for (int i = 0; i < inst.n(); ++i)
    out += (i ? " " : "") + fmt(inst.cover_radii[i]);
  out += "\n";
  for (int i = 0; i < inst.n(); ++i) out += (i ? " " : "") + fmt(inst.weights[i]);
  out += "\n";
  for (const Point& a : inst.points)
    out += fmt(a.x()) + " " + fmt(a.y()) + "\n";
  return out;
}

Instance builtin_example(std::string_view name) {
  Instance inst;
  if (name == "example1") {
    const double pts[15][2] = {
        {0.34, 0.59}, {0.13, 0.9},  {0.67, 0.53}, {0.41, 0.03}, {0.36, 0.2},
        {0.09, 0.1},  {0.29, 1.0},  {0.68, 0.56}, {0.08, 0.5},  {0.86, 0.71},
        {0.66, 0.63}, {0.87, 0.05}, {0.22, 0.44}, {0.22, 0.11}, {0.11, 0.53}};
    for (const auto& xy : pts) inst.points.emplace_back(xy[0], xy[1]);
    inst.weights.assign(15, 1.0);
    inst.cover_radii.assign(15, 0.1);
    inst.link_radius = 0.3;
    inst.p = 6;
  } else if (name == "example2") {
    const double xs[5] = {0.0, 1.0, 3.25, 5.0, 6.0};
    for (double x : xs) inst.points.emplace_back(x, 0.0);
    inst.weights.assign(5, 1.0);
    inst.cover_radii.assign(5, 0.5);
    inst.link_radius = 2.5;
    inst.p = 3;
  } else {
    throw std::invalid_argument("unknown builtin example: " + std::string(name));
  }
  return inst;
}

Instance gen_random(std::uint64_t seed, int n, WeightMode mode, double R,
                    double r, int p) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  std::mt19937_64 rng(seed);
  // Explicit 53-bit mapping; uniform_real_distribution is not portable.
  auto u01 = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
  Instance inst;
  inst.p = p;
  inst.link_radius = r;
  inst.cover_radii.assign(n, R);
  for (int i = 0; i < n; ++i) {
    const double x = u01();
    const double y = u01();
    inst.points.emplace_back(x, y);
  }
  inst.weights.assign(n, 1.0);
  if (mode == WeightMode::Uniform)
    for (int i = 0; i < n; ++i) inst.weights[i] = 1.0 - u01();  // (0, 1]
  inst.validate();
  return inst;
}

CipSet compute_cip(const Instance& inst) {
  CipSet cip;
  auto add = [&](const Point& c) {
    for (const Point& q : cip.candidates)
      if ((q - c).norm() < 1e-9) return;  // merge near-duplicates
    cip.candidates.push_back(c);
  };
  for (const Point& a : inst.points) add(a);
  for (int i = 0; i < inst.n(); ++i)
    for (int j = i + 1; j < inst.n(); ++j) {
      const Disk di = inst.cover_disk(i);
      const Disk dj = inst.cover_disk(j);
      if ((di.center - dj.center).norm() <= kGeomTol &&
          std::abs(di.radius - dj.radius) <= kGeomTol)
        continue;  // coincident coverage circles contribute no new vertices
      for (const Point& q : circle_circle_intersections(di, dj)) add(q);
    }
  cip.coverage.resize(cip.candidates.size());
  for (size_t c = 0; c < cip.candidates.size(); ++c)
    for (int i = 0; i < inst.n(); ++i)
      if ((cip.candidates[c] - inst.points[i]).norm() <=
          inst.cover_radii[i] + kGeomTol)
        cip.coverage[c].push_back(i);
  return cip;
}

namespace {

// Max-coverage branch and bound over CIP candidates (exact).
struct CipSearch {
  const Instance& inst;
  const CipSet& cip;
  int p;
  std::vector<std::uint64_t> cover_mask;  // per candidate, n <= 64 fast path
  std::vector<std::vector<char>> cover_big;
  bool big = false;
  double best = -1.0;
  std::vector<int> best_set, cur;

  explicit CipSearch(const Instance& in, const CipSet& c)
      : inst(in), cip(c), p(std::min<int>(in.p, c.candidates.size())) {
    const int K = static_cast<int>(cip.candidates.size());
    big = inst.n() > 64;
    if (!big) {
      cover_mask.assign(K, 0);
      for (int c2 = 0; c2 < K; ++c2)
        for (int i : cip.coverage[c2]) cover_mask[c2] |= 1ull << i;
    } else {
      cover_big.assign(K, std::vector<char>(inst.n(), 0));
      for (int c2 = 0; c2 < K; ++c2)
        for (int i : cip.coverage[c2]) cover_big[c2][i] = 1;
    }
  }

  double weight_of(std::uint64_t mask) const {
    double w = 0.0;
    while (mask) {
      const int i = std::countr_zero(mask);
      w += inst.weights[i];
      mask &= mask - 1;
    }
    return w;
  }

  // order: candidates sorted by descending total coverage weight.
  std::vector<int> order;

  void run() {
    const int K = static_cast<int>(cip.candidates.size());
    order.resize(K);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> w(K);
    for (int c = 0; c < K; ++c) {
      double s = 0;
      for (int i : cip.coverage[c]) s += inst.weights[i];
      w[c] = s;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return w[a] > w[b]; });
    if (!big)
      dfs_fast(0, 0ull, 0);
    else
      dfs_big(0, std::vector<char>(inst.n(), 0), 0.0, 0);
  }

  void dfs_fast(size_t oi, std::uint64_t covered, int taken) {
    const double cur_w = weight_of(covered);
    if (taken == p || oi == order.size()) {
      if (cur_w > best) {
        best = cur_w;
        best_set = cur;
      }
      return;
    }
    // Bound: current plus the best p-taken remaining marginal gains.
    std::vector<double> gains;
    for (size_t k = oi; k < order.size(); ++k) {
      const std::uint64_t g = cover_mask[order[k]] & ~covered;
      if (g) gains.push_back(weight_of(g));
    }
    std::sort(gains.rbegin(), gains.rend());
    double bound = cur_w;
    for (int k = 0; k < p - taken && k < static_cast<int>(gains.size()); ++k)
      bound += gains[k];
    if (bound <= best) return;

    cur.push_back(order[oi]);
    dfs_fast(oi + 1, covered | cover_mask[order[oi]], taken + 1);
    cur.pop_back();
    dfs_fast(oi + 1, covered, taken);
  }

  void dfs_big(size_t oi, std::vector<char> covered, double cur_w, int taken) {
    if (taken == p || oi == order.size()) {
      if (cur_w > best) {
        best = cur_w;
        best_set = cur;
      }
      return;
    }
    std::vector<double> gains;
    for (size_t k = oi; k < order.size(); ++k) {
      double g = 0;
      for (int i : cip.coverage[order[k]])
        if (!covered[i]) g += inst.weights[i];
      if (g > 0) gains.push_back(g);
    }
    std::sort(gains.rbegin(), gains.rend());
    double bound = cur_w;
    for (int k = 0; k < p - taken && k < static_cast<int>(gains.size()); ++k)
      bound += gains[k];
    if (bound <= best) return;

    auto cov2 = covered;
    double w2 = cur_w;
    for (int i : cip.coverage[order[oi]])
      if (!cov2[i]) {
        cov2[i] = 1;
        w2 += inst.weights[i];
      }
    cur.push_back(order[oi]);
    dfs_big(oi + 1, std::move(cov2), w2, taken + 1);
    cur.pop_back();
    dfs_big(oi + 1, std::move(covered), cur_w, taken);
  }
};

}  // namespace

CipSolve solve_mclp_cip(const Instance& inst) {
  const CipSet cip = compute_cip(inst);
  CipSearch search(inst, cip);
  search.run();
  CipSolve out;
  out.objective = std::max(0.0, search.best);
  out.chosen = search.best_set;
  std::sort(out.chosen.begin(), out.chosen.end());
  return out;
}

}  // namespace covlink
