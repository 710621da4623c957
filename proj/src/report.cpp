#include "covlink/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace covlink {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::uint64_t content_hash(std::string_view text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string result_to_json(const SolveResult& result, const Instance& inst,
                           const GraphStructure& structure) {
  std::string j = "{";
  j += "\"status\":\"" + std::string(status_name(result.status)) + "\",";
  j += "\"objective\":" + num(result.objective) + ",";
  j += "\"best_bound\":" + num(result.best_bound) + ",";
  j += "\"gap\":" + num(result.gap) + ",";

  j += "\"assignment\":[";
  for (int i = 0; i < inst.n(); ++i) {
    if (i) j += ",";
    const int f = i < result.assignment.n() ? result.assignment.choice[i] : 0;
    j += f > 0 ? std::to_string(f) : "null";
  }
  j += "],";

  const bool placed = result.status != SolveStatus::Infeasible &&
                      static_cast<int>(result.placement.coords.size()) >
                          structure.p;
  j += "\"placement\":[";
  if (placed)
    for (int f = 1; f <= structure.p; ++f) {
      if (f > 1) j += ",";
      j += "[" + num(result.placement.coords[f].x()) + "," +
           num(result.placement.coords[f].y()) + "]";
    }
  j += "],";
  j += "\"rho\":" + (placed ? num(result.placement.rho) : "null") + ",";

  j += "\"stats\":{";
  j += "\"nodes\":" + std::to_string(result.stats.nodes) + ",";
  j += "\"lazy_cuts\":" + std::to_string(result.stats.lazy_cuts) + ",";
  j += "\"separation_calls\":" + std::to_string(result.stats.separation_calls) +
       ",";
  j += "\"rules_by_kind\":{";
  bool first = true;
  for (const auto& [kind, count] : result.stats.rules_by_kind) {
    if (!first) j += ",";
    first = false;
    j += "\"" + std::string(rule_kind_name(kind)) + "\":" +
         std::to_string(count);
  }
  j += "},";
  j += "\"expanded_constraints\":" +
       std::to_string(result.stats.expanded_constraints) + ",";
  j += "\"o_share\":" + num(result.stats.o_share) + ",";
  j += "\"time_rules_s\":" + num(result.stats.time_rules_s) + ",";
  j += "\"time_search_s\":" + num(result.stats.time_search_s) + ",";
  j += "\"time_sep_s\":" + num(result.stats.time_sep_s);
  j += "}}";
  return j;
}

std::string solution_to_svg(const SolveResult& result, const Instance& inst,
                            const GraphStructure& structure) {
  double maxR = 0.0;
  for (double R : inst.cover_radii) maxR = std::max(maxR, R);
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto grow = [&](const Point& a) {
    xmin = std::min(xmin, a.x());
    xmax = std::max(xmax, a.x());
    ymin = std::min(ymin, a.y());
    ymax = std::max(ymax, a.y());
  };
  for (const Point& a : inst.points) grow(a);
  const bool placed = result.status != SolveStatus::Infeasible &&
                      static_cast<int>(result.placement.coords.size()) >
                          structure.p;
  if (placed)
    for (int f = 1; f <= structure.p; ++f) grow(result.placement.coords[f]);
  const double pad = maxR + 0.05 * std::max(1e-9, std::max(xmax - xmin, ymax - ymin)) + 0.02;
  xmin -= pad;
  xmax += pad;
  ymin -= pad;
  ymax += pad;

  const double W = 640.0;
  const double scale = W / (xmax - xmin);
  const double H = (ymax - ymin) * scale;
  auto X = [&](double x) { return (x - xmin) * scale; };
  auto Y = [&](double y) { return (ymax - y) * scale; };  // y grows upward

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed6(W) +
       "\" height=\"" + fixed6(H) + "\" viewBox=\"0 0 " + fixed6(W) + " " +
       fixed6(H) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const auto classes = result.assignment.classes(structure.p);
  if (placed) {
    for (int f = 1; f <= structure.p; ++f) {
      double R = 0.0;
      for (int i : classes[f]) R = std::max(R, inst.cover_radii[i]);
      if (classes[f].empty()) R = maxR;
      s += "<circle class=\"cov\" cx=\"" + fixed6(X(result.placement.coords[f].x())) +
           "\" cy=\"" + fixed6(Y(result.placement.coords[f].y())) + "\" r=\"" +
           fixed6(R * scale) +
           "\" fill=\"gray\" fill-opacity=\"0.2\" stroke=\"gray\"/>\n";
    }
    for (auto [j, k] : structure.edges) {
      s += "<line class=\"link\" x1=\"" + fixed6(X(result.placement.coords[j].x())) +
           "\" y1=\"" + fixed6(Y(result.placement.coords[j].y())) + "\" x2=\"" +
           fixed6(X(result.placement.coords[k].x())) + "\" y2=\"" +
           fixed6(Y(result.placement.coords[k].y())) +
           "\" stroke=\"black\" stroke-width=\"1.2\"/>\n";
    }
  }
  for (const Point& a : inst.points)
    s += "<circle class=\"demand\" cx=\"" + fixed6(X(a.x())) + "\" cy=\"" +
         fixed6(Y(a.y())) + "\" r=\"3\" fill=\"black\"/>\n";
  if (placed) {
    const double c = 6.0;
    for (int f = 1; f <= structure.p; ++f) {
      const double cx = X(result.placement.coords[f].x());
      const double cy = Y(result.placement.coords[f].y());
      s += "<path class=\"cross\" d=\"M " + fixed6(cx - c) + " " +
           fixed6(cy - c) + " L " + fixed6(cx + c) + " " + fixed6(cy + c) +
           " M " + fixed6(cx - c) + " " + fixed6(cy + c) + " L " +
           fixed6(cx + c) + " " + fixed6(cy - c) +
           "\" stroke=\"black\" stroke-width=\"1.5\" fill=\"none\"/>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

}  // namespace covlink
