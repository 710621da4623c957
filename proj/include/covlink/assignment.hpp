#pragma once

#include <vector>

namespace covlink {

// Demand-to-facility allocation: choice[i] is the 1-based facility covering
// point i, or 0 when the point is unassigned. Each point has at most one
// facility by construction.
struct Assignment {
  std::vector<int> choice;

  explicit Assignment(int n = 0) : choice(n, 0) {}

  int n() const { return static_cast<int>(choice.size()); }

  std::vector<std::vector<int>> classes(int p) const {
    std::vector<std::vector<int>> c(p + 1);
    for (int i = 0; i < n(); ++i)
      if (choice[i] > 0) c[choice[i]].push_back(i);
    return c;
  }

  bool operator==(const Assignment&) const = default;
};

}  // namespace covlink
