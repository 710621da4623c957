#include "covlink/symmetry.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

namespace covlink {

namespace {

bool is_automorphism(const GraphStructure& g, const std::vector<int>& perm) {
  for (auto [j, k] : g.edges)
    if (!g.adjacency[perm[j]][perm[k]]) return false;
  return true;  // edge counts equal, so preserving edges is enough
}

std::vector<std::vector<int>> brute_force_automorphisms(
    const GraphStructure& g) {
  std::vector<int> perm(g.p + 1);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  std::vector<int> labels(perm.begin() + 1, perm.end());
  do {
    for (int j = 1; j <= g.p; ++j) perm[j] = labels[j - 1];
    bool identity = true;
    for (int j = 1; j <= g.p; ++j) identity &= perm[j] == j;
    if (!identity && is_automorphism(g, perm)) out.push_back(perm);
  } while (std::next_permutation(labels.begin(), labels.end()));
  return out;
}

}  // namespace

std::vector<std::vector<int>> SymmetryBreaker::automorphisms(
    const GraphStructure& g) {
  static std::mutex mu;
  static std::map<std::pair<GraphKind, int>, std::vector<std::vector<int>>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(g.kind, g.p);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<std::vector<int>> perms;
  const int p = g.p;
  if (p <= 9) {
    perms = brute_force_automorphisms(g);
  } else {
    auto add = [&](const std::vector<int>& perm) {
      bool identity = true;
      for (int j = 1; j <= p; ++j) identity &= perm[j] == j;
      if (!identity && is_automorphism(g, perm) &&
          std::find(perms.begin(), perms.end(), perm) == perms.end())
        perms.push_back(perm);
    };
    std::vector<int> perm(p + 1);
    switch (g.kind) {
      case GraphKind::Line:
        for (int j = 1; j <= p; ++j) perm[j] = p + 1 - j;
        perm[0] = 0;
        add(perm);
        break;
      case GraphKind::Cycle:
        for (int s = 0; s < p; ++s) {
          for (int j = 1; j <= p; ++j) perm[j] = ((j - 1 + s) % p) + 1;
          add(perm);
          for (int j = 1; j <= p; ++j)
            perm[j] = ((s - (j - 1)) % p + p) % p + 1;
          add(perm);
        }
        break;
      case GraphKind::RingStar:
        perm[1] = 1;
        for (int j = 2; j <= p; ++j) perm[j] = p + 2 - j;
        perm[0] = 0;
        add(perm);
        break;
      default:
        break;  // Complete/Star/Matching use first-occurrence orderings
    }
  }
  cache.emplace(key, perms);
  return perms;
}

SymmetryBreaker::SymmetryBreaker(const GraphStructure& g, bool enabled)
    : p_(g.p) {
  Snap root;
  if (!enabled) {
    mode_ = Mode::None;
    stack_.push_back(root);
    return;
  }
  switch (g.kind) {
    case GraphKind::Complete: {
      mode_ = Mode::Groups;
      std::vector<int> all(p_);
      std::iota(all.begin(), all.end(), 1);
      groups_ = {all};
      break;
    }
    case GraphKind::Star: {
      mode_ = Mode::Groups;
      if (p_ >= 3) {
        std::vector<int> leaves(p_ - 1);
        std::iota(leaves.begin(), leaves.end(), 2);
        groups_ = {leaves};
      } else if (p_ == 2) {
        // A one-edge star is vertex transitive.
        groups_ = {{1, 2}};
      }
      break;
    }
    case GraphKind::Matching:
      mode_ = Mode::Matching;
      break;
    case GraphKind::Line:
    case GraphKind::Cycle:
    case GraphKind::RingStar:
      mode_ = Mode::PermLex;
      perms_ = automorphisms(g);
      if (perms_.empty ()) mode_ = Mode::None;
      break;
  }
  if (mode_ == Mode::Groups) {
    group_of_.assign(p_ + 1, -1);
    pos_in_group_.assign(p_ + 1, 0);
    for (size_t gi = 0; gi < groups_.size(); ++gi)
      for (size_t s = 0; s < groups_[gi].size(); ++s) {
        group_of_[groups_[gi][s]] = static_cast<int>(gi);
        pos_in_group_[groups_[gi][s]] = static_cast<int>(s);
      }
    root.prefix_len.assign(groups_.size(), 0);
  } else if (mode_ == Mode::Matching) {
    root.class_count.assign(p_ + 1, 0);
    root.used_blocks = 0;
  } else if (mode_ == Mode::PermLex) {
    root.perm_state.assign(perms_.size(), 0);
  }
  stack_.push_back(root);
}

bool SymmetryBreaker::allows(int f) const {
  if (f == 0 || mode_ == Mode::None) return true;
  const Snap& top = stack_.back();
  switch (mode_) {
    case Mode::Groups: {
      const int gi = group_of_[f];
      if (gi < 0) return true;
      return pos_in_group_[f] <= top.prefix_len[gi];
    }
    case Mode::Matching: {
      const int block = (f + 1) / 2;
      if (block > top.used_blocks + 1) return false;
      if (f % 2 == 0 && top.class_count[f - 1] == 0) return false;
      return true;
    }
    case Mode::PermLex: {
      for (size_t m = 0; m < perms_.size(); ++m)
        if (top.perm_state[m] == 0 && f > perms_[m][f]) return false;
      return true;
    }
    case Mode::None:
      return true;
  }
  return true;
}

void SymmetryBreaker::push(int f) {
  Snap next = stack_.back();
  if (f >= 1) {
    switch (mode_) {
      case Mode::Groups: {
        const int gi = group_of_[f];
        if (gi >= 0 && pos_in_group_[f] == next.prefix_len[gi])
          ++next.prefix_len[gi];
        break;
      }
      case Mode::Matching: {
        const int block = (f + 1) / 2;
        if (next.class_count[2 * block - 1] + next.class_count[2 * block] == 0)
          ++next.used_blocks;
        ++next.class_count[f];
        break;
      }
      case Mode::PermLex: {
        for (size_t m = 0; m < perms_.size(); ++m) {
          if (next.perm_state[m] != 0) continue;
          const int img = perms_[m][f];
          if (f < img) next.perm_state[m] = 1;  // lex-less established
        }
        break;
      }
      case Mode::None:
        break;
    }
  }
  stack_.push_back(std::move(next));
}

void SymmetryBreaker::pop() { stack_.pop_back(); }

}  // namespace covlink
