#pragma once

#include <cstdint>
#include <vector>

namespace mms::detail {

// Branch-and-bound searches over vertex subsets represented as bitmasks.
// Sizes stay below 64 by the module budgets.

// Maximum total weight of a clique in the graph given by adjacency masks
// (adj[v] must not contain v). Vertices should be pre-sorted by descending
// weight for effective pruning.
inline double max_weight_clique(const std::vector<std::uint64_t>& adj,
                                const std::vector<double>& w) {
  const int n = static_cast<int>(w.size());
  if (n == 0) return 0.0;
  double best = 0.0;
  // suffix_sum[i] = total weight of vertices i..n-1
  std::vector<double> suffix(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = n - 1; i >= 0; --i)
    suffix[static_cast<std::size_t>(i)] = suffix[static_cast<std::size_t>(i) + 1] + w[static_cast<std::size_t>(i)];

  struct Frame {
    std::uint64_t avail;
    double acc;
    int from;
  };
  std::vector<Frame> stack;
  stack.push_back({~std::uint64_t{0} >> (64 - n), 0.0, 0});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.acc > best) best = f.acc;
    // weight of remaining available vertices bounds any extension
    double rem = 0.0;
    std::uint64_t m = f.avail;
    while (m) {
      int v = __builtin_ctzll(m);
      m &= m - 1;
      rem += w[static_cast<std::size_t>(v)];
    }
    if (f.acc + rem <= best) continue;
    if (!f.avail) continue;
    int v = __builtin_ctzll(f.avail);
    // branch: exclude v, then include v
    stack.push_back({f.avail & ~(std::uint64_t{1} << v), f.acc, f.from});
    stack.push_back({f.avail & adj[static_cast<std::size_t>(v)] &
                         ~(std::uint64_t{1} << v),
                     f.acc + w[static_cast<std::size_t>(v)], f.from});
  }
  return best;
}

// Maximum-weight independent set = clique in the complement.
inline double max_weight_independent_set(const std::vector<std::uint64_t>& adj,
                                         const std::vector<double>& w,
                                         std::uint64_t* out_set = nullptr) {
  const int n = static_cast<int>(w.size());
  std::uint64_t full = (n == 64) ? ~std::uint64_t{0}
                                 : ((std::uint64_t{1} << n) - 1);
  double best = -1.0;
  std::uint64_t best_set = 0;

  struct Frame {
    std::uint64_t avail;
    std::uint64_t chosen;
    double acc;
  };
  std::vector<Frame> stack;
  stack.push_back({full, 0, 0.0});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.acc > best) {
      best = f.acc;
      best_set = f.chosen;
    }
    double rem = 0.0;
    std::uint64_t m = f.avail;
    while (m) {
      int v = __builtin_ctzll(m);
      m &= m - 1;
      rem += w[static_cast<std::size_t>(v)];
    }
    if (f.acc + rem <= best) continue;
    if (!f.avail) continue;
    int v = __builtin_ctzll(f.avail);
    std::uint64_t bit = std::uint64_t{1} << v;
    stack.push_back({f.avail & ~bit, f.chosen, f.acc});
    stack.push_back({f.avail & ~bit & ~adj[static_cast<std::size_t>(v)],
                     f.chosen | bit, f.acc + w[static_cast<std::size_t>(v)]});
  }
  if (out_set) *out_set = best_set;
  return best;
}

}  // namespace mms::detail
