#pragma once

#include <cstdint>
#include <vector>

namespace mms::detail {

// Dinic max-flow on int64 capacities. Small graphs only (transportation
// subproblems with a few hundred nodes); exact integer arithmetic keeps
// coupling feasibility checks free of float degeneracy.
class Dinic {
 public:
  explicit Dinic(int n) : n_(n), head_(static_cast<std::size_t>(n), -1) {}

  void add_edge(int u, int v, std::int64_t cap) {
    edges_.push_back({v, head_[static_cast<std::size_t>(u)], cap});
    head_[static_cast<std::size_t>(u)] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({u, head_[static_cast<std::size_t>(v)], 0});
    head_[static_cast<std::size_t>(v)] = static_cast<int>(edges_.size()) - 1;
  }

  std::int64_t max_flow(int s, int t) {
    std::int64_t flow = 0;
    while (bfs(s, t)) {
      iter_ = head_;
      std::int64_t f;
      while ((f = dfs(s, t, kInfCap)) > 0) flow += f;
    }
    return flow;
  }

 private:
  static constexpr std::int64_t kInfCap = (std::int64_t{1} << 62);

  struct Edge {
    int to;
    int next;
    std::int64_t cap;
  };

  bool bfs(int s, int t) {
    level_.assign(static_cast<std::size_t>(n_), -1);
    queue_.clear();
    queue_.push_back(s);
    level_[static_cast<std::size_t>(s)] = 0;
    for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
      int u = queue_[qi];
      for (int e = head_[static_cast<std::size_t>(u)]; e != -1; e = edges_[static_cast<std::size_t>(e)].next) {
        const Edge& ed = edges_[static_cast<std::size_t>(e)];
        if (ed.cap > 0 && level_[static_cast<std::size_t>(ed.to)] < 0) {
          level_[static_cast<std::size_t>(ed.to)] = level_[static_cast<std::size_t>(u)] + 1;
          queue_.push_back(ed.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  std::int64_t dfs(int u, int t, std::int64_t limit) {
    if (u == t || limit == 0) return limit;
    for (int& e = iter_[static_cast<std::size_t>(u)]; e != -1;
         e = edges_[static_cast<std::size_t>(e)].next) {
      Edge& ed = edges_[static_cast<std::size_t>(e)];
      if (ed.cap > 0 && level_[static_cast<std::size_t>(ed.to)] ==
                            level_[static_cast<std::size_t>(u)] + 1) {
        std::int64_t f = dfs(ed.to, t, limit < ed.cap ? limit : ed.cap);
        if (f > 0) {
          ed.cap -= f;
          edges_[static_cast<std::size_t>(e ^ 1)].cap += f;
          return f;
        }
      }
    }
    return 0;
  }

  int n_;
  std::vector<int> head_;
  std::vector<Edge> edges_;
  std::vector<int> level_;
  std::vector<int> iter_;
  std::vector<int> queue_;

 public:
  // Flow currently assigned on the forward edge added k-th (0-based pair index).
  std::int64_t edge_flow(int k) const {
    return edges_[static_cast<std::size_t>(2 * k) ^ 1].cap;
  }
};

}  // namespace mms::detail
