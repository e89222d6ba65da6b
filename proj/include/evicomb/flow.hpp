#pragma once

#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace evicomb {

/// Dinic maximum flow over an exact capacity type (integers or rationals).
template <typename Cap>
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t nodes) : graph_(nodes) {}

  /// Adds a directed edge and returns its handle for flow_on().
  std::size_t add_edge(std::size_t from, std::size_t to, Cap capacity) {
    graph_[from].push_back(edges_.size());
    edges_.push_back({to, capacity, Cap{}});
    graph_[to].push_back(edges_.size());
    edges_.push_back({from, Cap{}, Cap{}});
    return edges_.size() - 2;
  }

  Cap solve(std::size_t source, std::size_t sink) {
    Cap total{};
    while (build_levels(source, sink)) {
      next_.assign(graph_.size(), 0);
      while (true) {
        Cap pushed = augment(source, sink, Cap{}, true);
        if (pushed == Cap{}) break;
        total += pushed;
      }
    }
    return total;
  }

  const Cap& flow_on(std::size_t edge) const { return edges_[edge].flow; }

 private:
  struct Edge {
    std::size_t to;
    Cap capacity;
    Cap flow;
  };

  bool build_levels(std::size_t source, std::size_t sink) {
    level_.assign(graph_.size(), -1);
    std::queue<std::size_t> q;
    level_[source] = 0;
    q.push(source);
    while (!q.empty()) {
      std::size_t u = q.front();
      q.pop();
      for (std::size_t id : graph_[u]) {
        const Edge& e = edges_[id];
        if (level_[e.to] < 0 && e.flow < e.capacity) {
          level_[e.to] = level_[u] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  // `unbounded` stands in for an infinite limit at the source.
  Cap augment(std::size_t u, std::size_t sink, Cap limit, bool unbounded) {
    if (u == sink) return limit;
    for (std::size_t& i = next_[u]; i < graph_[u].size(); ++i) {
      std::size_t id = graph_[u][i];
      Edge& e = edges_[id];
      if (level_[e.to] != level_[u] + 1 || !(e.flow < e.capacity)) continue;
      Cap room = e.capacity - e.flow;
      Cap want = (unbounded || room < limit) ? room : limit;
      Cap got = augment(e.to, sink, want, false);
      if (got != Cap{}) {
        e.flow += got;
        edges_[id ^ 1].flow -= got;
        return got;
      }
    }
    return Cap{};
  }

  std::vector<std::vector<std::size_t>> graph_;
  std::vector<Edge> edges_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
};

}  // namespace evicomb
