#pragma once

#include <cstddef>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "exnet/error.hpp"
#include "exnet/rational.hpp"

namespace exnet::solver {

struct Arc {
  std::size_t from = 0;
  std::size_t to = 0;
  // nullopt means unbounded.
  std::optional<Rational> capacity;
};

class FlowNetwork {
 public:
  FlowNetwork(std::size_t nodes, std::size_t source, std::size_t sink) : nodes_(nodes), source_(source), sink_(sink) {
    if (source >= nodes || sink >= nodes || source == sink)
      throw ContractViolation("flow network needs distinct source and sink inside the node range");
  }

  std::size_t node_count() const { return nodes_; }
  std::size_t source() const { return source_; }
  std::size_t sink() const { return sink_; }
  const std::vector<Arc>& arcs() const { return arcs_; }

  std::size_t add_arc(std::size_t from, std::size_t to, std::optional<Rational> capacity) {
    if (from >= nodes_ || to >= nodes_) throw ContractViolation("arc endpoint out of range");
    if (to == source_) throw ContractViolation("arcs into the source are not allowed");
    if (from == sink_) throw ContractViolation("arcs out of the sink are not allowed");
    if (capacity && *capacity < 0) throw ContractViolation("arc capacity must be nonnegative");
    arcs_.push_back({from, to, std::move(capacity)});
    return arcs_.size() - 1;
  }

 private:
  std::size_t nodes_;
  std::size_t source_;
  std::size_t sink_;
  std::vector<Arc> arcs_;
};

struct FlowResult {
  Rational value{0};
  std::vector<Rational> arc_flow;
};

// Edmonds-Karp: always augment along a shortest residual path, which bounds the
// number of augmentations independently of the capacities.
inline FlowResult max_flow(const FlowNetwork& net) {
  struct Residual {
    std::size_t to;
    std::size_t rev;
    std::optional<Rational> cap;  // remaining, nullopt = unbounded
    std::ptrdiff_t arc;           // original arc for forward edges, -1 for reverse edges
  };
  std::vector<std::vector<Residual>> adj(net.node_count());
  std::vector<std::pair<std::size_t, std::size_t>> where(net.arcs().size());
  for (std::size_t k = 0; k < net.arcs().size(); ++k) {
    const Arc& a = net.arcs()[k];
    std::size_t fwd = adj[a.from].size();
    std::size_t rev = adj[a.to].size() + (a.from == a.to ? 1 : 0);
    adj[a.from].push_back({a.to, rev, a.capacity, static_cast<std::ptrdiff_t>(k)});
    adj[a.to].push_back({a.from, fwd, Rational(0), -1});
    where[k] = {a.from, fwd};
  }

  auto positive = [](const std::optional<Rational>& c) { return !c || *c > 0; };

  FlowResult result;
  result.arc_flow.assign(net.arcs().size(), Rational(0));
  for (;;) {
    std::vector<std::ptrdiff_t> via(net.node_count(), -1);
    std::vector<std::size_t> prev(net.node_count(), 0);
    std::vector<bool> seen(net.node_count(), false);
    std::queue<std::size_t> q;
    q.push(net.source());
    seen[net.source()] = true;
    while (!q.empty() && !seen[net.sink()]) {
      std::size_t u = q.front();
      q.pop();
      for (std::size_t e = 0; e < adj[u].size(); ++e) {
        const auto& r = adj[u][e];
        if (seen[r.to] || !positive(r.cap)) continue;
        seen[r.to] = true;
        prev[r.to] = u;
        via[r.to] = static_cast<std::ptrdiff_t>(e);
        q.push(r.to);
      }
    }
    if (!seen[net.sink()]) break;

    std::optional<Rational> bottleneck;
    for (std::size_t v = net.sink(); v != net.source(); v = prev[v]) {
      const auto& r = adj[prev[v]][static_cast<std::size_t>(via[v])];
      if (r.cap && (!bottleneck || *r.cap < *bottleneck)) bottleneck = r.cap;
    }
    if (!bottleneck) throw ContractViolation("unbounded flow: a source-sink path has no finite capacity");

    for (std::size_t v = net.sink(); v != net.source(); v = prev[v]) {
      auto& r = adj[prev[v]][static_cast<std::size_t>(via[v])];
      if (r.cap) *r.cap -= *bottleneck;
      auto& back = adj[v][r.rev];
      if (back.cap) *back.cap += *bottleneck;
    }
    result.value += *bottleneck;
  }

  for (std::size_t k = 0; k < net.arcs().size(); ++k) {
    const auto& [u, e] = where[k];
    const auto& fwd = adj[u][e];
    result.arc_flow[k] = *adj[fwd.to][fwd.rev].cap;
  }
  return result;
}

}  // namespace exnet::solver
