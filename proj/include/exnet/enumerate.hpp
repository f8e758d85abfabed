#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "exnet/error.hpp"
#include "exnet/graph.hpp"
#include "exnet/session.hpp"

namespace exnet {

// Largest L for which L! fits the 64-bit counters.
inline constexpr std::size_t kMaxEnumerationLimit = 20;
inline constexpr std::size_t kDefaultEnumerationLimit = 12;

struct EnumerationOptions {
  std::size_t limit = kDefaultEnumerationLimit;
  // Abort with LimitExceeded once the memo table holds this many states.
  std::uint64_t max_states = 20'000'000;
};

struct EnumerationSummary {
  bool estimated = false;
  // Exact runs: L!. Sampled runs: the number of sampled orderings.
  std::uint64_t total_orderings = 0;
  std::uint64_t infeasible_count = 0;
  Rational infeasible_fraction{0};
  // Maximum over orderings of the summed unmet demand.
  Quantity max_total_unmet;
  // Maximum over orderings of the largest single buyer's unmet demand.
  Quantity max_buyer_unmet;
  std::uint64_t states_visited = 0;
};

namespace detail {

inline const std::array<std::uint64_t, kMaxEnumerationLimit + 1>& factorials() {
  static const auto table = [] {
    std::array<std::uint64_t, kMaxEnumerationLimit + 1> f{};
    f[0] = 1;
    for (std::size_t i = 1; i < f.size(); ++i) f[i] = f[i - 1] * i;
    return f;
  }();
  return table;
}

// Budgets multiplied by the lcm of all denominators, so every trade is integer
// subtraction. Actor a < buyers is a buyer, otherwise seller a - buyers.
struct ScaledInstance {
  std::size_t buyers = 0;
  std::vector<std::int64_t> initial;
  std::vector<std::pair<std::size_t, std::size_t>> links;
  BigInt scale{1};

  explicit ScaledInstance(const ExchangeGraph& g) : buyers(g.buyer_count()) {
    for (const auto& b : g.buyers()) scale = boost::multiprecision::lcm(scale, denominator_of(b.demand.value()));
    for (const auto& s : g.sellers()) scale = boost::multiprecision::lcm(scale, denominator_of(s.supply.value()));
    const BigInt cap(std::numeric_limits<std::int64_t>::max() / 4);
    auto convert = [&](const Rational& r) {
      BigInt v = numerator_of(r) * (scale / denominator_of(r));
      if (v > cap) throw LimitExceeded("budget magnitudes too large for the enumeration engine");
      return static_cast<std::int64_t>(v);
    };
    for (const auto& b : g.buyers()) initial.push_back(convert(b.demand.value()));
    for (const auto& s : g.sellers()) initial.push_back(convert(s.supply.value()));
    for (const auto& l : g.links()) links.emplace_back(l.buyer, buyers + l.seller);
  }

  Quantity to_quantity(std::int64_t v) const { return Quantity(Rational(BigInt(v), scale)); }

  bool live(const std::vector<std::int64_t>& st, std::size_t link) const {
    return st[links[link].first] > 0 && st[links[link].second] > 0;
  }

  void apply(std::vector<std::int64_t>& st, std::size_t link) const {
    auto& d = st[links[link].first];
    auto& s = st[links[link].second];
    std::int64_t m = std::min(d, s);
    d -= m;
    s -= m;
  }

  std::int64_t unmet(const std::vector<std::int64_t>& st) const {
    return std::accumulate(st.begin(), st.begin() + static_cast<std::ptrdiff_t>(buyers), std::int64_t{0});
  }
  std::int64_t max_single_unmet(const std::vector<std::int64_t>& st) const {
    if (buyers == 0) return 0;
    return *std::max_element(st.begin(), st.begin() + static_cast<std::ptrdiff_t>(buyers));
  }
  bool has_live(const std::vector<std::int64_t>& st) const {
    for (std::size_t i = 0; i < links.size(); ++i)
      if (live(st, i)) return true;
    return false;
  }
};

struct BudgetHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::int64_t x : v) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

inline void check_limit(const ExchangeGraph& g, const EnumerationOptions& opt) {
  if (opt.limit > kMaxEnumerationLimit)
    throw LimitExceeded("enumeration limit " + std::to_string(opt.limit) + " exceeds the supported maximum " +
                        std::to_string(kMaxEnumerationLimit));
  if (g.link_count() > opt.limit)
    throw LimitExceeded("graph has " + std::to_string(g.link_count()) + " links, above the enumeration limit " +
                        std::to_string(opt.limit) + "; use sample_sessions (--sample N) instead");
}

// Memoized count over orderings.
//
// Every processed link has a depleted endpoint afterwards, and a link with a
// depleted endpoint stays a no-op for the rest of the session. So the links
// that can still move goods are exactly the live links (both endpoints
// positive) of the current budgets, and the budget vector alone identifies the
// search state. Dead links interleave freely: with r unprocessed links of
// which a are live, each ordering of the live ones extends to r!/a! orderings.
class SessionCounter {
 public:
  struct Node {
    std::uint64_t infeasible = 0;  // over orderings of the live links only
    std::int64_t max_total = 0;
    std::int64_t max_single = 0;
    std::size_t live = 0;
  };

  SessionCounter(const ScaledInstance& inst, std::uint64_t max_states) : inst_(inst), max_states_(max_states) {}

  Node solve(const std::vector<std::int64_t>& st) {
    auto it = memo_.find(st);
    if (it != memo_.end()) return it->second;

    Node node;
    const auto& fact = factorials();
    std::vector<std::int64_t> child;
    for (std::size_t i = 0; i < inst_.links.size(); ++i) {
      if (!inst_.live(st, i)) continue;
      ++node.live;
    }
    if (node.live == 0) {
      node.max_total = inst_.unmet(st);
      node.max_single = inst_.max_single_unmet(st);
      node.infeasible = node.max_total > 0 ? 1 : 0;
    } else {
      for (std::size_t i = 0; i < inst_.links.size(); ++i) {
        if (!inst_.live(st, i)) continue;
        child = st;
        inst_.apply(child, i);
        Node c = solve(child);
        node.infeasible += fact[node.live - 1] / fact[c.live] * c.infeasible;
        node.max_total = std::max(node.max_total, c.max_total);
        node.max_single = std::max(node.max_single, c.max_single);
      }
    }
    if (memo_.size() >= max_states_)
      throw LimitExceeded("session enumeration exceeded the state budget of " + std::to_string(max_states_));
    memo_.emplace(st, node);
    return node;
  }

  std::uint64_t states() const { return memo_.size(); }

 private:
  const ScaledInstance& inst_;
  std::uint64_t max_states_;
  std::unordered_map<std::vector<std::int64_t>, Node, BudgetHash> memo_;
};

}  // namespace detail

// Exact counts over all L! orderings.
inline EnumerationSummary enumerate_sessions(const ExchangeGraph& g, const EnumerationOptions& opt = {}) {
  detail::check_limit(g, opt);
  detail::ScaledInstance inst(g);
  detail::SessionCounter counter(inst, opt.max_states);
  auto root = counter.solve(inst.initial);

  const auto& fact = detail::factorials();
  EnumerationSummary out;
  out.total_orderings = fact[g.link_count()];
  out.infeasible_count = fact[g.link_count()] / fact[root.live] * root.infeasible;
  out.infeasible_fraction = Rational(BigInt(out.infeasible_count), BigInt(out.total_orderings));
  out.max_total_unmet = inst.to_quantity(root.max_total);
  out.max_buyer_unmet = inst.to_quantity(root.max_single);
  out.states_visited = counter.states();
  return out;
}

// Some infeasible ordering, or nullopt when every ordering is feasible. Live
// links are tried in index order, so the answer is fixed for a given graph.
inline std::optional<Ordering> find_infeasible_witness(const ExchangeGraph& g, const EnumerationOptions& opt = {}) {
  detail::check_limit(g, opt);
  detail::ScaledInstance inst(g);
  std::unordered_set<std::vector<std::int64_t>, detail::BudgetHash> all_feasible;
  Ordering path;

  auto dfs = [&](auto&& self, const std::vector<std::int64_t>& st) -> bool {
    bool any_live = false;
    std::vector<std::int64_t> child;
    for (std::size_t i = 0; i < inst.links.size(); ++i) {
      if (!inst.live(st, i)) continue;
      any_live = true;
      child = st;
      inst.apply(child, i);
      if (all_feasible.contains(child)) continue;
      path.push_back(i);
      if (self(self, child)) return true;
      path.pop_back();
    }
    if (!any_live && inst.unmet(st) > 0) return true;
    if (all_feasible.size() >= opt.max_states)
      throw LimitExceeded("witness search exceeded the state budget of " + std::to_string(opt.max_states));
    all_feasible.insert(st);
    return false;
  };

  if (!dfs(dfs, inst.initial)) return std::nullopt;
  std::vector<bool> used(g.link_count(), false);
  for (LinkIndex i : path) used[i] = true;
  Ordering order = path;
  for (LinkIndex i = 0; i < g.link_count(); ++i)
    if (!used[i]) order.push_back(i);
  return order;
}

// Monte Carlo estimate from n uniformly random orderings. The fraction is an
// estimate and the maxima are lower bounds on the exact values.
inline EnumerationSummary sample_sessions(const ExchangeGraph& g, std::uint64_t n, std::uint64_t seed) {
  if (n < 1) throw ContractViolation("sample_sessions needs n >= 1");
  detail::ScaledInstance inst(g);
  std::mt19937_64 rng(seed);
  Ordering order(g.link_count());
  std::iota(order.begin(), order.end(), LinkIndex{0});
  std::vector<std::int64_t> st;

  EnumerationSummary out;
  out.estimated = true;
  out.total_orderings = n;
  std::int64_t max_total = 0, max_single = 0;
  for (std::uint64_t k = 0; k < n; ++k) {
    std::shuffle(order.begin(), order.end(), rng);
    st = inst.initial;
    for (LinkIndex i : order) inst.apply(st, i);
    std::int64_t u = inst.unmet(st);
    if (u > 0) ++out.infeasible_count;
    max_total = std::max(max_total, u);
    max_single = std::max(max_single, inst.max_single_unmet(st));
  }
  out.infeasible_fraction = Rational(BigInt(out.infeasible_count), BigInt(n));
  out.max_total_unmet = inst.to_quantity(max_total);
  out.max_buyer_unmet = inst.to_quantity(max_single);
  return out;
}

}  // namespace exnet
