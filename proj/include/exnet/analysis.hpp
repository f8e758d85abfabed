#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exnet/enumerate.hpp"
#include "exnet/error.hpp"
#include "exnet/graph.hpp"
#include "exnet/solver/lp.hpp"
#include "exnet/solver/max_flow.hpp"

namespace exnet {

// ---------------------------------------------------------------------------
// Success

enum class FailureReason { NotCompleteBipartite, Unbalanced };

inline const char* to_string(FailureReason r) {
  return r == FailureReason::NotCompleteBipartite ? "not-complete-bipartite" : "unbalanced";
}

struct ComponentFailure {
  Component component;
  FailureReason reason;
};

struct SuccessReport {
  bool successful = true;
  // A component failing both tests appears twice, once per reason.
  std::vector<ComponentFailure> failing_components;
};

// Structural test: every component balanced and complete bipartite. Linear in
// actors plus links.
inline SuccessReport check_success(const ExchangeGraph& g) {
  SuccessReport report;
  for (auto& c : components(g)) {
    bool complete = is_complete_bipartite(c, g);
    bool balanced = is_balanced(c, g);
    if (!complete) report.failing_components.push_back({c, FailureReason::NotCompleteBipartite});
    if (!balanced) report.failing_components.push_back({c, FailureReason::Unbalanced});
  }
  report.successful = report.failing_components.empty();
  return report;
}

// Answer to "is every ordering feasible?" for arbitrary budgets.
struct SuccessVerdict {
  bool successful = true;
  // "topological" when the structural test decided every component,
  // "enumeration" when some surplus component had to be searched.
  std::string method = "topological";
  SuccessReport structure;
};

// Actors with a zero budget never trade, so they are dropped first. Components
// are independent, so the graph is successful iff each remaining component is.
// Per component: demand above supply can never be met; balanced components
// follow the structural test; a complete bipartite component with surplus
// always clears its buyers; any other surplus component is searched exactly.
inline SuccessVerdict decide_success(const ExchangeGraph& g, const EnumerationOptions& opt = {}) {
  SuccessVerdict v;
  v.structure = check_success(g);
  std::vector<std::size_t> active_buyers, active_sellers;
  for (std::size_t i = 0; i < g.buyer_count(); ++i)
    if (g.buyers()[i].demand.is_positive()) active_buyers.push_back(i);
  for (std::size_t j = 0; j < g.seller_count(); ++j)
    if (g.sellers()[j].supply.is_positive()) active_sellers.push_back(j);
  const ExchangeGraph active = g.restricted(active_buyers, active_sellers);

  for (const auto& c : components(active)) {
    Quantity demand = component_demand(c, active);
    Quantity supply = component_supply(c, active);
    bool complete = is_complete_bipartite(c, active);
    bool ok;
    if (demand > supply) {
      ok = false;
    } else if (demand == supply || complete) {
      ok = complete;
    } else {
      v.method = "enumeration";
      ok = !find_infeasible_witness(active.restricted(c.buyers, c.sellers), opt).has_value();
    }
    if (!ok) v.successful = false;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Allocations

struct Allocation {
  // N_b x N_s, zero off the link set.
  std::vector<std::vector<Quantity>> transactions;
  std::vector<Quantity> unmet;
};

enum class AllocationKind {
  // Every demand is met exactly.
  Feasible,
  // Partial allocation where any buyer left short sees only depleted sellers.
  Stalled,
};

// Exact re-substitution into the constraint system. Returns the violated
// constraints; empty means the allocation is valid.
inline std::vector<std::string> verify_allocation(const ExchangeGraph& g, const Allocation& a, AllocationKind kind) {
  std::vector<std::string> bad;
  const std::size_t nb = g.buyer_count(), ns = g.seller_count();
  if (a.transactions.size() != nb || a.unmet.size() != nb) {
    bad.push_back("allocation dimensions do not match the graph");
    return bad;
  }
  std::vector<Quantity> col(ns);
  for (std::size_t i = 0; i < nb; ++i) {
    if (a.transactions[i].size() != ns) {
      bad.push_back("row " + std::to_string(i) + " has the wrong width");
      return bad;
    }
    const Quantity& d = g.buyers()[i].demand;
    Quantity row;
    for (std::size_t j = 0; j < ns; ++j) {
      const Quantity& t = a.transactions[i][j];
      const Quantity& s = g.sellers()[j].supply;
      bool linked = g.has_link(i, j);
      if (!linked && t.is_positive()) bad.push_back("t[" + std::to_string(i) + "][" + std::to_string(j) + "] on a missing link");
      if (t > d) bad.push_back("t[" + std::to_string(i) + "][" + std::to_string(j) + "] exceeds D");
      if (t > s) bad.push_back("t[" + std::to_string(i) + "][" + std::to_string(j) + "] exceeds S");
      row += t;
      col[j] += t;
    }
    if (kind == AllocationKind::Feasible ? row != d : row > d)
      bad.push_back("row sum of buyer " + std::to_string(i) + " violates its demand");
    if (row <= d && a.unmet[i] != monus(d, row)) bad.push_back("u[" + std::to_string(i) + "] != D - sum_j t");
  }
  for (std::size_t j = 0; j < ns; ++j)
    if (col[j] > g.sellers()[j].supply) bad.push_back("column sum of seller " + std::to_string(j) + " exceeds its supply");
  if (kind == AllocationKind::Stalled && bad.empty()) {
    for (std::size_t i = 0; i < nb; ++i) {
      if (!a.unmet[i].is_positive()) continue;
      Rational stranded{0};
      for (LinkIndex li : g.links_of_buyer(i)) {
        std::size_t j = g.link(li).seller;
        stranded += g.sellers()[j].supply.value() - col[j].value();
      }
      if (stranded * a.unmet[i].value() != 0)
        bad.push_back("buyer " + std::to_string(i) + " is short while a neighbouring seller has supply");
    }
  }
  return bad;
}

// The feasibility constraint system over dense variables t_ij (index
// i * N_s + j), including the per-link caps t_ij <= D_i l_ij and t_ij <= l_ij S_j.
inline solver::LinearProgram feasibility_program(const ExchangeGraph& g) {
  using solver::Relation;
  const std::size_t nb = g.buyer_count(), ns = g.seller_count();
  solver::LinearProgram lp(nb * ns);
  auto var = [ns](std::size_t i, std::size_t j) { return i * ns + j; };
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t j = 0; j < ns; ++j) {
      Rational l = g.has_link(i, j) ? 1 : 0;
      lp.add_sparse_constraint({{var(i, j), Rational(1)}}, Relation::LessEqual, g.buyers()[i].demand.value() * l);
      lp.add_sparse_constraint({{var(i, j), Rational(1)}}, Relation::LessEqual, l * g.sellers()[j].supply.value());
    }
  }
  for (std::size_t i = 0; i < nb; ++i) {
    std::vector<std::pair<std::size_t, Rational>> terms;
    for (std::size_t j = 0; j < ns; ++j) terms.emplace_back(var(i, j), Rational(1));
    lp.add_sparse_constraint(terms, Relation::Equal, g.buyers()[i].demand.value());
  }
  for (std::size_t j = 0; j < ns; ++j) {
    std::vector<std::pair<std::size_t, Rational>> terms;
    for (std::size_t i = 0; i < nb; ++i) terms.emplace_back(var(i, j), Rational(1));
    lp.add_sparse_constraint(terms, Relation::LessEqual, g.sellers()[j].supply.value());
  }
  return lp;
}

inline Allocation allocation_from_dense(const ExchangeGraph& g, const std::vector<Rational>& t) {
  const std::size_t nb = g.buyer_count(), ns = g.seller_count();
  Allocation a;
  a.transactions.assign(nb, std::vector<Quantity>(ns));
  a.unmet.resize(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    Quantity row;
    for (std::size_t j = 0; j < ns; ++j) {
      a.transactions[i][j] = Quantity(t.at(i * ns + j));
      row += a.transactions[i][j];
    }
    a.unmet[i] = monus(g.buyers()[i].demand, row);
  }
  return a;
}

inline Allocation allocation_from_links(const ExchangeGraph& g, const std::vector<Rational>& per_link) {
  std::vector<Rational> dense(g.buyer_count() * g.seller_count());
  for (LinkIndex k = 0; k < g.link_count(); ++k)
    dense[g.link(k).buyer * g.seller_count() + g.link(k).seller] = per_link.at(k);
  return allocation_from_dense(g, dense);
}

// Every demand met by some allocation over the links? Decided by max flow:
// source -> buyer (D_i), buyer -> seller per link (unbounded), seller -> sink (S_j).
inline std::optional<Allocation> feasibility(const ExchangeGraph& g) {
  const std::size_t nb = g.buyer_count(), ns = g.seller_count();
  const std::size_t source = nb + ns, sink = nb + ns + 1;
  solver::FlowNetwork net(nb + ns + 2, source, sink);
  for (std::size_t i = 0; i < nb; ++i) net.add_arc(source, i, g.buyers()[i].demand.value());
  std::vector<std::size_t> link_arc;
  for (const auto& l : g.links()) link_arc.push_back(net.add_arc(l.buyer, nb + l.seller, std::nullopt));
  for (std::size_t j = 0; j < ns; ++j) net.add_arc(nb + j, sink, g.sellers()[j].supply.value());

  auto flow = solver::max_flow(net);
  if (flow.value != g.total_demand().value()) return std::nullopt;
  std::vector<Rational> per_link;
  for (std::size_t k : link_arc) per_link.push_back(flow.arc_flow[k]);
  return allocation_from_links(g, per_link);
}

// ---------------------------------------------------------------------------
// Maximum unmet demand

inline constexpr std::size_t kDefaultMaxUnmetBuyerLimit = 20;

struct MaxUnmetOptions {
  std::size_t buyer_limit = kDefaultMaxUnmetBuyerLimit;
};

struct MaxUnmetResult {
  Quantity value;
  Allocation witness;
  // Saturation pattern of the optimum: true where the buyer may be left short.
  std::vector<bool> pattern;
  std::uint64_t programs_solved = 0;
};

// The linear program for one saturation pattern, over one variable per link.
// Buyers with pattern[i] = false are fully served; every seller next to a
// buyer with pattern[i] = true is drained. The objective is the negated trade
// of the short buyers, so the unmet total is sum_{pattern} D_i + optimum.
inline solver::LinearProgram saturation_program(const ExchangeGraph& g, const std::vector<bool>& pattern) {
  using solver::Relation;
  solver::LinearProgram lp(g.link_count());
  std::vector<bool> drained(g.seller_count(), false);
  for (std::size_t i = 0; i < g.buyer_count(); ++i) {
    std::vector<std::pair<std::size_t, Rational>> terms;
    for (LinkIndex k : g.links_of_buyer(i)) {
      terms.emplace_back(k, Rational(1));
      if (pattern[i]) {
        lp.set_objective(k, Rational(-1));
        drained[g.link(k).seller] = true;
      }
    }
    lp.add_sparse_constraint(terms, pattern[i] ? Relation::LessEqual : Relation::Equal, g.buyers()[i].demand.value());
  }
  for (std::size_t j = 0; j < g.seller_count(); ++j) {
    std::vector<std::pair<std::size_t, Rational>> terms;
    for (LinkIndex k : g.links_of_seller(j)) terms.emplace_back(k, Rational(1));
    lp.add_sparse_constraint(terms, drained[j] ? Relation::Equal : Relation::LessEqual, g.sellers()[j].supply.value());
  }
  return lp;
}

// Exact optimum of: maximize sum u_i over allocations where every buyer with
// u_i > 0 has only depleted neighbours. The complementarity condition is
// split into 2^{N_b} saturation patterns, each an exact LP. Patterns are
// visited in lexicographic order and only strict improvements are kept, so
// ties go to the lexicographically smallest pattern.
inline MaxUnmetResult max_unmet_demand(const ExchangeGraph& g, const MaxUnmetOptions& opt = {}) {
  const std::size_t nb = g.buyer_count();
  if (nb > opt.buyer_limit)
    throw LimitExceeded("graph has " + std::to_string(nb) + " buyers, above the max-unmet limit " +
                        std::to_string(opt.buyer_limit));
  if (nb > 62) throw LimitExceeded("too many buyers for pattern enumeration");

  // A buyer with no demand is never short; one with demand and no links is
  // always short and its drained-neighbour condition is vacuous.
  std::vector<bool> pattern(nb, false);
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < nb; ++i) {
    const auto& b = g.buyers()[i];
    if (b.demand.is_zero()) continue;
    if (g.links_of_buyer(i).empty()) {
      pattern[i] = true;
      continue;
    }
    free.push_back(i);
  }

  MaxUnmetResult best;
  bool found = false;
  const std::uint64_t count = std::uint64_t{1} << free.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    Rational bound{0};
    for (std::size_t f = 0; f < free.size(); ++f)
      pattern[free[f]] = (mask >> (free.size() - 1 - f)) & 1u;
    for (std::size_t i = 0; i < nb; ++i)
      if (pattern[i]) bound += g.buyers()[i].demand.value();
    if (found && bound <= best.value.value()) continue;

    auto lp = saturation_program(g, pattern);
    auto res = solver::solve_lp(lp);
    ++best.programs_solved;
    if (res.status == solver::LpStatus::Unbounded)
      throw ModelViolation("saturation program reported unbounded; the feasible region is bounded");
    if (res.status != solver::LpStatus::Optimal) continue;
    Rational value = bound + res.value;
    if (!found || value > best.value.value()) {
      found = true;
      best.value = Quantity(value);
      best.witness = allocation_from_links(g, res.point);
      best.pattern = pattern;
    }
  }
  if (!found)
    throw ModelViolation("no saturation pattern is feasible; a maximal-trade session should always provide one");
  return best;
}

// ---------------------------------------------------------------------------
// Reserve lower-bound instances

// n_b buyers of demand d, each b_i linked to its own seller s_i, plus links
// from s_1 to every other buyer. Sellers s_2..s_n hold d; s_1 holds s1_supply.
inline ExchangeGraph star_instance(std::size_t n_b, const Quantity& d, const Quantity& s1_supply) {
  if (n_b < 2) throw ContractViolation("star instance needs at least 2 buyers");
  if (!d.is_positive()) throw ContractViolation("star instance needs positive demand");
  std::vector<Buyer> buyers;
  std::vector<Seller> sellers;
  std::vector<Link> links;
  for (std::size_t i = 0; i < n_b; ++i) {
    buyers.push_back({"b" + std::to_string(i + 1), d});
    sellers.push_back({"s" + std::to_string(i + 1), i == 0 ? s1_supply : d});
    links.push_back({i, i});
  }
  for (std::size_t i = 1; i < n_b; ++i) links.push_back({i, 0});
  return ExchangeGraph(std::move(buyers), std::move(sellers), std::move(links));
}

}  // namespace exnet
