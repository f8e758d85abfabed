#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "exnet/error.hpp"
#include "exnet/graph.hpp"
#include "exnet/quantity.hpp"

namespace exnet {

// Remaining budgets during a session, plus which links have already had their turn.
struct TradeState {
  std::vector<Quantity> remaining_demand;
  std::vector<Quantity> remaining_supply;
  std::vector<bool> processed;

  static TradeState initial(const ExchangeGraph& g) {
    TradeState s;
    for (const auto& b : g.buyers()) s.remaining_demand.push_back(b.demand);
    for (const auto& x : g.sellers()) s.remaining_supply.push_back(x.supply);
    s.processed.assign(g.link_count(), false);
    return s;
  }

  Quantity total_remaining_demand() const {
    Quantity t;
    for (const auto& q : remaining_demand) t += q;
    return t;
  }
  Quantity total_remaining_supply() const {
    Quantity t;
    for (const auto& q : remaining_supply) t += q;
    return t;
  }

  friend bool operator==(const TradeState&, const TradeState&) = default;
};

// A trading session: every link index exactly once.
using Ordering = std::vector<LinkIndex>;

struct SessionOutcome {
  TradeState final_state;
  std::vector<Quantity> unmet;
  bool feasible = true;

  Quantity total_unmet() const {
    Quantity t;
    for (const auto& q : unmet) t += q;
    return t;
  }
};

// Forced maximal trade over one link: the buyer keeps max(0, d - s) and the
// seller keeps max(0, s - d). Trading with a depleted side changes nothing, but
// the link is still used up.
inline TradeState trade(TradeState state, LinkIndex link, const ExchangeGraph& g) {
  if (link >= g.link_count()) throw ContractViolation("link index " + std::to_string(link) + " out of range");
  if (state.processed.at(link)) throw ContractViolation("link " + std::to_string(link) + " already traded");
  const Link& l = g.link(link);
  Quantity& d = state.remaining_demand.at(l.buyer);
  Quantity& s = state.remaining_supply.at(l.seller);
  Quantity nd = monus(d, s);
  Quantity ns = monus(s, d);
  d = nd;
  s = ns;
  state.processed[link] = true;
  return state;
}

inline void validate_ordering(const ExchangeGraph& g, const Ordering& order) {
  if (order.size() != g.link_count())
    throw ContractViolation("ordering has " + std::to_string(order.size()) + " entries, graph has " +
                            std::to_string(g.link_count()) + " links");
  std::vector<bool> seen(g.link_count(), false);
  for (LinkIndex i : order) {
    if (i >= g.link_count()) throw ContractViolation("ordering entry " + std::to_string(i) + " out of range");
    if (seen[i]) throw ContractViolation("ordering repeats link " + std::to_string(i));
    seen[i] = true;
  }
}

inline SessionOutcome outcome_of(TradeState state) {
  SessionOutcome out;
  out.unmet = state.remaining_demand;
  out.feasible = true;
  for (const auto& u : out.unmet)
    if (u.is_positive()) out.feasible = false;
  out.final_state = std::move(state);
  return out;
}

inline SessionOutcome run_session(const ExchangeGraph& g, const Ordering& order) {
  validate_ordering(g, order);
  TradeState s = TradeState::initial(g);
  for (LinkIndex i : order) s = trade(std::move(s), i, g);
  return outcome_of(std::move(s));
}

// Relaxed engine, used only to check that splitting a trade changes nothing.
// Moves `amount` (at most the forced maximum) over a link without marking it processed.
inline TradeState partial_trade(TradeState state, LinkIndex link, const Quantity& amount, const ExchangeGraph& g) {
  if (state.processed.at(link)) throw ContractViolation("link " + std::to_string(link) + " already traded");
  const Link& l = g.link(link);
  Quantity& d = state.remaining_demand.at(l.buyer);
  Quantity& s = state.remaining_supply.at(l.seller);
  if (amount > min(d, s)) throw ContractViolation("partial trade exceeds available budget");
  d = d - amount;
  s = s - amount;
  return state;
}

// Runs `order`, but the trade at position `split_at` is executed as two
// consecutive trades over the same link: first `first_share` of the forced
// amount, then the rest.
inline SessionOutcome run_split_session(const ExchangeGraph& g, const Ordering& order, std::size_t split_at,
                                        const Rational& first_share) {
  validate_ordering(g, order);
  if (first_share < 0 || first_share > 1) throw ContractViolation("split share must lie in [0, 1]");
  TradeState s = TradeState::initial(g);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    LinkIndex i = order[pos];
    if (pos == split_at) {
      const Link& l = g.link(i);
      Quantity amount = min(s.remaining_demand[l.buyer], s.remaining_supply[l.seller]);
      Quantity first(amount.value() * first_share);
      s = partial_trade(std::move(s), i, first, g);
      s = partial_trade(std::move(s), i, amount - first, g);
      s.processed[i] = true;
    } else {
      s = trade(std::move(s), i, g);
    }
  }
  return outcome_of(std::move(s));
}

}  // namespace exnet
