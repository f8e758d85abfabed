#pragma once

#include <string>
#include <vector>

#include "exnet/analysis.hpp"
#include "exnet/enumerate.hpp"
#include "exnet/graph_json.hpp"
#include "exnet/session.hpp"

// JSON views of results. Every rational is written as a reduced "p/q" string.

namespace exnet {

inline Json ordering_to_json(const Ordering& order) {
  Json j = Json::array();
  for (LinkIndex i : order) j.push_back(i);
  return j;
}

inline Ordering ordering_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("ordering: expected an array of link indices");
  Ordering out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number_unsigned()) throw ParseError("ordering[" + std::to_string(k) + "]: expected a nonnegative integer");
    out.push_back(j[k].get<LinkIndex>());
  }
  return out;
}

inline Json quantities_to_json(const std::vector<Quantity>& qs) {
  Json j = Json::array();
  for (const auto& q : qs) j.push_back(q.pq());
  return j;
}

inline Json outcome_to_json(const SessionOutcome& o) {
  Json j = Json::object();
  j["feasible"] = o.feasible;
  j["unmet"] = quantities_to_json(o.unmet);
  j["total_unmet"] = o.total_unmet().pq();
  j["remaining_supply"] = quantities_to_json(o.final_state.remaining_supply);
  return j;
}

inline Json summary_to_json(const EnumerationSummary& s) {
  Json j = Json::object();
  j["estimated"] = s.estimated;
  j["total_orderings"] = s.total_orderings;
  j["infeasible_count"] = s.infeasible_count;
  j["infeasible_fraction"] = format_pq(s.infeasible_fraction);
  j["max_total_unmet"] = s.max_total_unmet.pq();
  j["max_buyer_unmet"] = s.max_buyer_unmet.pq();
  j["states_visited"] = s.states_visited;
  return j;
}

inline Json component_to_json(const Component& c, const ExchangeGraph& g) {
  Json j = Json::object();
  Json b = Json::array(), s = Json::array();
  for (std::size_t i : c.buyers) b.push_back(g.buyers()[i].id);
  for (std::size_t i : c.sellers) s.push_back(g.sellers()[i].id);
  j["buyers"] = std::move(b);
  j["sellers"] = std::move(s);
  j["links"] = c.links.size();
  return j;
}

inline Json report_to_json(const SuccessReport& r, const ExchangeGraph& g) {
  Json j = Json::object();
  j["successful"] = r.successful;
  Json f = Json::array();
  for (const auto& cf : r.failing_components) {
    Json e = component_to_json(cf.component, g);
    e["reason"] = to_string(cf.reason);
    f.push_back(std::move(e));
  }
  j["failing_components"] = std::move(f);
  return j;
}

inline Json verdict_to_json(const SuccessVerdict& v, const ExchangeGraph& g) {
  Json j = Json::object();
  j["successful"] = v.successful;
  j["method"] = v.method;
  j["structure"] = report_to_json(v.structure, g);
  return j;
}

inline Json allocation_to_json(const Allocation& a) {
  Json j = Json::object();
  Json t = Json::array();
  for (const auto& row : a.transactions) t.push_back(quantities_to_json(row));
  j["transactions"] = std::move(t);
  j["unmet"] = quantities_to_json(a.unmet);
  return j;
}

}  // namespace exnet
