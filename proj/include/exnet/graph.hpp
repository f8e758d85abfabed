#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <numeric>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "exnet/error.hpp"
#include "exnet/quantity.hpp"

namespace exnet {

struct Buyer {
  std::string id;
  Quantity demand;
  friend bool operator==(const Buyer&, const Buyer&) = default;
};

struct Seller {
  std::string id;
  Quantity supply;
  friend bool operator==(const Seller&, const Seller&) = default;
};

struct Link {
  std::size_t buyer = 0;
  std::size_t seller = 0;
  friend bool operator==(const Link&, const Link&) = default;
  friend auto operator<=>(const Link&, const Link&) = default;
};

using LinkIndex = std::size_t;

// Immutable buyer/seller budgets plus the links between them. Link indices are
// positions in links(), which keeps the order the links were given in.
class ExchangeGraph {
 public:
  ExchangeGraph() = default;

  ExchangeGraph(std::vector<Buyer> buyers, std::vector<Seller> sellers, std::vector<Link> links)
      : buyers_(std::move(buyers)), sellers_(std::move(sellers)), links_(std::move(links)) {
    std::unordered_set<std::string> ids;
    for (const auto& b : buyers_)
      if (!ids.insert(b.id).second) throw ContractViolation("duplicate buyer id '" + b.id + "'");
    ids.clear();
    for (const auto& s : sellers_)
      if (!ids.insert(s.id).second) throw ContractViolation("duplicate seller id '" + s.id + "'");

    std::set<Link> seen;
    for (const auto& l : links_) {
      if (l.buyer >= buyers_.size() || l.seller >= sellers_.size())
        throw ContractViolation("link (" + std::to_string(l.buyer) + "," + std::to_string(l.seller) +
                                ") out of range");
      if (!seen.insert(l).second)
        throw ContractViolation("duplicate link " + buyers_[l.buyer].id + "-" + sellers_[l.seller].id);
    }

    incident_buyer_.resize(buyers_.size());
    incident_seller_.resize(sellers_.size());
    for (LinkIndex i = 0; i < links_.size(); ++i) {
      incident_buyer_[links_[i].buyer].push_back(i);
      incident_seller_[links_[i].seller].push_back(i);
    }
  }

  const std::vector<Buyer>& buyers() const { return buyers_; }
  const std::vector<Seller>& sellers() const { return sellers_; }
  const std::vector<Link>& links() const { return links_; }
  const Link& link(LinkIndex i) const { return links_.at(i); }

  std::size_t buyer_count() const { return buyers_.size(); }
  std::size_t seller_count() const { return sellers_.size(); }
  std::size_t link_count() const { return links_.size(); }

  const std::vector<LinkIndex>& links_of_buyer(std::size_t b) const { return incident_buyer_.at(b); }
  const std::vector<LinkIndex>& links_of_seller(std::size_t s) const { return incident_seller_.at(s); }

  bool has_link(std::size_t b, std::size_t s) const {
    for (LinkIndex i : incident_buyer_.at(b))
      if (links_[i].seller == s) return true;
    return false;
  }

  Quantity total_demand() const {
    Quantity t;
    for (const auto& b : buyers_) t += b.demand;
    return t;
  }
  Quantity total_supply() const {
    Quantity t;
    for (const auto& s : sellers_) t += s.supply;
    return t;
  }

  // Buyers first, then sellers.
  std::size_t actor_count() const { return buyers_.size() + sellers_.size(); }

  // Same actors and budgets, with `extra` appended to the link list.
  ExchangeGraph with_links(const std::vector<Link>& extra) const {
    std::vector<Link> all = links_;
    all.insert(all.end(), extra.begin(), extra.end());
    return ExchangeGraph(buyers_, sellers_, std::move(all));
  }

  // The sub-instance induced by the given actors; links keep their relative order.
  ExchangeGraph restricted(const std::vector<std::size_t>& buyer_set, const std::vector<std::size_t>& seller_set) const {
    std::vector<std::ptrdiff_t> bmap(buyers_.size(), -1), smap(sellers_.size(), -1);
    std::vector<Buyer> nb;
    std::vector<Seller> ns;
    for (std::size_t b : buyer_set) {
      bmap.at(b) = static_cast<std::ptrdiff_t>(nb.size());
      nb.push_back(buyers_[b]);
    }
    for (std::size_t s : seller_set) {
      smap.at(s) = static_cast<std::ptrdiff_t>(ns.size());
      ns.push_back(sellers_[s]);
    }
    std::vector<Link> nl;
    for (const auto& l : links_)
      if (bmap[l.buyer] >= 0 && smap[l.seller] >= 0)
        nl.push_back({static_cast<std::size_t>(bmap[l.buyer]), static_cast<std::size_t>(smap[l.seller])});
    return ExchangeGraph(std::move(nb), std::move(ns), std::move(nl));
  }

  friend bool operator==(const ExchangeGraph& a, const ExchangeGraph& b) {
    return a.buyers_ == b.buyers_ && a.sellers_ == b.sellers_ && a.links_ == b.links_;
  }

 private:
  std::vector<Buyer> buyers_;
  std::vector<Seller> sellers_;
  std::vector<Link> links_;
  std::vector<std::vector<LinkIndex>> incident_buyer_;
  std::vector<std::vector<LinkIndex>> incident_seller_;
};

// A connected piece of the graph. All index lists are ascending.
struct Component {
  std::vector<std::size_t> buyers;
  std::vector<std::size_t> sellers;
  std::vector<LinkIndex> links;
  friend bool operator==(const Component&, const Component&) = default;
};

// Connected components of the undirected buyer/seller graph, budgets ignored.
// Isolated actors are singleton components. Components are ordered by their
// smallest actor index, where buyer i is actor i and seller j is actor N_b + j.
inline std::vector<Component> components(const ExchangeGraph& g) {
  const std::size_t nb = g.buyer_count();
  std::vector<std::size_t> parent(g.actor_count());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& l : g.links()) {
    std::size_t a = find(l.buyer), b = find(nb + l.seller);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  // Roots are the smallest actor of each set because unions keep the smaller root.
  std::vector<std::ptrdiff_t> slot(g.actor_count(), -1);
  std::vector<Component> out;
  for (std::size_t a = 0; a < g.actor_count(); ++a) {
    std::size_t r = find(a);
    if (slot[r] < 0) {
      slot[r] = static_cast<std::ptrdiff_t>(out.size());
      out.emplace_back();
    }
    Component& c = out[static_cast<std::size_t>(slot[r])];
    if (a < nb)
      c.buyers.push_back(a);
    else
      c.sellers.push_back(a - nb);
  }
  for (LinkIndex i = 0; i < g.link_count(); ++i)
    out[static_cast<std::size_t>(slot[find(g.link(i).buyer)])].links.push_back(i);
  return out;
}

inline bool is_complete_bipartite(const Component& c, const ExchangeGraph&) {
  return c.links.size() == c.buyers.size() * c.sellers.size();
}

inline Quantity component_demand(const Component& c, const ExchangeGraph& g) {
  Quantity t;
  for (std::size_t b : c.buyers) t += g.buyers()[b].demand;
  return t;
}

inline Quantity component_supply(const Component& c, const ExchangeGraph& g) {
  Quantity t;
  for (std::size_t s : c.sellers) t += g.sellers()[s].supply;
  return t;
}

inline bool is_balanced(const Component& c, const ExchangeGraph& g) {
  return component_demand(c, g) == component_supply(c, g);
}

}  // namespace exnet
