#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "exnet/error.hpp"
#include "exnet/graph.hpp"

namespace exnet {

using Json = nlohmann::ordered_json;

namespace detail {

inline Quantity quantity_field(const Json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return Quantity::parse(j.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  if (j.is_number_unsigned() || (j.is_number_integer() && j.get<long long>() >= 0))
    return Quantity(Rational(j.get<long long>()));
  throw ParseError(where + ": expected a quantity string such as \"5\" or \"3/2\"");
}

inline const Json& member(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field \"" + key + "\"");
  return *it;
}

inline std::string id_field(const Json& j, const std::string& where) {
  if (!j.is_string() || j.get<std::string>().empty()) throw ParseError(where + ": expected a non-empty id string");
  return j.get<std::string>();
}

}  // namespace detail

inline ExchangeGraph graph_from_json(const Json& doc) {
  if (!doc.is_object()) throw ParseError("graph: top level must be an object");
  std::vector<Buyer> buyers;
  std::vector<Seller> sellers;
  std::map<std::string, std::size_t> bidx, sidx;

  const Json& jb = detail::member(doc, "buyers", "graph");
  if (!jb.is_array()) throw ParseError("graph.buyers: expected an array");
  for (std::size_t i = 0; i < jb.size(); ++i) {
    std::string where = "buyers[" + std::to_string(i) + "]";
    std::string id = detail::id_field(detail::member(jb[i], "id", where), where + ".id");
    Quantity q = detail::quantity_field(detail::member(jb[i], "demand", where), where + ".demand");
    if (!bidx.emplace(id, buyers.size()).second) throw ParseError(where + ".id: duplicate buyer id '" + id + "'");
    buyers.push_back({id, q});
  }

  const Json& js = detail::member(doc, "sellers", "graph");
  if (!js.is_array()) throw ParseError("graph.sellers: expected an array");
  for (std::size_t i = 0; i < js.size(); ++i) {
    std::string where = "sellers[" + std::to_string(i) + "]";
    std::string id = detail::id_field(detail::member(js[i], "id", where), where + ".id");
    Quantity q = detail::quantity_field(detail::member(js[i], "supply", where), where + ".supply");
    if (!sidx.emplace(id, sellers.size()).second) throw ParseError(where + ".id: duplicate seller id '" + id + "'");
    sellers.push_back({id, q});
  }

  const Json& jl = detail::member(doc, "links", "graph");
  if (!jl.is_array()) throw ParseError("graph.links: expected an array");
  std::vector<Link> links;
  std::set<Link> seen;
  for (std::size_t i = 0; i < jl.size(); ++i) {
    std::string where = "links[" + std::to_string(i) + "]";
    if (!jl[i].is_array() || jl[i].size() != 2) throw ParseError(where + ": expected [buyer_id, seller_id]");
    std::string b = detail::id_field(jl[i][0], where + "[0]");
    std::string s = detail::id_field(jl[i][1], where + "[1]");
    auto bi = bidx.find(b);
    if (bi == bidx.end()) throw ParseError(where + ": unknown buyer id '" + b + "'");
    auto si = sidx.find(s);
    if (si == sidx.end()) throw ParseError(where + ": unknown seller id '" + s + "'");
    Link l{bi->second, si->second};
    if (!seen.insert(l).second) throw ParseError(where + ": duplicate link " + b + "-" + s);
    links.push_back(l);
  }
  return ExchangeGraph(std::move(buyers), std::move(sellers), std::move(links));
}

inline ExchangeGraph parse_graph(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("graph JSON: ") + e.what());
  }
  return graph_from_json(doc);
}

inline ExchangeGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_graph(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline Json graph_to_json(const ExchangeGraph& g) {
  Json doc = Json::object();
  Json buyers = Json::array();
  for (const auto& b : g.buyers()) buyers.push_back(Json{{"id", b.id}, {"demand", b.demand.str()}});
  Json sellers = Json::array();
  for (const auto& s : g.sellers()) sellers.push_back(Json{{"id", s.id}, {"supply", s.supply.str()}});
  Json links = Json::array();
  for (const auto& l : g.links()) links.push_back(Json::array({g.buyers()[l.buyer].id, g.sellers()[l.seller].id}));
  doc["buyers"] = std::move(buyers);
  doc["sellers"] = std::move(sellers);
  doc["links"] = std::move(links);
  return doc;
}

// Canonical text: two-space indentation and a trailing newline.
inline std::string format_graph(const ExchangeGraph& g) { return graph_to_json(g).dump(2) + "\n"; }

inline void save_graph(const ExchangeGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write graph file '" + path + "'");
  out << format_graph(g);
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace exnet
