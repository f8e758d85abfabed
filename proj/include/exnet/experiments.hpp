#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "exnet/analysis.hpp"
#include "exnet/enumerate.hpp"
#include "exnet/graph.hpp"
#include "exnet/graph_json.hpp"

namespace exnet {

// Budgets for the four-link backbone: four buyer demands, three seller supplies.
struct BudgetProfile {
  std::vector<Quantity> demands;
  std::vector<Quantity> supplies;

  static BudgetProfile standard() {
    return {{Quantity(2), Quantity(3), Quantity(1), Quantity(4)}, {Quantity(2), Quantity(3), Quantity(5)}};
  }
  static BudgetProfile unit() {
    return {{Quantity(1), Quantity(1), Quantity(1), Quantity(1)}, {Quantity(1), Quantity(1), Quantity(2)}};
  }
  static BudgetProfile named(const std::string& name) {
    if (name == "default") return standard();
    if (name == "unit") return unit();
    throw ParseError("unknown budget profile '" + name + "' (expected \"default\" or \"unit\")");
  }
};

// b1-s1, b2-s2, b3-s3, b4-s3: components K_{1,1}, K_{1,1}, K_{2,1}.
inline ExchangeGraph backbone_graph(const BudgetProfile& p = BudgetProfile::standard()) {
  if (p.demands.size() != 4 || p.supplies.size() != 3)
    throw ContractViolation("backbone profile needs 4 demands and 3 supplies");
  std::vector<Buyer> buyers;
  std::vector<Seller> sellers;
  for (std::size_t i = 0; i < 4; ++i) buyers.push_back({"b" + std::to_string(i + 1), p.demands[i]});
  for (std::size_t j = 0; j < 3; ++j) sellers.push_back({"s" + std::to_string(j + 1), p.supplies[j]});
  ExchangeGraph g(std::move(buyers), std::move(sellers), {{0, 0}, {1, 1}, {2, 2}, {3, 2}});
  for (const auto& c : components(g))
    if (!is_balanced(c, g)) throw ContractViolation("backbone profile must balance supply and demand in every component");
  return g;
}

struct SamplingOptions {
  bool enabled = true;
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 1;
};

struct ExperimentConfig {
  ExchangeGraph base_graph = backbone_graph();
  std::size_t k_min = 0;
  std::size_t k_max = 8;
  EnumerationOptions enumeration;
  SamplingOptions sampling;
  bool include_sampled_in_stats = false;
  std::size_t jobs = 1;
  std::string csv_path;
  std::string json_path;
};

// Links absent from the base graph, in (buyer, seller) order.
inline std::vector<Link> addable_links(const ExchangeGraph& base) {
  std::vector<Link> out;
  for (std::size_t i = 0; i < base.buyer_count(); ++i)
    for (std::size_t j = 0; j < base.seller_count(); ++j)
      if (!base.has_link(i, j)) out.push_back({i, j});
  return out;
}

inline void validate(const ExperimentConfig& c) {
  std::size_t room = addable_links(c.base_graph).size();
  if (c.k_min > c.k_max || c.k_max > room)
    throw ContractViolation("need 0 <= k_min <= k_max <= " + std::to_string(room) + ", got k_min=" +
                            std::to_string(c.k_min) + " k_max=" + std::to_string(c.k_max));
  if (c.sampling.enabled && c.sampling.samples == 0) throw ContractViolation("sampling needs at least one sample");
}

struct ExperimentRow {
  std::size_t k = 0;
  std::vector<Link> added_links;
  std::size_t L = 0;
  bool successful = false;
  bool exact = false;
  Rational infeasible_fraction{0};
  Quantity max_total_unmet;
  Rational max_unmet_ratio{0};
  std::uint64_t infeasible_count = 0;
  std::uint64_t total_orderings = 0;
  std::optional<std::string> error;
};

struct BoxStats {
  std::size_t L = 0;
  std::size_t count = 0;
  Rational median{0}, q25{0}, q75{0};
  Rational whisker_low{0}, whisker_high{0};
  std::vector<Rational> outliers;
};

struct BoxplotStats {
  std::vector<BoxStats> infeasible_fraction;
  std::vector<BoxStats> max_unmet_ratio;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  BoxplotStats stats;
};

// Linear interpolation between order statistics at position p * (n - 1).
inline Rational quantile(const std::vector<Rational>& sorted, const Rational& p) {
  if (sorted.empty()) throw ContractViolation("quantile of an empty sample");
  Rational h = p * Rational(static_cast<long long>(sorted.size() - 1));
  BigInt lo_big = numerator_of(h) / denominator_of(h);
  auto lo = static_cast<std::size_t>(lo_big);
  Rational frac = h - Rational(lo_big);
  if (lo + 1 >= sorted.size()) return sorted[lo];
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

// Quartiles plus Tukey whiskers; points beyond 1.5 IQR from the box are outliers.
inline BoxStats box_stats(std::size_t L, std::vector<Rational> values) {
  std::sort(values.begin(), values.end());
  BoxStats s;
  s.L = L;
  s.count = values.size();
  s.q25 = quantile(values, Rational(1, 4));
  s.median = quantile(values, Rational(1, 2));
  s.q75 = quantile(values, Rational(3, 4));
  Rational reach = Rational(3, 2) * (s.q75 - s.q25);
  Rational lo_fence = s.q25 - reach, hi_fence = s.q75 + reach;
  bool first = true;
  for (const auto& v : values) {
    if (v < lo_fence || v > hi_fence) {
      s.outliers.push_back(v);
      continue;
    }
    if (first) s.whisker_low = v;
    s.whisker_high = v;
    first = false;
  }
  return s;
}

inline BoxplotStats compute_stats(const std::vector<ExperimentRow>& rows, bool include_sampled) {
  std::vector<std::size_t> ls;
  for (const auto& r : rows)
    if (!r.error && (r.exact || include_sampled)) ls.push_back(r.L);
  std::sort(ls.begin(), ls.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
  BoxplotStats out;
  for (std::size_t L : ls) {
    std::vector<Rational> frac, ratio;
    for (const auto& r : rows) {
      if (r.L != L || r.error || !(r.exact || include_sampled)) continue;
      frac.push_back(r.infeasible_fraction);
      ratio.push_back(r.max_unmet_ratio);
    }
    out.infeasible_fraction.push_back(box_stats(L, std::move(frac)));
    out.max_unmet_ratio.push_back(box_stats(L, std::move(ratio)));
  }
  return out;
}

// Calls f with each k-subset of {0..n-1} in lexicographic order.
template <typename F>
void for_each_combination(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  for (;;) {
    f(static_cast<const std::vector<std::size_t>&>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline void evaluate_row(ExperimentRow& row, const ExperimentConfig& config) {
  ExchangeGraph g = config.base_graph.with_links(row.added_links);
  row.L = g.link_count();
  row.successful = check_success(g).successful;

  std::optional<EnumerationSummary> summary;
  std::string why_not_exact;
  try {
    summary = enumerate_sessions(g, config.enumeration);
  } catch (const LimitExceeded& e) {
    why_not_exact = e.what();
  }
  if (!summary) {
    if (!config.sampling.enabled) {
      row.error = why_not_exact;
      return;
    }
    summary = sample_sessions(g, config.sampling.samples, config.sampling.seed);
  }
  row.exact = !summary->estimated;
  row.infeasible_fraction = summary->infeasible_fraction;
  row.infeasible_count = summary->infeasible_count;
  row.total_orderings = summary->total_orderings;
  row.max_total_unmet = summary->max_total_unmet;
  Rational demand = g.total_demand().value();
  row.max_unmet_ratio = demand == 0 ? Rational(0) : Rational(row.max_total_unmet.value() / demand);
}

// One row per (k, added-link subset), k ascending, subsets lexicographic.
// Rows are independent and may be evaluated on several threads; the output
// order does not depend on scheduling.
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  const auto candidates = addable_links(config.base_graph);
  ExperimentResult result;
  for (std::size_t k = config.k_min; k <= config.k_max; ++k) {
    for_each_combination(candidates.size(), k, [&](const std::vector<std::size_t>& pick) {
      ExperimentRow row;
      row.k = k;
      for (std::size_t p : pick) row.added_links.push_back(candidates[p]);
      result.rows.push_back(std::move(row));
    });
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < result.rows.size(); i = next++) {
      try {
        evaluate_row(result.rows[i], config);
      } catch (const std::exception& e) {
        result.rows[i].error = e.what();
      }
    }
  };
  std::size_t jobs = std::max<std::size_t>(1, std::min(config.jobs, result.rows.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  result.stats = compute_stats(result.rows, config.include_sampled_in_stats);
  return result;
}

// ---------------------------------------------------------------------------
// Output

inline std::string link_list_text(const std::vector<Link>& links, const ExchangeGraph& g) {
  std::string s;
  for (const auto& l : links) {
    if (!s.empty()) s += ';';
    s += g.buyers()[l.buyer].id + "-" + g.sellers()[l.seller].id;
  }
  return s;
}

inline std::string format_csv(const ExperimentResult& r, const ExchangeGraph& base) {
  std::ostringstream out;
  out << "k,L,added_links,successful,infeasible_fraction,max_total_unmet,max_unmet_ratio,exact_flag\n";
  for (const auto& row : r.rows) {
    out << row.k << ',' << row.L << ',' << link_list_text(row.added_links, base) << ','
        << (row.successful ? "true" : "false") << ',';
    if (row.error)
      out << ",,";
    else
      out << format_pq(row.infeasible_fraction) << ',' << row.max_total_unmet.pq() << ','
          << format_pq(row.max_unmet_ratio);
    out << ',' << (row.exact ? "true" : "false") << '\n';
  }
  return out.str();
}

inline Json box_to_json(const BoxStats& s) {
  Json j = Json::object();
  j["L"] = s.L;
  j["count"] = s.count;
  j["median"] = format_pq(s.median);
  j["q25"] = format_pq(s.q25);
  j["q75"] = format_pq(s.q75);
  j["whisker_low"] = format_pq(s.whisker_low);
  j["whisker_high"] = format_pq(s.whisker_high);
  Json o = Json::array();
  for (const auto& v : s.outliers) o.push_back(format_pq(v));
  j["outliers"] = std::move(o);
  return j;
}

struct KSummary {
  std::size_t k = 0;
  std::size_t graphs = 0;
  std::size_t successful = 0;
  std::size_t exact = 0;
  std::size_t errors = 0;
};

inline std::vector<KSummary> summarize_by_k(const ExperimentResult& r) {
  std::vector<KSummary> out;
  for (const auto& row : r.rows) {
    if (out.empty() || out.back().k != row.k) out.push_back({row.k});
    auto& s = out.back();
    ++s.graphs;
    if (row.successful) ++s.successful;
    if (row.exact) ++s.exact;
    if (row.error) ++s.errors;
  }
  return out;
}

inline Json k_summary_to_json(const ExperimentResult& r) {
  Json arr = Json::array();
  for (const auto& s : summarize_by_k(r))
    arr.push_back(Json{{"k", s.k}, {"graphs", s.graphs}, {"successful", s.successful}, {"exact", s.exact}, {"errors", s.errors}});
  return arr;
}

// Median of max_unmet_ratio over the unsuccessful exact rows, if any.
inline std::optional<Rational> unsuccessful_median_ratio(const ExperimentResult& r) {
  std::vector<Rational> v;
  for (const auto& row : r.rows)
    if (row.exact && !row.error && !row.successful) v.push_back(row.max_unmet_ratio);
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  return quantile(v, Rational(1, 2));
}

inline std::string format_json(const ExperimentResult& r, const ExperimentConfig& config) {
  const auto& base = config.base_graph;
  Json doc = Json::object();
  Json meta = Json::object();
  meta["base_graph"] = graph_to_json(base);
  meta["k_min"] = config.k_min;
  meta["k_max"] = config.k_max;
  meta["enumeration_limit"] = config.enumeration.limit;
  meta["max_states"] = config.enumeration.max_states;
  meta["sampling"] = Json{{"enabled", config.sampling.enabled}, {"samples", config.sampling.samples}, {"seed", config.sampling.seed}};
  meta["stats_include_sampled"] = config.include_sampled_in_stats;
  meta["quantile_method"] = "linear interpolation at p*(n-1)";
  meta["outlier_rule"] = "beyond 1.5*IQR from the quartiles";
  auto med = unsuccessful_median_ratio(r);
  meta["unsuccessful_median_max_unmet_ratio"] = med ? Json(format_pq(*med)) : Json(nullptr);
  doc["metadata"] = std::move(meta);
  doc["per_k"] = k_summary_to_json(r);

  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json j = Json::object();
    j["k"] = row.k;
    j["L"] = row.L;
    Json added = Json::array();
    for (const auto& l : row.added_links) added.push_back(Json::array({base.buyers()[l.buyer].id, base.sellers()[l.seller].id}));
    j["added_links"] = std::move(added);
    j["successful"] = row.successful;
    if (row.error) {
      j["infeasible_fraction"] = nullptr;
      j["max_total_unmet"] = nullptr;
      j["max_unmet_ratio"] = nullptr;
    } else {
      j["infeasible_fraction"] = format_pq(row.infeasible_fraction);
      j["max_total_unmet"] = row.max_total_unmet.pq();
      j["max_unmet_ratio"] = format_pq(row.max_unmet_ratio);
    }
    j["exact_flag"] = row.exact;
    j["infeasible_count"] = row.infeasible_count;
    j["total_orderings"] = row.total_orderings;
    if (row.error) j["error"] = *row.error;
    rows.push_back(std::move(j));
  }
  doc["rows"] = std::move(rows);

  Json stats = Json::object();
  Json a = Json::array(), b = Json::array();
  for (const auto& s : r.stats.infeasible_fraction) a.push_back(box_to_json(s));
  for (const auto& s : r.stats.max_unmet_ratio) b.push_back(box_to_json(s));
  stats["infeasible_fraction"] = std::move(a);
  stats["max_unmet_ratio"] = std::move(b);
  doc["stats"] = std::move(stats);
  return doc.dump(2) + "\n";
}

enum class OutputFormat { Csv, Json };

inline void emit_results(const ExperimentResult& r, const ExperimentConfig& config, OutputFormat format,
                         const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << (format == OutputFormat::Csv ? format_csv(r, config.base_graph) : format_json(r, config));
  out.flush();
  if (!out) throw Error("write failed for '" + path + "'");
}

// ---------------------------------------------------------------------------
// Config files

inline ExperimentConfig experiment_config_from_json(const Json& doc) {
  if (!doc.is_object()) throw ParseError("experiment config: top level must be an object");
  ExperimentConfig c;
  auto uint_field = [&](const Json& obj, const char* key, auto& dst) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_number_unsigned()) throw ParseError(std::string("experiment config: \"") + key + "\" must be a nonnegative integer");
    dst = it->template get<std::remove_reference_t<decltype(dst)>>();
  };
  auto bool_field = [&](const Json& obj, const char* key, bool& dst) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_boolean()) throw ParseError(std::string("experiment config: \"") + key + "\" must be a boolean");
    dst = it->get<bool>();
  };

  if (doc.contains("base") && doc.contains("profile"))
    throw ParseError("experiment config: give either \"base\" or \"profile\", not both");
  if (auto it = doc.find("base"); it != doc.end()) c.base_graph = graph_from_json(*it);
  if (auto it = doc.find("profile"); it != doc.end()) {
    BudgetProfile p;
    if (it->is_string()) {
      p = BudgetProfile::named(it->get<std::string>());
    } else if (it->is_object()) {
      for (const auto& v : detail::member(*it, "demands", "profile"))
        p.demands.push_back(detail::quantity_field(v, "profile.demands"));
      for (const auto& v : detail::member(*it, "supplies", "profile"))
        p.supplies.push_back(detail::quantity_field(v, "profile.supplies"));
    } else {
      throw ParseError("experiment config: \"profile\" must be a name or an object");
    }
    try {
      c.base_graph = backbone_graph(p);
    } catch (const ContractViolation& e) {
      throw ParseError(std::string("experiment config: ") + e.what());
    }
  }
  c.k_max = std::min(c.k_max, addable_links(c.base_graph).size());
  uint_field(doc, "k_min", c.k_min);
  uint_field(doc, "k_max", c.k_max);
  uint_field(doc, "limit", c.enumeration.limit);
  uint_field(doc, "max_states", c.enumeration.max_states);
  uint_field(doc, "jobs", c.jobs);
  bool_field(doc, "include_sampled_in_stats", c.include_sampled_in_stats);
  if (auto it = doc.find("sampling"); it != doc.end()) {
    bool_field(*it, "enabled", c.sampling.enabled);
    uint_field(*it, "samples", c.sampling.samples);
    uint_field(*it, "seed", c.sampling.seed);
  }
  if (auto it = doc.find("output"); it != doc.end()) {
    if (auto p = it->find("csv"); p != it->end()) c.csv_path = p->get<std::string>();
    if (auto p = it->find("json"); p != it->end()) c.json_path = p->get<std::string>();
  }
  return c;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open experiment config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  Json doc;
  try {
    doc = Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return experiment_config_from_json(doc);
}

}  // namespace exnet
