#pragma once

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "exnet/analysis.hpp"
#include "exnet/enumerate.hpp"
#include "exnet/experiments.hpp"
#include "exnet/graph_json.hpp"
#include "exnet/serialize.hpp"

namespace exnet::cli {

// Process exit codes.
enum ExitStatus : int {
  kAffirmative = 0,
  kNegative = 1,
  kUsageError = 2,
  kResourceLimit = 3,
};

inline constexpr const char* kLimitEnv = "EXNET_LIMIT";

// --limit wins over EXNET_LIMIT, which wins over `fallback`.
inline std::size_t resolve_limit(const std::optional<std::size_t>& flag,
                                 std::size_t fallback = kDefaultEnumerationLimit) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kLimitEnv); env && *env) {
    try {
      std::size_t pos = 0;
      unsigned long v = std::stoul(env, &pos);
      if (pos != std::string(env).size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw ParseError(std::string(kLimitEnv) + " must be a nonnegative integer, got '" + env + "'");
    }
  }
  return fallback;
}

inline void print(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"exnet: fixed-price exchange networks on bipartite buyer/seller graphs"};
  app.require_subcommand(1);

  std::string graph_path;
  std::optional<std::size_t> limit;
  std::uint64_t max_states = EnumerationOptions{}.max_states;

  auto* check = app.add_subcommand("check", "Decide whether every trading session meets all demand");
  check->add_option("graph", graph_path, "Graph JSON file")->required();
  check->add_option("--limit", limit, "Enumeration limit for surplus components");

  auto* feasible = app.add_subcommand("feasible", "Decide whether some allocation meets all demand");
  feasible->add_option("graph", graph_path, "Graph JSON file")->required();

  std::optional<std::uint64_t> samples;
  std::uint64_t seed = 1;
  auto* enumerate = app.add_subcommand("enumerate", "Count infeasible trading sessions");
  enumerate->add_option("graph", graph_path, "Graph JSON file")->required();
  enumerate->add_option("--sample", samples, "Sample this many orderings when exact enumeration is out of reach")
      ->check(CLI::PositiveNumber);
  enumerate->add_option("--seed", seed, "Seed for --sample");
  enumerate->add_option("--limit", limit, "Largest link count enumerated exactly");
  enumerate->add_option("--max-states", max_states, "State budget for exact enumeration");

  std::size_t buyer_limit = kDefaultMaxUnmetBuyerLimit;
  auto* max_unmet = app.add_subcommand("max-unmet", "Maximum total demand a stalled allocation can leave unmet");
  max_unmet->add_option("graph", graph_path, "Graph JSON file")->required();
  max_unmet->add_option("--buyer-limit", buyer_limit, "Largest buyer count accepted");

  auto* witness = app.add_subcommand("witness", "Find an ordering that leaves demand unmet");
  witness->add_option("graph", graph_path, "Graph JSON file")->required();
  witness->add_option("--limit", limit, "Largest link count searched");

  std::size_t star_buyers = 2;
  std::string star_demand = "1", star_reserve = "0", star_output;
  auto* gen_star = app.add_subcommand("gen-star", "Write a reserve lower-bound star instance");
  gen_star->add_option("--buyers", star_buyers, "Number of buyers (>= 2)")->required();
  gen_star->add_option("--demand", star_demand, "Demand of every buyer, integer or p/q");
  gen_star->add_option("--reserve", star_reserve, "Extra supply at s1 on top of the demand");
  gen_star->add_option("--output", star_output, "Write here instead of stdout");

  std::string config_path, csv_path, json_path, profile;
  std::optional<std::size_t> jobs, k_min, k_max;
  auto* experiment = app.add_subcommand("experiment", "Add links to the backbone in every way and enumerate each graph");
  experiment->add_option("--config", config_path, "Experiment config JSON");
  experiment->add_option("--profile", profile, "Budget profile: default or unit");
  experiment->add_option("--k-min", k_min, "Fewest added links");
  experiment->add_option("--k-max", k_max, "Most added links");
  experiment->add_option("--limit", limit, "Largest link count enumerated exactly");
  experiment->add_option("--csv", csv_path, "CSV output path");
  experiment->add_option("--json", json_path, "JSON output path");
  experiment->add_option("--jobs", jobs, "Worker threads (default: available parallelism)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kAffirmative : kUsageError;
  }

  try {
    EnumerationOptions eopt;
    eopt.max_states = max_states;

    if (check->parsed()) {
      auto g = load_graph(graph_path);
      eopt.limit = resolve_limit(limit);
      auto v = decide_success(g, eopt);
      print(out, verdict_to_json(v, g));
      return v.successful ? kAffirmative : kNegative;
    }

    if (feasible->parsed()) {
      auto g = load_graph(graph_path);
      auto a = feasibility(g);
      Json j = Json::object();
      j["feasible"] = a.has_value();
      j["allocation"] = a ? allocation_to_json(*a) : Json(nullptr);
      print(out, j);
      return a ? kAffirmative : kNegative;
    }

    if (enumerate->parsed()) {
      auto g = load_graph(graph_path);
      eopt.limit = resolve_limit(limit);
      std::optional<EnumerationSummary> s;
      try {
        s = enumerate_sessions(g, eopt);
      } catch (const LimitExceeded& e) {
        if (!samples) throw;
        err << "exact enumeration unavailable (" << e.what() << "); sampling " << *samples << " orderings\n";
        s = sample_sessions(g, *samples, seed);
      }
      print(out, summary_to_json(*s));
      return s->infeasible_count == 0 ? kAffirmative : kNegative;
    }

    if (max_unmet->parsed()) {
      auto g = load_graph(graph_path);
      MaxUnmetOptions mopt;
      mopt.buyer_limit = buyer_limit;
      auto r = max_unmet_demand(g, mopt);
      Json j = Json::object();
      j["value"] = r.value.pq();
      Json pattern = Json::array();
      for (bool b : r.pattern) pattern.push_back(b);
      j["pattern"] = std::move(pattern);
      j["allocation"] = allocation_to_json(r.witness);
      j["programs_solved"] = r.programs_solved;
      print(out, j);
      return r.value.is_zero() ? kAffirmative : kNegative;
    }

    if (witness->parsed()) {
      auto g = load_graph(graph_path);
      eopt.limit = resolve_limit(limit);
      auto w = find_infeasible_witness(g, eopt);
      Json j = Json::object();
      j["witness"] = w ? ordering_to_json(*w) : Json(nullptr);
      j["outcome"] = w ? outcome_to_json(run_session(g, *w)) : Json(nullptr);
      print(out, j);
      return w ? kNegative : kAffirmative;
    }

    if (gen_star->parsed()) {
      Quantity d = Quantity::parse(star_demand);
      Quantity r = Quantity::parse(star_reserve);
      auto g = star_instance(star_buyers, d, d + r);
      if (star_output.empty())
        out << format_graph(g);
      else
        save_graph(g, star_output);
      return kAffirmative;
    }

    if (experiment->parsed()) {
      ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : load_experiment_config(config_path);
      if (!profile.empty()) config.base_graph = backbone_graph(BudgetProfile::named(profile));
      if (k_min) config.k_min = *k_min;
      if (k_max) config.k_max = *k_max;
      config.enumeration.limit = resolve_limit(limit, config.enumeration.limit);
      if (jobs)
        config.jobs = *jobs;
      else if (config_path.empty())
        config.jobs = std::max(1u, std::thread::hardware_concurrency());
      if (!csv_path.empty()) config.csv_path = csv_path;
      if (!json_path.empty()) config.json_path = json_path;
      if (config.csv_path.empty()) config.csv_path = "experiment.csv";
      if (config.json_path.empty()) config.json_path = "experiment.json";

      auto result = run_experiment(config);
      emit_results(result, config, OutputFormat::Csv, config.csv_path);
      emit_results(result, config, OutputFormat::Json, config.json_path);

      std::size_t errors = 0;
      for (const auto& row : result.rows)
        if (row.error) ++errors;
      for (const auto& s : summarize_by_k(result))
        err << "k=" << s.k << ": " << s.successful << " successful of " << s.graphs << "\n";
      Json j = Json::object();
      j["per_k"] = k_summary_to_json(result);
      j["rows"] = result.rows.size();
      j["errors"] = errors;
      j["csv"] = config.csv_path;
      j["json"] = config.json_path;
      print(out, j);
      return errors == 0 ? kAffirmative : kResourceLimit;
    }
  } catch (const LimitExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kResourceLimit;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace exnet::cli
