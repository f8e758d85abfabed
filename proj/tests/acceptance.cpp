// Acceptance run: one line per criterion, nonzero exit if any fails.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <unistd.h>

#include "exnet/exnet.hpp"
#include "oracles.hpp"

namespace {

using namespace exnet;

struct Check {
  std::ostringstream detail;
  bool ok = true;

  void fail(const std::string& why) {
    if (ok) detail << "first failure: " << why;
    ok = false;
  }
};

int failures = 0;

void report(int id, const std::string& title, const std::function<void(Check&)>& body) {
  Check c;
  auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.fail(std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!c.ok) ++failures;
  std::cout << (c.ok ? "[PASS] " : "[FAIL] ") << id << ". " << title << " (" << secs << " s): " << c.detail.str()
            << std::endl;
}

std::string describe(const ExchangeGraph& g) { return graph_to_json(g).dump(); }

constexpr std::uint64_t kFallbackSamples = 100000;

}  // namespace

int main() {
  const auto family = oracle::backbone_family();
  std::cout << "backbone family: " << family.size() << " graphs" << std::endl;

  report(1, "successful graphs have no infeasible session", [&](Check& c) {
    std::size_t successful = 0, exact = 0, sampled = 0;
    for (const auto& g : family) {
      if (!check_success(g).successful) continue;
      ++successful;
      try {
        auto s = enumerate_sessions(g);
        ++exact;
        if (s.infeasible_count != 0) c.fail(describe(g) + " has " + std::to_string(s.infeasible_count) + " infeasible");
      } catch (const LimitExceeded&) {
        ++sampled;
        auto s = sample_sessions(g, kFallbackSamples, 1);
        if (s.infeasible_count != 0) c.fail(describe(g) + " sampled an infeasible session");
      }
    }
    if (successful == 0) c.fail("no successful graph in the family");
    c.detail << successful << " successful graphs, " << exact << " enumerated exactly, " << sampled << " sampled";
  });

  report(2, "unsuccessful graphs have a replayable infeasible witness", [&](Check& c) {
    std::size_t unsuccessful = 0;
    for (const auto& g : family) {
      if (check_success(g).successful) continue;
      ++unsuccessful;
      auto w = find_infeasible_witness(g);
      if (!w) {
        c.fail(describe(g) + " has no witness");
        continue;
      }
      validate_ordering(g, *w);
      auto out = run_session(g, *w);
      bool positive = false;
      for (const auto& u : out.unmet) positive = positive || u.is_positive();
      if (!positive || out.feasible) c.fail(describe(g) + " witness replays feasibly");
    }
    c.detail << unsuccessful << " unsuccessful graphs, each with a witness";
  });

  report(3, "success counts for one, two and eight added links", [&](Check& c) {
    ExperimentConfig config;
    config.sampling.enabled = false;
    auto result = run_experiment(config);
    auto per_k = summarize_by_k(result);
    auto count = [&](std::size_t k) -> const KSummary& {
      for (const auto& s : per_k)
        if (s.k == k) return s;
      throw std::runtime_error("missing k=" + std::to_string(k));
    };
    const auto& k1 = count(1);
    const auto& k2 = count(2);
    const auto& k8 = count(8);
    if (k1.graphs != 8 || k1.successful != 0) c.fail("k=1 expected 0 of 8");
    if (k2.graphs != 28 || k2.successful != 1) c.fail("k=2 expected 1 of 28");
    if (k8.graphs != 1 || k8.successful != 1) c.fail("k=8 expected the complete graph to succeed");

    for (const auto& row : result.rows) {
      if (row.k != 2 || !row.successful) continue;
      auto g = config.base_graph.with_links(row.added_links);
      auto cs = components(g);
      std::vector<std::pair<std::size_t, std::size_t>> shape;
      for (const auto& comp : cs) {
        if (!is_complete_bipartite(comp, g)) c.fail("successful k=2 component is not complete");
        shape.emplace_back(comp.buyers.size(), comp.sellers.size());
      }
      std::sort(shape.begin(), shape.end());
      std::vector<std::pair<std::size_t, std::size_t>> want{{2, 1}, {2, 2}};
      if (shape != want) c.fail("successful k=2 graph is not K21 + K22");
      c.detail << "k=2 successful graph adds " << link_list_text(row.added_links, g) << "; ";
    }
    for (const auto& row : result.rows)
      if (row.k == 8) {
        auto g = config.base_graph.with_links(row.added_links);
        auto cs = components(g);
        if (cs.size() != 1 || cs[0].buyers.size() != 4 || cs[0].sellers.size() != 3 || !is_complete_bipartite(cs[0], g))
          c.fail("k=8 graph is not K43");
        if (!row.exact || row.infeasible_count != 0) c.fail("k=8 graph has infeasible sessions");
      }
    c.detail << "k=1: " << k1.successful << "/" << k1.graphs << ", k=2: " << k2.successful << "/" << k2.graphs
             << ", k=8: " << k8.successful << "/" << k8.graphs;
  });

  report(4, "star instances and the seller reserve", [&](Check& c) {
    const Quantity d(1);
    for (std::size_t nb : {2u, 3u, 4u}) {
      Quantity full(static_cast<long long>(nb));
      auto reserved = star_instance(nb, d, full);
      auto s = enumerate_sessions(reserved);
      if (s.infeasible_count != 0) c.fail("n_b=" + std::to_string(nb) + " with full reserve has infeasible sessions");

      auto short_by_half = star_instance(nb, d, full - Quantity(1, 2));
      auto w = find_infeasible_witness(short_by_half);
      if (!w || run_session(short_by_half, *w).feasible)
        c.fail("n_b=" + std::to_string(nb) + " short by 1/2 has no infeasible witness");

      auto plain = star_instance(nb, d, d);
      auto m = max_unmet_demand(plain);
      if (m.value != d) c.fail("n_b=" + std::to_string(nb) + " max unmet is " + m.value.str());
      if (!verify_allocation(plain, m.witness, AllocationKind::Stalled).empty())
        c.fail("n_b=" + std::to_string(nb) + " max unmet witness is not a valid stalled allocation");
      c.detail << "n_b=" << nb << ": " << s.total_orderings << " sessions all feasible, witness of length "
               << (w ? w->size() : 0) << ", max unmet " << m.value.str() << "; ";
    }
  });

  report(5, "max-flow feasibility agrees with the exact LP", [&](Check& c) {
    std::size_t feasible = 0;
    for (const auto& g : family) {
      auto lp = feasibility_program(g);
      auto res = solver::solve_lp(lp);
      auto flow = feasibility(g);
      bool lp_ok = res.status == solver::LpStatus::Optimal;
      if (lp_ok != flow.has_value()) {
        c.fail(describe(g) + " max-flow and LP disagree");
        continue;
      }
      if (!lp_ok) continue;
      ++feasible;
      if (!lp.satisfied_by(res.point)) c.fail(describe(g) + " LP point violates its own system");
      auto from_lp = allocation_from_dense(g, res.point);
      for (const auto* a : {&*flow, &from_lp}) {
        auto v = verify_allocation(g, *a, AllocationKind::Feasible);
        if (!v.empty()) c.fail(describe(g) + " allocation violates: " + v.front());
      }
      std::vector<Rational> dense;
      for (const auto& row : flow->transactions)
        for (const auto& t : row) dense.push_back(t.value());
      if (!lp.satisfied_by(dense)) c.fail(describe(g) + " max-flow allocation violates the LP system");
    }
    c.detail << family.size() << " graphs, " << feasible << " feasible by both methods";
  });

  report(6, "worst-case allocation bounds every session", [&](Check& c) {
    std::size_t compared = 0, gaps = 0;
    std::ostringstream gap_log;
    for (const auto& g : family) {
      EnumerationSummary s;
      try {
        s = enumerate_sessions(g);
      } catch (const LimitExceeded&) {
        continue;
      }
      ++compared;
      auto m = max_unmet_demand(g);
      if (m.value < s.max_total_unmet) c.fail(describe(g) + " bound " + m.value.str() + " below " + s.max_total_unmet.str());
      if (!verify_allocation(g, m.witness, AllocationKind::Stalled).empty())
        c.fail(describe(g) + " bound witness is not a valid stalled allocation");
      if (m.value > s.max_total_unmet) {
        if (gaps < 5)
          gap_log << " [L=" << g.link_count() << " bound " << m.value.str() << " vs sessions " << s.max_total_unmet.str() << "]";
        ++gaps;
      }
    }
    c.detail << compared << " graphs compared, " << gaps << " strict gaps" << gap_log.str();
  });

  report(7, "memoized counts match all-permutation counts", [&](Check& c) {
    std::size_t compared = 0;
    auto compare = [&](const ExchangeGraph& g) {
      auto s = enumerate_sessions(g);
      auto b = oracle::all_permutations(g);
      ++compared;
      if (s.total_orderings != b.total || s.infeasible_count != b.infeasible || s.max_total_unmet != b.max_total_unmet ||
          s.max_buyer_unmet != b.max_buyer_unmet)
        c.fail(describe(g));
    };
    for (const auto& g : family)
      if (g.link_count() <= 6) compare(g);
    for (const auto& g : oracle::backbone_family(BudgetProfile::unit()))
      if (g.link_count() <= 6) compare(g);
    for (std::size_t nb : {2u, 3u}) compare(star_instance(nb, Quantity(1), Quantity(1)));
    std::mt19937_64 rng(20240607);
    for (int i = 0; i < 300; ++i) compare(oracle::random_graph(rng, 4, 4, 6, i % 2 == 0, i % 3 == 0));
    c.detail << compared << " graphs compared";
  });

  report(8, "experiment output is byte-identical across runs", [&](Check& c) {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / ("exnet_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto run_once = [&](const std::string& tag, unsigned jobs) {
      ExperimentConfig config;
      config.jobs = jobs;
      config.sampling.samples = 2000;
      config.csv_path = (dir / (tag + ".csv")).string();
      config.json_path = (dir / (tag + ".json")).string();
      auto r = run_experiment(config);
      emit_results(r, config, OutputFormat::Csv, config.csv_path);
      emit_results(r, config, OutputFormat::Json, config.json_path);
    };
    auto slurp = [](const fs::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    unsigned par = std::max(2u, std::thread::hardware_concurrency());
    run_once("a", 1);
    run_once("b", 1);
    run_once("c", par);
    for (const char* ext : {".csv", ".json"}) {
      auto a = slurp(dir / (std::string("a") + ext));
      if (a.empty()) c.fail(std::string("empty output ") + ext);
      if (a != slurp(dir / (std::string("b") + ext))) c.fail(std::string("repeat run differs in ") + ext);
      if (a != slurp(dir / (std::string("c") + ext))) c.fail(std::string("parallel run differs in ") + ext);
    }
    auto g = star_instance(4, Quantity(1), Quantity(1));
    auto s1 = sample_sessions(g, 5000, 9), s2 = sample_sessions(g, 5000, 9);
    if (s1.infeasible_count != s2.infeasible_count) c.fail("seeded sampling is not reproducible");
    auto bytes = fs::file_size(dir / "a.csv") + fs::file_size(dir / "a.json");
    fs::remove_all(dir);
    c.detail << "three runs (jobs 1, 1, " << par << "), " << bytes << " bytes each";
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
