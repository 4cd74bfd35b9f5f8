// Command-line front end: build-list, simulate, lowerbound, bench, verify.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seqtest/batched.hpp"
#include "seqtest/bench.hpp"
#include "seqtest/core.hpp"
#include "seqtest/exdshe.hpp"
#include "seqtest/io.hpp"
#include "seqtest/knapsack.hpp"
#include "seqtest/lowerbound.hpp"
#include "seqtest/oracles.hpp"
#include "seqtest/policy.hpp"
#include "seqtest/simulate.hpp"

using namespace seqtest;

namespace {

struct GlobalOptions {
  std::uint64_t seed = 1;
  double epsilon = 0.15;
  double capital_c = 2.0;
  std::string mode = "practical";
  std::string output;
};

PolicyConfig policy_of(const GlobalOptions& g) {
  return {g.epsilon, g.capital_c, parse_mode(g.mode)};
}

// Writes to --output when given, stdout otherwise.
void emit(const GlobalOptions& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.output);
  if (!out) throw std::runtime_error(g.output + ": cannot open for writing");
  out << text;
  if (!out) throw std::runtime_error(g.output + ": write failed");
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::vector<Realization> realization_source(std::size_t n,
                                            std::span<const Item> items,
                                            const std::string& file,
                                            std::size_t count,
                                            std::uint64_t seed,
                                            const Reduction* reduction) {
  std::vector<Realization> xs;
  if (!file.empty()) {
    xs = realizations_from_json(read_json_file(file), n);
    if (reduction) {
      for (auto& x : xs) x = reduction->map(x);
    }
    return xs;
  }
  for (std::size_t r = 0; r < count; ++r) {
    Rng rng(realization_seed(seed, r));
    xs.push_back(sample_realization(items, rng));
  }
  return xs;
}

// ---------------------------------------------------------------- verify

struct Suite {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures++ == 0) first_failure = what;
  }
};

std::vector<Item> random_items(Rng& rng, std::size_t n, int max_weight) {
  std::vector<Item> items(n);
  for (Item& it : items) {
    it.cost = static_cast<double>(rng.between(1, 10));
    it.prob = static_cast<double>(rng.between(0, 10)) / 10.0;
    it.weight = rng.between(0, max_weight);
  }
  return items;
}

SscInstance random_instance(Rng& rng, std::size_t n) {
  auto items = random_items(rng, n, 5);
  std::int64_t w = 0;
  for (const Item& it : items) w += it.weight;
  const int classes = static_cast<int>(
      rng.between(1, std::clamp<std::int64_t>(w, 1, 4)));
  return SscInstance(items, generate_alphas(w, classes, rng));
}

void check_ssclass(Suite& s, const SscInstance& inst, const PolicyConfig& cfg) {
  const auto list = build_list(inst, cfg);
  s.expect(is_complete(list, inst.size()), "list is not a permutation");
  const std::size_t n = inst.size();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    const Realization x = oracle::realization_from_mask(n, m);
    const RunResult run = run_list(inst, list, x);
    s.expect(run.outcome == classify(inst, x), "wrong class");
    s.expect(run.probes == oracle::minimal_prefix(inst, list.order, x),
             "stopped after a non-minimal prefix");
    const double lb = realization_lb(inst, x);
    s.expect(std::abs(lb - oracle::lower_bound_by_enumeration(inst, x)) < 1e-9,
             "lower bound differs from enumeration");
    s.expect(lb <= run.cost() + 1e-9, "lower bound above incurred cost");
  }
  const double dp = exact_expected_cost<double>(inst, list);
  const double brute = oracle::enumerated_expected_cost(inst, list.order);
  s.expect(std::abs(dp - brute) <= 1e-9 * (1.0 + brute),
           "exact expected cost differs from enumeration");
}

void check_system(Suite& s, const HalfspaceSystem& sys, const PolicyConfig& cfg) {
  const auto list = build_list_exdshe(sys, cfg);
  const std::size_t n = sys.size();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    const Realization x = oracle::realization_from_mask(n, m);
    const RunResult run = simulate_until_witness(sys, list, x);
    const Witness& w = *run.witness;
    s.expect(verify_witness(sys, w.probed, w.values, w.halfspaces),
             "witness rejected by the verifier");
    const auto brute =
        oracle::witness_by_enumeration(sys, w.probed, w.values, w.halfspaces);
    s.expect(brute.has_value() && *brute == w.value,
             "witness rejected by enumeration");
    s.expect(w.value == sys.value(x), "wrong aggregate value");
  }
}

int run_verify(const GlobalOptions& g, const std::string& data_dir) {
  const PolicyConfig cfg = policy_of(g);
  std::vector<Suite> suites;

  {
    Suite s{"bundled instance fig1.json"};
    const auto red = load_instance(data_dir + "/fig1.json");
    check_ssclass(s, red.instance, cfg);
    suites.push_back(s);
  }
  {
    Suite s{"bundled system halfspaces.json"};
    check_system(s, load_system(data_dir + "/halfspaces.json"), cfg);
    suites.push_back(s);
  }
  Rng rng(derive_seed(g.seed, {0x76657269ULL}));
  {
    Suite s{"knapsack LP vs enumeration"};
    for (int t = 0; t < 300; ++t) {
      std::vector<KnapItem<double>> items(rng.between(0, 6));
      int id = 0;
      for (auto& it : items) {
        it = {id++, static_cast<double>(rng.between(0, 20)),
              static_cast<double>(rng.between(1, 10))};
      }
      const double d = static_cast<double>(rng.between(0, 40));
      const auto res = solve_fractional(items, d);
      const double brute = oracle::lp_optimum<double>(items, d);
      s.expect(std::abs(res.lp_value - brute) < 1e-9, "LP value mismatch");
    }
    suites.push_back(s);
  }
  {
    Suite s{"random instances n <= 8"};
    for (int t = 0; t < 40; ++t) {
      check_ssclass(s, random_instance(rng, rng.between(1, 8)), cfg);
    }
    suites.push_back(s);
  }
  {
    Suite s{"negative-weight reduction"};
    for (int t = 0; t < 40; ++t) {
      auto items = random_items(rng, rng.between(1, 6), 4);
      std::int64_t lo = 0;
      std::int64_t hi = 0;
      for (Item& it : items) {
        if (rng.below(2)) it.weight = -it.weight;
        (it.weight < 0 ? lo : hi) += it.weight;
      }
      std::vector<std::int64_t> alphas{lo};
      if (hi > lo + 1) alphas.push_back(rng.between(lo + 1, hi));
      alphas.push_back(hi + 1);
      const auto red = reduce_negative_weights(items, alphas);
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << items.size()); ++m) {
        const Realization x = oracle::realization_from_mask(items.size(), m);
        std::int64_t raw = 0;
        for (std::size_t i = 0; i < items.size(); ++i) {
          if (x[i]) raw += items[i].weight;
        }
        int expect = 0;
        for (std::size_t j = 1; j + 1 < alphas.size(); ++j) {
          if (raw >= alphas[j]) expect = static_cast<int>(j);
        }
        s.expect(classify(red.instance, red.map(x)) == expect,
                 "class changed under the reduction");
      }
    }
    suites.push_back(s);
  }
  {
    Suite s{"batched accounting"};
    for (int t = 0; t < 60; ++t) {
      const SscInstance inst = random_instance(rng, rng.between(1, 8));
      const auto list = build_list(inst, cfg);
      const double rho = static_cast<double>(rng.between(0, 40));
      const auto policy = make_batched_policy(list, rho, inst.min_cost());
      Rng xr(rng.next());
      const Realization x = sample_realization(inst.items(), xr);
      const RunResult run = run_batched(inst, list, policy, x);
      double tested = 0.0;
      for (std::size_t k = 0; k < run.probes; ++k) {
        tested += inst.item(list.order[k]).cost;
      }
      s.expect(run.cost() == run.batches * rho + tested, "cost identity");
      s.expect(run.outcome == classify(inst, x), "batched class");
    }
    suites.push_back(s);
  }

  bool ok = true;
  for (const Suite& s : suites) {
    std::printf("%s %-34s %8zu checks", s.failures ? "FAIL" : "PASS",
                s.name.c_str(), s.checks);
    if (s.failures) {
      std::printf(", %zu failed (first: %s)", s.failures,
                  s.first_failure.c_str());
      ok = false;
    }
    std::printf("\n");
  }
  std::printf("%s\n", ok ? "all oracle suites passed" : "oracle failures");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-adaptive sequential testing policies"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--seed", g.seed, "Base seed");
  app.add_option("--epsilon", g.epsilon, "Stochastic knapsack epsilon");
  app.add_option("--capital-c", g.capital_c, "Budget multiplier C");
  app.add_option("--mode", g.mode, "practical or theory")
      ->check(CLI::IsMember({"practical", "theory"}));
  app.add_option("--output", g.output, "Output file (bench: directory)");
  app.fallthrough();

  std::string input;
  std::string list_file;
  std::string realization_file;
  std::size_t realizations = 50;
  bool batched = false;
  std::optional<double> setup_cost;
  std::string data_dir = SEQTEST_DATA_DIR;

  auto* build = app.add_subcommand("build-list", "Instance or system -> list JSON");
  build->add_option("file", input, "Instance or system JSON")->required();

  auto* sim = app.add_subcommand("simulate", "Run a list -> per-realization CSV");
  sim->add_option("file", input, "Instance or system JSON")->required();
  sim->add_option("--list", list_file, "List JSON (built when omitted)");
  sim->add_option("--realizations", realizations, "Sampled realizations");
  sim->add_option("--realization-file", realization_file,
                  "JSON array of 0/1 arrays instead of sampling");
  sim->add_flag("--batched", batched, "Phase-batched execution");
  sim->add_option("--setup-cost", setup_cost, "Override the setup cost");

  auto* lb = app.add_subcommand("lowerbound", "Per-realization lower bounds -> CSV");
  lb->add_option("file", input, "Instance JSON")->required();
  lb->add_option("--realizations", realizations, "Sampled realizations");
  lb->add_option("--realization-file", realization_file,
                 "JSON array of 0/1 arrays instead of sampling");
  lb->add_flag("--batched", batched, "Add the setup cost to positive bounds");

  auto* bench = app.add_subcommand("bench", "Config TOML -> CSV reports");
  bench->add_option("config", input, "Experiment config")->required();

  auto* verify = app.add_subcommand("verify", "Run the exhaustive oracles");
  verify->add_option("--data-dir", data_dir, "Bundled instances");

  CLI11_PARSE(app, argc, argv);

  try {
    const PolicyConfig cfg = policy_of(g);
    if (*build) {
      const auto doc = read_json_file(input);
      const NonAdaptiveList list =
          is_system_document(doc)
              ? build_list_exdshe(system_from_json(doc), cfg)
              : build_list(instance_from_json(doc).instance, cfg);
      emit(g, list_to_json(list).dump(2) + "\n");
      return 0;
    }
    if (*sim) {
      const auto doc = read_json_file(input);
      std::ostringstream out;
      out << "realization,probes,testing_cost,setup_cost,batches,final_batch,"
             "outcome,cost,lower_bound\n";
      CompensatedSum total;
      std::size_t count = 0;
      auto row = [&](std::size_t r, const RunResult& run, double bound) {
        out << r << ',' << run.probes << ',' << num(run.testing_cost) << ','
            << num(run.setup_cost) << ',' << run.batches << ','
            << run.final_batch << ',' << run.outcome << ',' << num(run.cost())
            << ',' << num(bound) << '\n';
        total.add(run.cost());
        ++count;
      };
      if (is_system_document(doc)) {
        const HalfspaceSystem sys = system_from_json(doc);
        const double rho = setup_cost.value_or(sys.setup_cost());
        const NonAdaptiveList list =
            list_file.empty() ? build_list_exdshe(sys, cfg)
                              : list_from_json(read_json_file(list_file));
        const auto xs = realization_source(sys.size(), sys.items(),
                                           realization_file, realizations,
                                           g.seed, nullptr);
        const auto policy = make_batched_policy(list, rho, sys.min_cost());
        for (std::size_t r = 0; r < xs.size(); ++r) {
          row(r, batched ? run_batched(sys, list, policy, xs[r])
                         : simulate_until_witness(sys, list, xs[r]),
              std::nan(""));
        }
      } else {
        const Reduction red = instance_from_json(doc);
        const double rho = setup_cost.value_or(red.instance.setup_cost());
        const NonAdaptiveList list =
            list_file.empty() ? build_list(red.instance, cfg)
                              : list_from_json(read_json_file(list_file));
        const auto xs = realization_source(red.instance.size(),
                                           red.instance.items(),
                                           realization_file, realizations,
                                           g.seed, &red);
        const auto policy =
            make_batched_policy(list, rho, red.instance.min_cost());
        for (std::size_t r = 0; r < xs.size(); ++r) {
          double bound = realization_lb(red.instance, xs[r]);
          if (batched && bound > 0.0) bound += rho;
          row(r, batched ? run_batched(red.instance, list, policy, xs[r])
                         : run_list(red.instance, list, xs[r]),
              bound);
        }
      }
      emit(g, out.str());
      if (count > 0) {
        std::fprintf(stderr, "%zu realizations, mean cost %.6g\n", count,
                     total.value() / static_cast<double>(count));
      }
      return 0;
    }
    if (*lb) {
      const Reduction red = load_instance(input);
      const auto xs = realization_source(red.instance.size(),
                                         red.instance.items(), realization_file,
                                         realizations, g.seed, &red);
      std::ostringstream out;
      out << "realization,class,lower_bound\n";
      CompensatedSum total;
      for (std::size_t r = 0; r < xs.size(); ++r) {
        const auto detail = realization_lb_detail(red.instance, xs[r]);
        double bound = detail.value;
        if (batched && bound > 0.0) bound += red.instance.setup_cost();
        total.add(bound);
        out << r << ',' << detail.klass << ',' << num(bound) << '\n';
      }
      const double mean =
          xs.empty() ? 0.0 : total.value() / static_cast<double>(xs.size());
      out << "mean,," << num(mean) << '\n';
      emit(g, out.str());
      return 0;
    }
    if (*bench) {
      ExperimentConfig config = load_config(input);
      if (app.count("--seed")) config.seed = g.seed;
      if (app.count("--epsilon")) config.policy.epsilon = g.epsilon;
      if (app.count("--capital-c")) config.policy.capital_c = g.capital_c;
      if (app.count("--mode")) config.policy.mode = parse_mode(g.mode);
      if (!g.output.empty()) config.output_dir = g.output;
      const BenchReport report = run_experiment(config);
      const auto paths = write_report(config, report);
      std::cout << table_text(report);
      for (const auto& p : paths) std::cout << "wrote " << p.string() << '\n';
      return 0;
    }
    if (*verify) return run_verify(g, data_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
