#include "seqtest/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <toml.hpp>

#include "seqtest/batched.hpp"
#include "seqtest/io.hpp"
#include "seqtest/lowerbound.hpp"
#include "seqtest/simulate.hpp"

namespace seqtest {

namespace {

constexpr std::uint64_t kItemsTag = 0x6974656DULL;
constexpr std::uint64_t kCutTag = 0x63757473ULL;
constexpr std::uint64_t kRealTag = 0x7265616CULL;
constexpr std::uint64_t kRandTag = 0x72616E64ULL;
constexpr std::uint64_t kHalfTag = 0x68616C66ULL;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Aggregator parse_bench_aggregator(const std::string& spec) {
  if (spec == "AND" || spec == "and") return Aggregator::all_of();
  if (spec == "OR" || spec == "or") return Aggregator::any_of();
  const std::string prefix = "at_least:";
  if (spec.rfind(prefix, 0) == 0) {
    try {
      return Aggregator::at_least(std::stoi(spec.substr(prefix.size())));
    } catch (const std::logic_error&) {
    }
  }
  throw ParameterError("aggregator must be \"AND\", \"OR\" or \"at_least:p\", got \"" +
                       spec + "\"");
}

// toml helpers: each reports the key and line of a bad value
[[noreturn]] void bad_key(const std::filesystem::path& path,
                          const toml::node& node, const std::string& key,
                          const std::string& what) {
  throw ParseError(path.string() + ":" +
                   std::to_string(node.source().begin.line) + ": key \"" +
                   key + "\": " + what);
}

std::vector<int> int_list(const std::filesystem::path& path,
                          const toml::node& node, const std::string& key) {
  std::vector<int> out;
  if (auto v = node.value<std::int64_t>()) {
    out.push_back(static_cast<int>(*v));
    return out;
  }
  const auto* arr = node.as_array();
  if (!arr) bad_key(path, node, key, "expected an integer or an array");
  for (const auto& el : *arr) {
    auto v = el.value<std::int64_t>();
    if (!v) bad_key(path, el, key, "expected integers");
    out.push_back(static_cast<int>(*v));
  }
  return out;
}

std::vector<double> real_list(const std::filesystem::path& path,
                              const toml::node& node, const std::string& key) {
  std::vector<double> out;
  if (auto v = node.value<double>()) {
    out.push_back(*v);
    return out;
  }
  const auto* arr = node.as_array();
  if (!arr) bad_key(path, node, key, "expected a number or an array");
  for (const auto& el : *arr) {
    auto v = el.value<double>();
    if (!v) bad_key(path, el, key, "expected numbers");
    out.push_back(*v);
  }
  return out;
}

template <class T>
T scalar(const std::filesystem::path& path, const toml::node& node,
         const std::string& key) {
  auto v = node.value<T>();
  if (!v) bad_key(path, node, key, "wrong value type");
  return *v;
}

struct Stats {
  CompensatedSum cost;
  CompensatedSum cost_sq;
  CompensatedSum lb;
};

NonAdaptiveList random_list_like(std::size_t n, std::uint64_t seed,
                                 const NonAdaptiveList* shape) {
  NonAdaptiveList list = random_baseline(n, seed);
  if (shape) list.phases = shape->phases;
  return list;
}

}  // namespace

std::string type_name(InstanceType type) {
  switch (type) {
    case InstanceType::she: return "she";
    case InstanceType::unweighted: return "unweighted";
    case InstanceType::weighted: return "weighted";
    case InstanceType::exdshe: return "exdshe";
    case InstanceType::batched: return "batched";
  }
  return "weighted";
}

InstanceType parse_type(const std::string& name) {
  if (name == "she") return InstanceType::she;
  if (name == "unweighted") return InstanceType::unweighted;
  if (name == "weighted") return InstanceType::weighted;
  if (name == "exdshe") return InstanceType::exdshe;
  if (name == "batched") return InstanceType::batched;
  throw ParameterError("unknown instance type \"" + name + "\"");
}

void ExperimentConfig::validate() const {
  if (ns.empty()) throw ParameterError("n list is empty");
  for (int n : ns) {
    if (n < 1) throw ParameterError("n must be positive");
  }
  if (type == InstanceType::she) {
    for (int b : bs) {
      if (b != 2) throw ParameterError("she instances have exactly B = 2");
    }
  } else if (type != InstanceType::exdshe) {
    if (bs.empty()) throw ParameterError("B list is empty");
    for (int b : bs) {
      if (b < 1) throw ParameterError("B must be positive");
    }
  }
  if (instances < 1) throw ParameterError("instances must be positive");
  if (realizations < 0) throw ParameterError("realizations must be >= 0");
  if (algorithms.empty()) throw ParameterError("no algorithms selected");
  for (const auto& a : algorithms) {
    if (a != "ours" && a != "random") {
      throw ParameterError("unknown algorithm \"" + a + "\"");
    }
  }
  if (type == InstanceType::exdshe) {
    if (d < 1) throw ParameterError("d must be positive");
    parse_bench_aggregator(aggregator).check_arity(d);
  }
  for (double rho : setup_costs) {
    if (!(rho >= 0.0) || !std::isfinite(rho)) {
      throw ParameterError("setup costs must be nonnegative and finite");
    }
  }
  const double eps = type == InstanceType::exdshe ? policy.epsilon / d
                                                  : policy.epsilon;
  check_stochknap_params(1.0, eps, effective_capital_c(policy, eps),
                         policy.mode);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  toml::table doc;
  try {
    doc = toml::parse_file(path.string());
  } catch (const toml::parse_error& e) {
    throw ParseError(path.string() + ":" +
                     std::to_string(e.source().begin.line) + ": " +
                     std::string(e.description()));
  }
  ExperimentConfig cfg;
  bool saw_b = false;
  for (const auto& [k, node] : doc) {
    const std::string key(k.str());
    if (key == "type") {
      cfg.type = parse_type(scalar<std::string>(path, node, key));
    } else if (key == "n") {
      cfg.ns = int_list(path, node, key);
    } else if (key == "B") {
      cfg.bs = int_list(path, node, key);
      saw_b = true;
    } else if (key == "instances") {
      cfg.instances = static_cast<int>(scalar<std::int64_t>(path, node, key));
    } else if (key == "realizations") {
      cfg.realizations = static_cast<int>(scalar<std::int64_t>(path, node, key));
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(scalar<std::int64_t>(path, node, key));
    } else if (key == "algorithms") {
      const auto* arr = node.as_array();
      if (!arr) bad_key(path, node, key, "expected an array of strings");
      cfg.algorithms.clear();
      for (const auto& el : *arr) {
        cfg.algorithms.push_back(scalar<std::string>(path, el, key));
      }
    } else if (key == "epsilon") {
      cfg.policy.epsilon = scalar<double>(path, node, key);
    } else if (key == "capital_c") {
      cfg.policy.capital_c = scalar<double>(path, node, key);
    } else if (key == "mode") {
      cfg.policy.mode = parse_mode(scalar<std::string>(path, node, key));
    } else if (key == "d") {
      cfg.d = static_cast<int>(scalar<std::int64_t>(path, node, key));
    } else if (key == "aggregator") {
      cfg.aggregator = scalar<std::string>(path, node, key);
    } else if (key == "setup_cost") {
      cfg.setup_costs = real_list(path, node, key);
    } else if (key == "output_dir") {
      cfg.output_dir = scalar<std::string>(path, node, key);
    } else if (key == "name") {
      cfg.name = scalar<std::string>(path, node, key);
    } else {
      bad_key(path, node, key, "unknown key");
    }
  }
  if (cfg.type == InstanceType::she && !saw_b) cfg.bs = {2};
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return cfg;
}

std::vector<Item> generate_items(InstanceType type, int n, Rng& rng) {
  std::vector<Item> items(static_cast<std::size_t>(n));
  for (Item& it : items) {
    it.prob = rng.uniform_open();
    it.cost = static_cast<double>(rng.between(10, 100));
    it.weight = type == InstanceType::unweighted ? 1 : rng.between(1, 10);
  }
  return items;
}

std::vector<std::int64_t> generate_alphas(std::int64_t total_weight,
                                          int classes, Rng& rng) {
  if (classes < 1) throw InvalidInstance("need at least one class");
  const std::int64_t interior = classes - 1;
  if (interior > 0 && interior > total_weight - 1) {
    throw InvalidInstance(std::to_string(interior) +
                          " distinct cutoffs do not fit in 1.." +
                          std::to_string(total_weight - 1));
  }
  std::vector<std::int64_t> cuts;
  cuts.reserve(interior);
  while (static_cast<std::int64_t>(cuts.size()) < interior) {
    const std::int64_t c = rng.between(1, total_weight - 1);
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::int64_t> alphas{0};
  alphas.insert(alphas.end(), cuts.begin(), cuts.end());
  alphas.push_back(total_weight + 1);
  return alphas;
}

std::uint64_t items_seed(std::uint64_t seed, int n, int index) {
  return derive_seed(seed, {kItemsTag, static_cast<std::uint64_t>(n),
                            static_cast<std::uint64_t>(index)});
}

std::uint64_t cutoff_seed(std::uint64_t seed, int n, int index, int classes) {
  return derive_seed(seed, {kCutTag, static_cast<std::uint64_t>(n),
                            static_cast<std::uint64_t>(index),
                            static_cast<std::uint64_t>(classes)});
}

namespace {

SscInstance base_instance(const ExperimentConfig& config, int n, int index) {
  Rng rng(items_seed(config.seed, n, index));
  auto items = generate_items(config.type, n, rng);
  std::int64_t w = 0;
  for (const Item& it : items) w += it.weight;
  return SscInstance(std::move(items), {0, w + 1});
}

SscInstance with_cutoffs(const ExperimentConfig& config, const SscInstance& base,
                         int n, int b, int index) {
  Rng rng(cutoff_seed(config.seed, n, index, b));
  return base.with_alphas(generate_alphas(base.total_weight(), b, rng));
}

}  // namespace

SscInstance generate_instance(const ExperimentConfig& config, int n, int b,
                              int index) {
  return with_cutoffs(config, base_instance(config, n, index), n, b, index);
}

HalfspaceSystem generate_system(const ExperimentConfig& config, int n,
                                int index) {
  Rng rng(items_seed(config.seed, n, index));
  auto items = generate_items(InstanceType::weighted, n, rng);
  Rng hrng(derive_seed(config.seed, {kHalfTag, static_cast<std::uint64_t>(n),
                                     static_cast<std::uint64_t>(index)}));
  std::vector<Halfspace> halfspaces(static_cast<std::size_t>(config.d));
  for (Halfspace& h : halfspaces) {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    h.weights.resize(items.size());
    for (auto& w : h.weights) {
      w = hrng.between(1, 10);
      if (hrng.below(2) == 1) w = -w;
      (w < 0 ? lo : hi) += w;
    }
    // threshold strictly above the minimum score so both values are possible
    h.alpha = hrng.between(lo + 1, hi);
  }
  return HalfspaceSystem(std::move(items), std::move(halfspaces),
                         parse_bench_aggregator(config.aggregator));
}

BenchReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  BenchReport report;
  if (config.realizations == 0) return report;
  const bool halfspaces = config.type == InstanceType::exdshe;
  const bool batched = config.type == InstanceType::batched;
  const std::vector<double> rhos =
      batched ? config.setup_costs : std::vector<double>{0.0};
  const std::size_t reps = static_cast<std::size_t>(config.realizations);

  for (int n : config.ns) {
    for (int index = 0; index < config.instances; ++index) {
      const std::uint64_t real_stream =
          derive_seed(config.seed, {kRealTag, static_cast<std::uint64_t>(n),
                                    static_cast<std::uint64_t>(index)});
      const std::uint64_t rand_seed =
          derive_seed(config.seed, {kRandTag, static_cast<std::uint64_t>(n),
                                    static_cast<std::uint64_t>(index)});
      std::optional<HalfspaceSystem> system;
      std::optional<SscInstance> base;
      if (halfspaces) {
        system = generate_system(config, n, index);
      } else {
        base = base_instance(config, n, index);
      }
      const std::span<const Item> items =
          halfspaces ? system->items() : base->items();

      // one list per algorithm, shared by every B and rho of this instance
      std::vector<NonAdaptiveList> lists;
      std::vector<double> build_seconds;
      std::optional<NonAdaptiveList> ours_shape;
      for (const auto& algo : config.algorithms) {
        const auto start = Clock::now();
        if (algo == "ours") {
          lists.push_back(halfspaces ? build_list_exdshe(*system, config.policy)
                                     : build_list(*base, config.policy));
          ours_shape = lists.back();
        } else {
          lists.push_back(random_baseline(items.size(), rand_seed));
        }
        build_seconds.push_back(seconds_since(start));
        ++report.list_builds;
      }
      if (batched) {
        // the random order reuses the phase boundaries of ours (or one phase)
        if (!ours_shape) ours_shape = build_list(*base, config.policy);
        for (std::size_t a = 0; a < lists.size(); ++a) {
          if (config.algorithms[a] == "random") {
            lists[a] = random_list_like(items.size(), rand_seed, &*ours_shape);
          }
        }
      }

      std::vector<Realization> xs;
      xs.reserve(reps);
      for (std::size_t r = 0; r < reps; ++r) {
        Rng rng(realization_seed(real_stream, r));
        xs.push_back(sample_realization(items, rng));
      }

      const std::vector<int> bs =
          halfspaces ? std::vector<int>{config.d} : config.bs;
      for (int b : bs) {
        std::optional<SscInstance> inst;
        std::vector<double> lbs;
        if (!halfspaces) {
          inst = with_cutoffs(config, *base, n, b, index);
          lbs.reserve(reps);
          for (const auto& x : xs) lbs.push_back(realization_lb(*inst, x));
        }
        for (double rho : rhos) {
          for (std::size_t a = 0; a < lists.size(); ++a) {
            ++report.list_uses;
            const NonAdaptiveList& list = lists[a];
            std::optional<BatchedPolicy> policy;
            if (batched) {
              policy = make_batched_policy(list, rho, inst->min_cost());
            }
            Stats st;
            const auto start = Clock::now();
            for (std::size_t r = 0; r < reps; ++r) {
              RunResult run;
              if (halfspaces) {
                run = simulate_until_witness(*system, list, xs[r]);
              } else if (policy) {
                run = run_batched(*inst, list, *policy, xs[r]);
              } else {
                run = run_list(*inst, list, xs[r]);
              }
              st.cost.add(run.cost());
              st.cost_sq.add(run.cost() * run.cost());
              if (!halfspaces) {
                st.lb.add(lbs[r] + (batched && lbs[r] > 0.0 ? rho : 0.0));
              }
            }
            BenchRow row;
            row.simulate_seconds = seconds_since(start);
            row.build_seconds = build_seconds[a];
            row.type = type_name(config.type);
            row.n = n;
            row.b = b;
            row.setup_cost = rho;
            row.instance = index;
            row.algorithm = config.algorithms[a];
            row.realizations = config.realizations;
            const double count = static_cast<double>(reps);
            row.mean_cost = st.cost.value() / count;
            if (reps > 1) {
              const double var = std::max(
                  0.0, (st.cost_sq.value() - count * row.mean_cost * row.mean_cost) /
                           (count - 1.0));
              row.std_error = std::sqrt(var / count);
            }
            if (halfspaces) {
              row.lb_mean = std::nan("");
              row.ratio = std::nan("");
            } else {
              row.lb_mean = st.lb.value() / count;
              row.ratio = row.lb_mean > 0.0
                              ? row.mean_cost / row.lb_mean
                              : (row.mean_cost > 0.0 ? INFINITY : 1.0);
            }
            report.rows.push_back(std::move(row));
          }
        }
      }
    }
  }

  // aggregate in first-appearance order of (n, B, rho, algorithm)
  using Key = std::tuple<int, int, double, std::string>;
  std::map<Key, std::size_t> slot;
  std::vector<std::pair<CompensatedSum, int>> within;
  for (const BenchRow& row : report.rows) {
    const Key key{row.n, row.b, row.setup_cost, row.algorithm};
    auto [it, inserted] = slot.try_emplace(key, report.table.size());
    if (inserted) {
      AggregateRow agg;
      agg.type = row.type;
      agg.n = row.n;
      agg.b = row.b;
      agg.setup_cost = row.setup_cost;
      agg.algorithm = row.algorithm;
      report.table.push_back(agg);
      within.push_back({CompensatedSum{}, 0});
    }
    AggregateRow& agg = report.table[it->second];
    ++agg.instances;
    within[it->second].first.add(row.ratio);
    if (row.ratio <= 1.5) ++within[it->second].second;
  }
  for (std::size_t k = 0; k < report.table.size(); ++k) {
    AggregateRow& agg = report.table[k];
    agg.mean_ratio = within[k].first.value() / agg.instances;
    agg.share_within_1_5 =
        static_cast<double>(within[k].second) / agg.instances;
  }
  return report;
}

std::string rows_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "schema_version,type,n,B,setup_cost,instance,algorithm,realizations,"
         "mean_cost,std_error,lb_mean,ratio,build_seconds,simulate_seconds\n";
  for (const BenchRow& r : report.rows) {
    out << kCsvSchemaVersion << ',' << r.type << ',' << r.n << ',' << r.b << ','
        << fmt(r.setup_cost) << ',' << r.instance << ',' << r.algorithm << ','
        << r.realizations << ',' << fmt(r.mean_cost) << ','
        << fmt(r.std_error) << ',' << fmt(r.lb_mean) << ',' << fmt(r.ratio)
        << ',' << fmt(r.build_seconds) << ',' << fmt(r.simulate_seconds)
        << '\n';
  }
  return out.str();
}

std::string table_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "schema_version,type,n,B,setup_cost,algorithm,instances,mean_ratio,"
         "share_ratio_le_1_5\n";
  for (const AggregateRow& r : report.table) {
    out << kCsvSchemaVersion << ',' << r.type << ',' << r.n << ',' << r.b << ','
        << fmt(r.setup_cost) << ',' << r.algorithm << ',' << r.instances << ','
        << fmt(r.mean_ratio) << ',' << fmt(r.share_within_1_5) << '\n';
  }
  return out.str();
}

std::string table_text(const BenchReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-11s %6s %4s %8s %-8s %9s %10s %9s\n",
                "type", "n", "B", "rho", "algo", "instances", "mean_ratio",
                "<=1.5");
  out << line;
  for (const AggregateRow& r : report.table) {
    std::snprintf(line, sizeof line,
                  "%-11s %6d %4d %8.4g %-8s %9d %10.4f %9.2f\n", r.type.c_str(),
                  r.n, r.b, r.setup_cost, r.algorithm.c_str(), r.instances,
                  r.mean_ratio, r.share_within_1_5);
    out << line;
  }
  return out.str();
}

std::vector<std::filesystem::path> write_report(const ExperimentConfig& config,
                                                const BenchReport& report) {
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) {
    throw std::runtime_error(config.output_dir.string() + ": " + ec.message());
  }
  const auto rows_path = config.output_dir / (config.name + ".csv");
  const auto table_path = config.output_dir / (config.name + "_table.csv");
  for (const auto& [path, text] :
       {std::pair{rows_path, rows_csv(report)},
        std::pair{table_path, table_csv(report)}}) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << text;
    if (!out) throw std::runtime_error(path.string() + ": write failed");
  }
  return {rows_path, table_path};
}

}  // namespace seqtest
