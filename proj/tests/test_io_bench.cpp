#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "seqtest/bench.hpp"
#include "seqtest/io.hpp"
#include "test_util.hpp"

using namespace seqtest;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "seqtest_tests";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const auto path = scratch(name);
  std::ofstream(path) << text;
  return path;
}

std::string without_timing(const std::string& csv) {
  // timing columns are the last two
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    for (int k = 0; k < 2; ++k) line.erase(line.rfind(','));
    out << line << '\n';
  }
  return out.str();
}

ExperimentConfig small_config(InstanceType type) {
  ExperimentConfig cfg;
  cfg.type = type;
  cfg.ns = {30, 50};
  cfg.bs = type == InstanceType::she ? std::vector<int>{2} : std::vector<int>{3, 6};
  cfg.instances = 3;
  cfg.realizations = 20;
  cfg.seed = 5;
  cfg.setup_costs = {0.0, 150.0};
  return cfg;
}

}  // namespace

TEST(InstanceJson, NegativeWeightsReducedOnLoad) {
  const auto path = write_file("neg.json", R"({
    "items": [{"cost": 1, "prob": 0.2, "weight": -3}],
    "alphas": [-3, 0, 1],
    "setup_cost": 2.5
  })");
  const auto red = load_instance(path);
  EXPECT_EQ(red.instance.item(0).weight, 3);
  EXPECT_DOUBLE_EQ(red.instance.item(0).prob, 0.8);
  EXPECT_EQ(red.instance.setup_cost(), 2.5);
  EXPECT_TRUE(red.flipped[0]);
}

TEST(InstanceJson, RoundTrip) {
  const auto inst = seqtest::testing::fig1(3.0);
  const auto back = instance_from_json(instance_to_json(inst)).instance;
  EXPECT_EQ(back.size(), inst.size());
  EXPECT_EQ(back.num_classes(), inst.num_classes());
  EXPECT_EQ(back.setup_cost(), 3.0);
}

TEST(InstanceJson, ParseErrorsCarryPathAndLine) {
  const auto path = write_file("broken.json", "{\n  \"items\": [\n    {\"cost\": 1,,}\n  ]\n}\n");
  try {
    load_instance(path);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find(path.string() + ":3:"), std::string::npos) << what;
  }
  const auto missing = write_file("missing.json", R"({"items": []})");
  EXPECT_THROW(load_instance(missing), ParseError);
  EXPECT_THROW(load_instance(scratch("does_not_exist.json")), ParseError);
}

TEST(SystemJson, Aggregators) {
  const std::string base = R"({"items": [{"cost": 1, "prob": 0.5},
                                          {"cost": 2, "prob": 0.5}],
     "halfspaces": [{"weights": [1, -1], "alpha": 0},
                    {"weights": [1, 1], "alpha": 1}],
     "aggregator": )";
  for (const std::string agg :
       {"\"AND\"", "\"OR\"", "{\"at_least\": 1}", "{\"table\": [0, 1, 1, 0]}"}) {
    const auto doc = nlohmann::json::parse(base + agg + "}");
    EXPECT_TRUE(is_system_document(doc));
    EXPECT_NO_THROW(system_from_json(doc)) << agg;
  }
  EXPECT_THROW(system_from_json(nlohmann::json::parse(base + "\"XOR\"}")),
               ParseError);
  EXPECT_THROW(system_from_json(nlohmann::json::parse(base + "{\"table\": [1, 0]}}")),
               InvalidInstance);
}

TEST(ListJson, RoundTrip) {
  const auto list = build_list(seqtest::testing::fig1(), {0.2, 3.0, CMode::practical});
  const auto doc = list_to_json(list);
  EXPECT_TRUE(doc.contains("phase_marks"));
  EXPECT_EQ(list_from_json(doc), list);
}

TEST(RealizationJson, Validation) {
  EXPECT_EQ(realizations_from_json(nlohmann::json::parse("[[1,0],[0,0]]"), 2).size(), 2u);
  EXPECT_THROW(realizations_from_json(nlohmann::json::parse("[[1,0,1]]"), 2), ParseError);
  EXPECT_THROW(realizations_from_json(nlohmann::json::parse("[[2,0]]"), 2), ParseError);
}

TEST(Config, ParsesKeysAndReportsErrors) {
  const auto good = write_file("good.toml", R"(
type = "she"
n = [40]
instances = 2
realizations = 3
seed = 9
algorithms = ["ours"]
mode = "theory"
output_dir = "out"
)");
  const auto cfg = load_config(good);
  EXPECT_EQ(cfg.type, InstanceType::she);
  EXPECT_EQ(cfg.bs, std::vector<int>{2});
  EXPECT_EQ(cfg.policy.mode, CMode::theory);
  EXPECT_EQ(cfg.algorithms, std::vector<std::string>{"ours"});

  const auto syntax = write_file("syntax.toml", "type = \"she\"\nn = [1,\nseed = \n");
  try {
    load_config(syntax);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(syntax.string() + ":"), std::string::npos);
  }
  const auto unknown = write_file("unknown.toml", "type = \"weighted\"\n\nbogus = 1\n");
  try {
    load_config(unknown);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(unknown.string() + ":3:"), std::string::npos)
        << e.what();
  }
  EXPECT_THROW(load_config(write_file("sheb.toml", "type = \"she\"\nB = [3]\n")),
               ParseError);
  EXPECT_THROW(load_config(write_file("alg.toml", "algorithms = [\"dhk\"]\n")),
               ParseError);
}

TEST(Generator, ProtocolShapes) {
  ExperimentConfig cfg;
  cfg.type = InstanceType::unweighted;
  const auto unweighted = generate_instance(cfg, 100, 5, 0);
  EXPECT_EQ(unweighted.total_weight(), 100);
  for (const Item& it : unweighted.items()) {
    EXPECT_EQ(it.weight, 1);
    EXPECT_GE(it.cost, 10.0);
    EXPECT_LE(it.cost, 100.0);
    EXPECT_EQ(it.cost, std::floor(it.cost));
    EXPECT_GT(it.prob, 0.0);
    EXPECT_LT(it.prob, 1.0);
  }
  EXPECT_EQ(unweighted.num_classes(), 5);

  cfg.type = InstanceType::she;
  const auto she = generate_instance(cfg, 60, 2, 1);
  EXPECT_EQ(she.num_classes(), 2);
  for (const Item& it : she.items()) {
    EXPECT_GE(it.weight, 1);
    EXPECT_LE(it.weight, 10);
  }
  const auto again = generate_instance(cfg, 60, 2, 1);
  const auto a = she.classes().alphas();
  const auto b = again.classes().alphas();
  EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
  EXPECT_EQ(she.item(7).cost, again.item(7).cost);

  Rng rng(1);
  EXPECT_THROW(generate_alphas(3, 5, rng), InvalidInstance);
  EXPECT_EQ(generate_alphas(3, 3, rng), (std::vector<std::int64_t>{0, 1, 2, 4}));
}

TEST(Bench, ZeroRealizationsGiveHeadersOnly) {
  auto cfg = small_config(InstanceType::weighted);
  cfg.realizations = 0;
  const auto report = run_experiment(cfg);
  const std::string csv = rows_csv(report);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1);
  EXPECT_EQ(csv.rfind("schema_version,", 0), 0u);
}

TEST(Bench, DeterministicModuloTiming) {
  for (auto type : {InstanceType::she, InstanceType::unweighted,
                    InstanceType::weighted, InstanceType::exdshe,
                    InstanceType::batched}) {
    const auto cfg = small_config(type);
    const auto a = run_experiment(cfg);
    const auto b = run_experiment(cfg);
    ASSERT_FALSE(a.rows.empty());
    EXPECT_EQ(without_timing(rows_csv(a)), without_timing(rows_csv(b)))
        << type_name(type);
    EXPECT_EQ(table_csv(a), table_csv(b));
  }
}

TEST(Bench, ListsBuiltOncePerInstance) {
  const auto cfg = small_config(InstanceType::weighted);
  const auto report = run_experiment(cfg);
  const std::size_t per_instance = cfg.algorithms.size();
  EXPECT_EQ(report.list_builds, cfg.ns.size() * cfg.instances * per_instance);
  EXPECT_EQ(report.list_uses, report.list_builds * cfg.bs.size());
}

TEST(Bench, RatiosAtLeastOne) {
  for (auto type : {InstanceType::she, InstanceType::weighted,
                    InstanceType::batched}) {
    const auto report = run_experiment(small_config(type));
    for (const auto& row : report.rows) {
      EXPECT_GE(row.ratio, 1.0) << type_name(type);
    }
  }
}

TEST(Bench, WritesReports) {
  auto cfg = small_config(InstanceType::unweighted);
  cfg.output_dir = scratch("bench_reports");
  cfg.name = "unit";
  const auto report = run_experiment(cfg);
  const auto paths = write_report(cfg, report);
  ASSERT_EQ(paths.size(), 2u);
  for (const auto& p : paths) EXPECT_TRUE(fs::exists(p));
  EXPECT_NE(table_text(report).find("mean_ratio"), std::string::npos);
}
