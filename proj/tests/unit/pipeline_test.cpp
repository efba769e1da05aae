#include <gtest/gtest.h>

#include "oracles.hpp"
#include "robotval/errors.hpp"
#include "robotval/pipeline/pipeline.hpp"

using namespace robotval;

namespace {

const pipeline::Model& kitchen() {
  static const pipeline::Model m = pipeline::loadModel(oracle::modelPath("kitchen4.sc"));
  return m;
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("robotval_pipeline_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST(Pipeline, EnumerateFormat) {
  auto r = pipeline::enumerateTasks(kitchen(), 4);
  EXPECT_EQ(pipeline::formatEnumerate(r, false), "K syntax-valid accomplishable\n4 28 8\n");
}

TEST(Pipeline, WpText) {
  EXPECT_EQ(pipeline::wpText(kitchen(), "[open(o_m);close(o_m)]"), "!IsOpen(o_m)@s & !Running(o_m)@s");
  EXPECT_EQ(pipeline::wpText(kitchen(), "[open(o_m);open(o_m)]"), "false");
  EXPECT_THROW(pipeline::wpText(kitchen(), "open(o_z)"), Error);
}

TEST(Pipeline, ConfigsRoundTrip) {
  auto g = pipeline::generate(kitchen(), 4, 2);
  auto text = pipeline::configsJsonl(kitchen(), g);
  auto back = pipeline::readConfigsJsonl(kitchen(), text);
  ASSERT_EQ(back.size(), g.configs.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].initialWorld, g.configs[i].initialWorld);
    EXPECT_EQ(back[i].task, g.configs[i].task);
    EXPECT_EQ(back[i].derivation.steps, g.configs[i].derivation.steps);
  }
}

TEST(Pipeline, ConfigErrorsCarryLineNumbers) {
  auto g = pipeline::generate(kitchen(), 4, 1);
  auto text = pipeline::configsJsonl(kitchen(), g);
  try {
    pipeline::readConfigsJsonl(kitchen(), text + "{\"world\": 3}\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), g.configs.size() + 1);
  }
  // A world that breaks the initial axioms: the bowl on itself.
  const std::string bad =
      R"j({"index":0,"world":["Loc(o_b,o_b)"],"task":"open(o_m)","derivation":["r_a","r_open","r_om"]})j";
  EXPECT_THROW(pipeline::readConfigsJsonl(kitchen(), bad + "\n"), ParseError);
}

TEST(Pipeline, EmptyCampaignWritesEmptyReport) {
  auto sc = sim::loadScenario(oracle::modelPath("kitchen.json").string());
  auto pm = stl::loadPredicateMap(oracle::modelPath("kitchen4.pmap").string());
  auto out = scratch("empty");
  auto report = pipeline::runCampaign(kitchen(), sc, pm, {}, {}, out);
  EXPECT_TRUE(report.entries.empty());
  auto j = nlohmann::json::parse(pipeline::readFile(out / "report.json"));
  EXPECT_EQ(j["summary"]["configurations"], 0);
  EXPECT_EQ(j["summary"]["line"], "0 of 0 configurations falsified, 0 passed, 0 errors");
  EXPECT_TRUE(j["results"].empty());
  std::filesystem::remove_all(out);
}

TEST(Pipeline, ValidateWritesArtifacts) {
  pipeline::ValidateOptions o;
  o.model = oracle::modelPath("kitchen4.sc");
  o.scenario = oracle::modelPath("kitchen.json");
  o.pmap = oracle::modelPath("kitchen4.pmap");
  o.strength = 1;
  o.campaign.budget = 6;
  o.campaign.policy.doorTorqueLimit = 0.5;
  o.policyFromScenario = false;
  o.out = scratch("validate");
  auto r = pipeline::validate(o);
  EXPECT_TRUE(std::filesystem::exists(r.configsPath));
  auto j = nlohmann::json::parse(pipeline::readFile(r.reportPath));
  ASSERT_EQ(j["results"].size(), r.report.entries.size());
  for (const auto& e : j["results"]) {
    if (e["status"] == "falsified")
      EXPECT_TRUE(std::filesystem::exists(o.out / e["trace"].get<std::string>()));
    else
      EXPECT_TRUE(e["trace"].is_null());
  }
  EXPECT_GT(r.report.falsified, 0u);
  std::filesystem::remove_all(o.out);
}
