// robotval: enumerate tasks, compute weakest preconditions, generate
// configurations and falsify them against the kitchen simulator.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "robotval/action/model_file.hpp"
#include "robotval/errors.hpp"
#include "robotval/pipeline/pipeline.hpp"

namespace fs = std::filesystem;
using namespace robotval;

namespace {

fs::path defaultOut() {
  const char* env = std::getenv("ROBOTVAL_OUT");
  return env && *env ? fs::path(env) : fs::path(".");
}

/// "full" or a positive integer.
std::optional<std::size_t> parseStrength(const std::string& s) {
  if (s == "full") return std::nullopt;
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || v == 0) throw ParseError("strength must be a positive integer or 'full', got '" + s + "'");
  return v;
}

struct PolicyFlags {
  std::optional<double> graspSuccessMargin;
  std::optional<double> doorTorqueLimit;
  std::optional<double> timingScale;

  void add(CLI::App* app) {
    app->add_option("--grasp-margin", graspSuccessMargin, "override the scenario's graspSuccessMargin");
    app->add_option("--door-torque-limit", doorTorqueLimit, "override the scenario's doorTorqueLimit");
    app->add_option("--timing-scale", timingScale, "override the scenario's timingScale");
  }
  sim::PolicyConfig apply(sim::PolicyConfig p) const {
    if (graspSuccessMargin) p.graspSuccessMargin = *graspSuccessMargin;
    if (doorTorqueLimit) p.doorTorqueLimit = *doorTorqueLimit;
    if (timingScale) p.timingScale = *timingScale;
    p.check();
    return p;
  }
};

struct CampaignFlags {
  pipeline::CampaignSettings settings;
  std::optional<double> deltaT;

  void add(CLI::App* app) {
    app->add_option("--budget", settings.budget, "simulations per configuration")->check(CLI::PositiveNumber);
    app->add_option("--restarts", settings.restarts, "local-search restarts per configuration");
    app->add_option("--seed", settings.seed, "search seed; configuration i uses seed + i");
    app->add_option("--jobs", settings.jobs, "configurations falsified in parallel")->check(CLI::PositiveNumber);
    app->add_option("--delta-t", deltaT, "seconds per operation, overriding the predicate map")
        ->check(CLI::PositiveNumber);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Validation of robot task execution against an abstract action model"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::to_string(action::kModelFormatVersion), "print the model format version");

  std::string modelPath;
  std::size_t depth = 4;
  fs::path out = defaultOut();

  auto* enumerate = app.add_subcommand("enumerate", "count syntax-valid and accomplishable tasks");
  bool list = false;
  enumerate->add_option("--model", modelPath, "model file")->required();
  enumerate->add_option("-K,--depth", depth, "maximal derivation length");
  enumerate->add_flag("--list", list, "print every task with its number of satisfying initial worlds");

  auto* wp = app.add_subcommand("wp", "weakest precondition of a task");
  std::string taskText, postText = "true";
  bool symbolic = false;
  wp->add_option("--model", modelPath, "model file")->required();
  wp->add_option("--task", taskText, "task, e.g. \"[open(o_m);close(o_m)]\"")->required();
  wp->add_option("--post", postText, "postcondition over situation s");
  wp->add_flag("--symbolic", symbolic, "keep quantifiers instead of expanding them");

  auto* gen = app.add_subcommand("generate", "generate world-task configurations");
  gen->alias("ctgen");
  std::string strengthText = "full";
  bool table = false;
  std::vector<std::size_t> tableStrengths{1, 2, 3};
  gen->add_option("--model", modelPath, "model file")->required();
  gen->add_option("-K,--depth", depth, "maximal derivation length");
  gen->add_option("-t,--strength", strengthText, "interaction strength or 'full'");
  gen->add_option("--out", out, "output directory (default: $ROBOTVAL_OUT or .)");
  gen->add_flag("--table", table, "print the coverage table row instead of writing configurations");
  gen->add_option("--table-strengths", tableStrengths, "strengths for --table");

  auto* fals = app.add_subcommand("falsify", "falsify configurations in the simulator");
  fs::path configsPath, scenarioPath, pmapPath;
  PolicyFlags policyFlags;
  CampaignFlags campaignFlags;
  fals->add_option("--model", modelPath, "model file")->required();
  fals->add_option("--configs", configsPath, "configs.jsonl")->required();
  fals->add_option("--scenario", scenarioPath, "scenario JSON")->required();
  fals->add_option("--pmap", pmapPath, "predicate map")->required();
  fals->add_option("--out", out, "output directory (default: $ROBOTVAL_OUT or .)");
  campaignFlags.add(fals);
  policyFlags.add(fals);

  auto* val = app.add_subcommand("validate", "generate, synthesize and falsify in one run");
  val->add_option("--model", modelPath, "model file")->required();
  val->add_option("-K,--depth", depth, "maximal derivation length");
  val->add_option("-t,--strength", strengthText, "interaction strength or 'full'");
  val->add_option("--scenario", scenarioPath, "scenario JSON")->required();
  val->add_option("--pmap", pmapPath, "predicate map")->required();
  val->add_option("--out", out, "output directory (default: $ROBOTVAL_OUT or .)");
  campaignFlags.add(val);
  policyFlags.add(val);

  CLI11_PARSE(app, argc, argv);

  try {
    if (enumerate->parsed()) {
      auto model = pipeline::loadModel(modelPath);
      std::cout << pipeline::formatEnumerate(pipeline::enumerateTasks(model, depth), list);
    } else if (wp->parsed()) {
      auto model = pipeline::loadModel(modelPath);
      std::cout << pipeline::wpText(model, taskText, postText, symbolic) << '\n';
    } else if (gen->parsed()) {
      auto model = pipeline::loadModel(modelPath);
      if (table) {
        std::cout << pipeline::formatTable({pipeline::tableRow(model, depth, tableStrengths)});
      } else {
        auto g = pipeline::generate(model, depth, parseStrength(strengthText));
        pipeline::writeFile(out / "configs.jsonl", pipeline::configsJsonl(model, g));
        std::cout << g.configs.size() << " configurations (" << g.covering.validAssignments << " valid, "
                  << g.covering.coverableTuples << " coverable tuples) written to " << (out / "configs.jsonl").string()
                  << '\n';
      }
    } else if (fals->parsed()) {
      auto model = pipeline::loadModel(modelPath);
      auto scenario = sim::loadScenario(scenarioPath.string());
      auto pmap = stl::loadPredicateMap(pmapPath.string());
      auto configs = pipeline::readConfigsJsonl(model, pipeline::readFile(configsPath));
      auto settings = campaignFlags.settings;
      settings.deltaT = campaignFlags.deltaT;
      settings.policy = policyFlags.apply(scenario.policy);
      auto report = pipeline::runCampaign(model, scenario, pmap, configs, settings, out);
      std::cout << pipeline::summaryLine(report) << '\n';
    } else if (val->parsed()) {
      pipeline::ValidateOptions options;
      options.model = modelPath;
      options.scenario = scenarioPath;
      options.pmap = pmapPath;
      options.depth = depth;
      options.strength = parseStrength(strengthText);
      options.campaign = campaignFlags.settings;
      options.campaign.deltaT = campaignFlags.deltaT;
      options.campaign.policy = policyFlags.apply(sim::loadScenario(scenarioPath.string()).policy);
      options.policyFromScenario = false;
      options.out = out;
      auto result = pipeline::validate(options);
      std::cout << pipeline::summaryLine(result.report) << '\n';
    }
  } catch (const ParseError& e) {
    std::cerr << "robotval: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "robotval: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "robotval: internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
