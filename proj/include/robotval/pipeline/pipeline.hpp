#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "robotval/action/model_file.hpp"
#include "robotval/ct/model.hpp"
#include "robotval/falsify/falsifier.hpp"
#include "robotval/sim/kitchen.hpp"
#include "robotval/tasks/grammar.hpp"

namespace robotval::pipeline {

struct Model {
  action::ModelFile file;
  tasks::Grammar grammar;

  const action::ActionTheory& theory() const { return file.theory; }
};

Model loadModel(const std::filesystem::path& path);
Model parseModelText(std::string_view text);

struct TaskCounts {
  std::size_t depth = 0;
  std::size_t syntaxValid = 0;     ///< derivations of at most `depth` steps
  std::size_t accomplishable = 0;  ///< those with a D0 world satisfying their WP
};

struct EnumerateResult {
  TaskCounts counts;
  std::vector<ct::DerivationInfo> tasks;
};

EnumerateResult enumerateTasks(const Model& model, std::size_t K);
/// `K syntax-valid accomplishable` then, with `list`, one task per line with
/// its number of satisfying initial worlds.
std::string formatEnumerate(const EnumerateResult& r, bool list);

/// WP(post, task) printed; post defaults to true.
std::string wpText(const Model& model, std::string_view task, std::string_view post = "true", bool symbolic = false);

struct GenerateResult {
  ct::CtModel ctModel;
  ct::CoveringResult covering;
  std::vector<ct::Configuration> configs;
};

/// Covering array of strength t (nullopt: every valid configuration), decoded.
GenerateResult generate(const Model& model, std::size_t K, std::optional<std::size_t> t);

/// One JSON object per line: index, world (true atoms), task, derivation, assignment.
std::string configsJsonl(const Model& model, const GenerateResult& g);
/// Reads configurations back; the assignment is left empty. Throws ParseError.
std::vector<ct::Configuration> readConfigsJsonl(const Model& model, std::string_view text);

/// One row of the coverage table: counts and array sizes for each strength.
struct TableRow {
  std::size_t depth = 0;
  std::size_t syntaxValid = 0;
  std::size_t accomplishable = 0;
  std::size_t full = 0;
  std::vector<std::size_t> strengths;
  std::vector<std::size_t> rows;            ///< per strength
  std::vector<std::size_t> coverableTuples; ///< per strength
};

TableRow tableRow(const Model& model, std::size_t K, const std::vector<std::size_t>& strengths);
/// Whitespace-aligned table with a header line `K syntax-valid accomplishable full 1-way ...`.
std::string formatTable(const std::vector<TableRow>& rows);

struct CampaignSettings {
  std::size_t budget = 100;
  std::size_t restarts = 4;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::optional<double> deltaT;
  sim::PolicyConfig policy;
};

/// Runs the campaign and writes report.json plus traces/ under `out`.
falsify::CampaignReport runCampaign(const Model& model, const sim::Scenario& scenario, const stl::PredicateMap& pmap,
                                    const std::vector<ct::Configuration>& configs, const CampaignSettings& settings,
                                    const std::filesystem::path& out);

nlohmann::ordered_json reportJson(const Model& model, const sim::Scenario& scenario,
                                  const falsify::CampaignReport& report, const CampaignSettings& settings);

/// `3 of 25 configurations falsified, 22 passed, 0 errors`.
std::string summaryLine(const falsify::CampaignReport& report);

struct ValidateOptions {
  std::filesystem::path model;
  std::filesystem::path scenario;
  std::filesystem::path pmap;
  std::size_t depth = 4;
  std::optional<std::size_t> strength;  ///< nullopt: every valid configuration
  CampaignSettings campaign;
  bool policyFromScenario = true;  ///< ignore campaign.policy and use the scenario's knobs
  std::filesystem::path out;
};

struct ValidateResult {
  std::filesystem::path configsPath;
  std::filesystem::path reportPath;
  falsify::CampaignReport report;
};

/// Generate, synthesize and falsify: writes configs.jsonl, report.json and traces/.
ValidateResult validate(const ValidateOptions& options);

/// Writes text to a file in binary mode; throws SetupError on failure.
void writeFile(const std::filesystem::path& path, std::string_view text);
std::string readFile(const std::filesystem::path& path);

}  // namespace robotval::pipeline
