#include "robotval/pipeline/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "robotval/errors.hpp"
#include "robotval/logic/syntax.hpp"
#include "robotval/regression/wp.hpp"
#include "robotval/stl/synthesis.hpp"

namespace robotval::pipeline {

using nlohmann::ordered_json;

void writeFile(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SetupError("cannot write " + path.string());
  out << text;
  if (!out) throw SetupError("cannot write " + path.string());
}

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Model loadModel(const std::filesystem::path& path) {
  auto file = action::loadModel(path);
  auto grammar = tasks::Grammar::fromText(file.grammar);
  return Model{std::move(file), std::move(grammar)};
}

Model parseModelText(std::string_view text) {
  auto file = action::parseModel(text);
  auto grammar = tasks::Grammar::fromText(file.grammar);
  return Model{std::move(file), std::move(grammar)};
}

EnumerateResult enumerateTasks(const Model& model, std::size_t K) {
  EnumerateResult r;
  r.counts.depth = K;
  if (K == 0) return r;
  auto ct = ct::buildModel(model.theory(), model.grammar, K);
  r.tasks = std::move(ct.derivations);
  r.counts.syntaxValid = r.tasks.size();
  for (const auto& d : r.tasks) r.counts.accomplishable += d.satisfyingWorlds > 0 ? 1 : 0;
  return r;
}

std::string formatEnumerate(const EnumerateResult& r, bool list) {
  std::ostringstream out;
  out << "K syntax-valid accomplishable\n"
      << r.counts.depth << ' ' << r.counts.syntaxValid << ' ' << r.counts.accomplishable << '\n';
  if (list)
    for (const auto& d : r.tasks) out << d.satisfyingWorlds << '\t' << tasks::print(d.task) << '\n';
  return out.str();
}

std::string wpText(const Model& model, std::string_view task, std::string_view post, bool symbolic) {
  const auto vocab = model.theory().vocabulary();
  const tasks::Task tau = tasks::parseTask(task, vocab);
  const logic::Formula phi = logic::parseFormula(post, vocab);
  auto r = regression::wp(phi, tau, model.theory(), symbolic ? regression::WpMode::Symbolic : regression::WpMode::Ground);
  return logic::print(r.formula);
}

GenerateResult generate(const Model& model, std::size_t K, std::optional<std::size_t> t) {
  GenerateResult g;
  g.ctModel = ct::buildModel(model.theory(), model.grammar, K, t);
  if (g.ctModel.parameters.empty()) return g;
  g.covering = ct::generateCoveringArray(g.ctModel, t);
  for (const auto& row : g.covering.rows)
    g.configs.push_back(ct::realizeConfiguration(g.ctModel, row, model.theory(), model.grammar));
  return g;
}

namespace {

std::vector<std::string> worldAtoms(const action::ActionTheory& theory, const action::WorldState& w) {
  std::vector<std::string> out;
  for (const auto& a : action::trueAtoms(theory, w)) out.push_back(action::describe(a));
  return out;
}

logic::GroundAtom parseAtom(const std::string& text, std::size_t line) {
  auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') throw ParseError("bad atom '" + text + "'", line);
  logic::GroundAtom atom;
  atom.name = text.substr(0, open);
  std::string inner = text.substr(open + 1, text.size() - open - 2);
  std::size_t start = 0;
  while (start <= inner.size() && !inner.empty()) {
    auto comma = inner.find(',', start);
    atom.args.push_back(inner.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return atom;
}

/// Infinite robustness (a constant formula) is written as a string.
ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

ordered_json policyJson(const sim::PolicyConfig& p) {
  ordered_json j;
  j["graspSuccessMargin"] = p.graspSuccessMargin;
  j["doorTorqueLimit"] = p.doorTorqueLimit;
  j["timingScale"] = p.timingScale;
  return j;
}

}  // namespace

std::string configsJsonl(const Model& model, const GenerateResult& g) {
  std::string out;
  for (std::size_t i = 0; i < g.configs.size(); ++i) {
    const auto& c = g.configs[i];
    ordered_json j;
    j["index"] = i;
    j["world"] = worldAtoms(model.theory(), c.initialWorld);
    j["task"] = tasks::print(c.task);
    j["derivation"] = c.derivation.steps;
    j["assignment"] = ct::printAssignment(g.ctModel, c.assignment);
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<ct::Configuration> readConfigsJsonl(const Model& model, std::string_view text) {
  std::vector<ct::Configuration> out;
  const auto vocab = model.theory().vocabulary();
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ct::Configuration c;
    try {
      auto j = nlohmann::json::parse(line);
      std::vector<logic::GroundAtom> atoms;
      for (const auto& a : j.at("world")) atoms.push_back(parseAtom(a.get<std::string>(), lineNo));
      c.initialWorld = action::worldFromAtoms(model.theory(), atoms);
      c.task = tasks::parseTask(j.at("task").get<std::string>(), vocab);
      if (j.contains("derivation")) c.derivation.steps = j.at("derivation").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("configuration: ") + e.what(), lineNo);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineNo);
    } catch (const ModelError& e) {
      throw ParseError(e.what(), lineNo);
    }
    if (!action::satisfiesInitialAxioms(model.theory(), c.initialWorld))
      throw ParseError("initial world violates the initial axioms", lineNo);
    if (!c.derivation.steps.empty()) {
      auto sentence = tasks::replay(model.grammar, c.derivation.steps);
      if (!sentence || !(tasks::parseTask(tasks::sentenceText(*sentence), vocab) == c.task))
        throw ParseError("derivation does not produce the task", lineNo);
    }
    out.push_back(std::move(c));
  }
  return out;
}

TableRow tableRow(const Model& model, std::size_t K, const std::vector<std::size_t>& strengths) {
  TableRow row;
  row.depth = K;
  row.strengths = strengths;
  if (K == 0) {
    row.rows.assign(strengths.size(), 0);
    row.coverableTuples.assign(strengths.size(), 0);
    return row;
  }
  auto ct = ct::buildModel(model.theory(), model.grammar, K);
  row.syntaxValid = ct.derivations.size();
  for (const auto& d : ct.derivations) row.accomplishable += d.satisfyingWorlds > 0 ? 1 : 0;
  row.full = ct::enumerateValid(ct).size();
  for (auto t : strengths) {
    auto r = ct::generateCoveringArray(ct, t);
    row.rows.push_back(r.rows.size());
    row.coverableTuples.push_back(r.coverableTuples);
  }
  return row;
}

std::string formatTable(const std::vector<TableRow>& rows) {
  std::vector<std::vector<std::string>> cells{{"K", "syntax-valid", "accomplishable", "full"}};
  if (!rows.empty())
    for (auto t : rows.front().strengths) cells.front().push_back(std::to_string(t) + "-way");
  for (const auto& r : rows) {
    std::vector<std::string> line{std::to_string(r.depth), std::to_string(r.syntaxValid),
                                  std::to_string(r.accomplishable), std::to_string(r.full)};
    for (auto n : r.rows) line.push_back(std::to_string(n));
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width;
  for (const auto& line : cells)
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (width.size() <= i) width.push_back(0);
      width[i] = std::max(width[i], line[i].size());
    }
  std::ostringstream out;
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) out << "  ";
      out << std::setw(static_cast<int>(width[i])) << line[i];
    }
    out << '\n';
  }
  return out.str();
}

std::string summaryLine(const falsify::CampaignReport& report) {
  return std::to_string(report.falsified) + " of " + std::to_string(report.entries.size()) +
         " configurations falsified, " + std::to_string(report.passed) + " passed, " + std::to_string(report.errors) +
         " errors";
}

ordered_json reportJson(const Model& model, const sim::Scenario& scenario, const falsify::CampaignReport& report,
                        const CampaignSettings& settings) {
  ordered_json j;
  j["version"] = 1;
  j["seed"] = settings.seed;
  j["budget"] = settings.budget;
  j["restarts"] = settings.restarts;
  if (settings.deltaT) j["deltaT"] = *settings.deltaT;
  j["policy"] = policyJson(settings.policy);
  ordered_json summary;
  summary["configurations"] = report.entries.size();
  summary["falsified"] = report.falsified;
  summary["passed"] = report.passed;
  summary["errors"] = report.errors;
  summary["line"] = summaryLine(report);
  j["summary"] = summary;
  ordered_json results = ordered_json::array();
  for (const auto& e : report.entries) {
    ordered_json r;
    r["index"] = e.index;
    r["world"] = worldAtoms(model.theory(), e.config.initialWorld);
    r["task"] = tasks::print(e.config.task);
    if (!e.result) {
      r["status"] = "error";
      r["error"] = e.error;
      results.push_back(r);
      continue;
    }
    const auto& f = *e.result;
    r["status"] = falsify::statusName(f.status);
    r["bestRobustness"] = number(f.bestRobustness);
    r["evaluations"] = f.evaluations;
    r["infeasible"] = f.infeasible;
    r["dimension"] = f.dimension;
    r["spec"] = e.formula;
    if (f.bestSample) {
      r["bestPoint"] = f.bestSample->point;
      ordered_json q0;
      for (std::size_t i = 0; i < scenario.objects.size(); ++i) {
        const auto& st = f.bestSample->q0.objects[i];
        ordered_json o;
        o["position"] = st.position;
        o["door"] = st.door;
        o["running"] = st.running;
        q0[scenario.objects[i].name] = o;
      }
      r["q0"] = q0;
    }
    ordered_json history = ordered_json::array();
    for (const auto& ev : f.log) {
      if (!ev.feasible) {
        history.push_back(nullptr);
        continue;
      }
      ordered_json h;
      h["robustness"] = number(ev.robustness);
      h["truncated"] = ev.truncated;
      history.push_back(h);
    }
    r["history"] = history;
    r["trace"] = f.traceRef.empty() ? ordered_json(nullptr) : ordered_json("traces/" + f.traceRef);
    results.push_back(r);
  }
  j["results"] = results;
  return j;
}

falsify::CampaignReport runCampaign(const Model& model, const sim::Scenario& scenario, const stl::PredicateMap& pmap,
                                    const std::vector<ct::Configuration>& configs, const CampaignSettings& settings,
                                    const std::filesystem::path& out) {
  falsify::System system{model.theory(), scenario, pmap, settings.policy};
  falsify::CampaignOptions options;
  options.budget = settings.budget;
  options.restarts = settings.restarts;
  options.seed = settings.seed;
  options.jobs = settings.jobs;
  options.deltaT = settings.deltaT;
  options.traceDir = out / "traces";
  if (std::filesystem::exists(options.traceDir))
    for (const auto& f : std::filesystem::directory_iterator(options.traceDir))
      if (f.path().extension() == ".csv" && f.path().filename().string().starts_with("trace_"))
        std::filesystem::remove(f.path());
  auto report = falsify::campaign(system, configs, options);
  writeFile(out / "report.json", reportJson(model, scenario, report, settings).dump(2) + "\n");
  return report;
}

ValidateResult validate(const ValidateOptions& options) {
  Model model = loadModel(options.model);
  sim::Scenario scenario = sim::loadScenario(options.scenario.string());
  stl::PredicateMap pmap = stl::loadPredicateMap(options.pmap.string());
  CampaignSettings settings = options.campaign;
  if (options.policyFromScenario) settings.policy = scenario.policy;

  GenerateResult g = generate(model, options.depth, options.strength);
  ValidateResult out;
  out.configsPath = options.out / "configs.jsonl";
  out.reportPath = options.out / "report.json";
  writeFile(out.configsPath, configsJsonl(model, g));
  out.report = runCampaign(model, scenario, pmap, g.configs, settings, options.out);
  return out;
}

}  // namespace robotval::pipeline
