// adara-sim: run, sweep, and check MANET routing simulations.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "adara/run.hpp"
#include "adara/scenario.hpp"

namespace {

using adara::EngineKind;
using adara::Scenario;

std::vector<std::string> splitList(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::ostream& openOut(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  return file;
}

int cmdRun(const std::string& config, std::optional<std::uint64_t> seed,
           const std::string& engine, const std::string& csvPath, const std::string& tracePath) {
  Scenario s = adara::loadScenario(config);
  if (seed) s.seed = *seed;
  if (!engine.empty()) s.engine = *adara::parseEngine(engine);
  const auto result = adara::runScenario(s);
  if (!tracePath.empty()) {
    std::ofstream out(tracePath);
    if (!out) throw std::runtime_error("cannot write " + tracePath);
    out << result.trace;
  }
  std::ofstream file;
  std::ostream& csv = openOut(csvPath, file);
  csv << adara::csvHeader() << '\n' << adara::csvRow(s, result.metrics) << '\n';
  if (result.metrics.loopViolations > 0) {
    std::cerr << "routing loops detected: " << result.metrics.loopViolations << '\n';
    return 2;
  }
  return 0;
}

int cmdSweep(const std::string& config, const std::vector<std::string>& params, unsigned seeds,
             const std::string& engine, const std::string& csvPath, unsigned jobs) {
  const Scenario base = adara::loadScenario(config);

  // Cartesian product of all parameter lists.
  std::vector<Scenario> grid{base};
  for (const auto& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw adara::ScenarioError("--param expects key=v1,v2,...");
    const std::string key = p.substr(0, eq);
    std::vector<Scenario> next;
    for (const auto& s : grid) {
      for (const auto& v : splitList(p.substr(eq + 1), ',')) {
        Scenario copy = s;
        adara::applySetting(copy, key, v);
        copy.validate();
        next.push_back(copy);
      }
    }
    grid = std::move(next);
  }
  std::vector<EngineKind> engines;
  if (engine.empty() || engine == "both") {
    engines = {EngineKind::Adara, EngineKind::Aodv};
  } else {
    engines = {*adara::parseEngine(engine)};
  }
  std::vector<Scenario> runs;
  for (const auto& s : grid) {
    for (unsigned k = 0; k < seeds; ++k) {
      for (auto e : engines) {
        Scenario r = s;
        r.seed = base.seed + k;
        r.engine = e;
        runs.push_back(r);
      }
    }
  }

  std::vector<std::string> rows(runs.size());
  std::vector<std::uint64_t> loops(runs.size(), 0);
  std::atomic<std::size_t> nextRun{0};
  std::mutex errMutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t i = nextRun++; i < runs.size(); i = nextRun++) {
      try {
        const auto result = adara::runScenario(runs[i]);
        rows[i] = adara::csvRow(runs[i], result.metrics);
        loops[i] = result.metrics.loopViolations;
      } catch (...) {
        std::lock_guard lock(errMutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < std::min<std::size_t>(jobs, runs.size()); ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  std::ofstream file;
  std::ostream& csv = openOut(csvPath, file);
  csv << adara::csvHeader() << '\n';
  for (const auto& r : rows) csv << r << '\n';
  const auto totalLoops = std::accumulate(loops.begin(), loops.end(), std::uint64_t{0});
  if (totalLoops > 0) {
    std::cerr << "routing loops detected: " << totalLoops << '\n';
    return 2;
  }
  return 0;
}

int cmdCheck(const std::string& tracePath) {
  std::ifstream in(tracePath);
  if (!in) throw std::runtime_error("cannot open " + tracePath);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto problems = adara::verifyTrace(buf.str());
  for (const auto& p : problems) std::cerr << p << '\n';
  if (!problems.empty()) {
    std::cerr << problems.size() << " problem(s)\n";
    return 1;
  }
  std::cout << "ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ADARA / AODV MANET routing simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one scenario and print a CSV row");
  std::string runConfig, runEngine, runCsv, runTrace;
  std::optional<std::uint64_t> runSeed;
  run->add_option("--config", runConfig, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", runSeed, "Override the scenario seed");
  run->add_option("--engine", runEngine, "adara or aodv")->check(CLI::IsMember({"adara", "aodv"}));
  run->add_option("--csv", runCsv, "CSV output file (default stdout)");
  run->add_option("--trace", runTrace, "Trace output file");

  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid over several seeds");
  std::string sweepConfig, sweepEngine = "both", sweepCsv;
  std::vector<std::string> sweepParams;
  unsigned sweepSeeds = 1, sweepJobs = 0;
  sweep->add_option("--config", sweepConfig, "Scenario file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", sweepParams, "key=v1,v2,... (repeatable)");
  sweep->add_option("--seeds", sweepSeeds, "Seeds per grid point, counting up from the config seed")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--engine", sweepEngine, "adara, aodv or both")
      ->check(CLI::IsMember({"adara", "aodv", "both"}));
  sweep->add_option("--csv", sweepCsv, "CSV output file (default stdout)");
  sweep->add_option("--jobs", sweepJobs, "Parallel runs (default: hardware threads)");

  auto* check = app.add_subcommand("check", "Re-verify invariants on a recorded trace");
  std::string checkTrace;
  check->add_option("--trace", checkTrace, "Trace file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmdRun(runConfig, runSeed, runEngine, runCsv, runTrace);
    if (*sweep) {
      return cmdSweep(sweepConfig, sweepParams, sweepSeeds, sweepEngine, sweepCsv, sweepJobs);
    }
    if (*check) return cmdCheck(checkTrace);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
