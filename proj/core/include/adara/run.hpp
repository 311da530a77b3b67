#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "adara/metrics.hpp"
#include "adara/scenario.hpp"

namespace adara {

struct RunResult {
  std::string trace;
  RunMetrics metrics;
};

/// Builds the network, runs it to the scenario duration with the loop monitor
/// attached, and derives the metrics from the trace. Deterministic per seed.
RunResult runScenario(const Scenario& scenario);

/// Problems found by re-reading a trace: malformed lines, time going
/// backwards, HSN decreasing at a node, deliveries without a matching send or
/// delivered twice, and recorded routing loops.
std::vector<std::string> verifyTrace(std::string_view trace);

}  // namespace adara
