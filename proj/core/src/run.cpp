#include "adara/run.hpp"

#include <fmt/format.h>

#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "adara/loop_monitor.hpp"
#include "adara/simulator.hpp"

namespace adara {

RunResult runScenario(const Scenario& scenario) {
  std::ostringstream trace;
  {
    Simulator sim(scenario, &trace);
    attachLoopMonitor(sim);
    sim.run();
  }
  RunResult result;
  result.trace = std::move(trace).str();
  result.metrics = computeMetrics(std::string_view(result.trace));
  return result;
}

namespace {
template <class T>
std::optional<T> number(std::optional<std::string_view> s) {
  if (!s) return std::nullopt;
  T out{};
  auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), out);
  if (ec != std::errc{} || ptr != s->data() + s->size()) return std::nullopt;
  return out;
}
}  // namespace

std::vector<std::string> verifyTrace(std::string_view trace) {
  std::vector<std::string> problems;
  std::map<std::uint32_t, SeqNum> lastHsn;
  std::set<std::pair<std::uint32_t, std::uint32_t>> sent;
  std::set<std::pair<std::uint32_t, std::uint32_t>> received;
  SimTime lastTime = 0.0;
  std::size_t lineNo = 0;
  std::size_t pos = 0;
  while (pos < trace.size()) {
    const auto nl = trace.find('\n', pos);
    const std::string_view line =
        trace.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? trace.size() : nl + 1;
    ++lineNo;
    if (line.empty()) continue;
    TraceRecord rec;
    try {
      rec = parseTraceLine(line, lineNo);
    } catch (const TraceFormatError& e) {
      problems.emplace_back(e.what());
      continue;
    }
    auto report = [&](const std::string& what) {
      problems.push_back(fmt::format("trace line {}: {}", lineNo, what));
    };
    if (rec.time < lastTime) report("time goes backwards");
    lastTime = rec.time;

    if (rec.event == "tx" && rec.kind != "DATA") {
      const auto hsn = number<SeqNum>(rec.get("hsn"));
      if (!hsn) {
        report("signaling transmission without hsn");
      } else {
        auto [it, fresh] = lastHsn.try_emplace(raw(rec.node), *hsn);
        if (!fresh) {
          if (*hsn < it->second) report(fmt::format("hsn decreased at node {}", raw(rec.node)));
          it->second = *hsn;
        }
      }
    } else if (rec.event == "send" || rec.event == "recv") {
      const auto src = number<std::uint32_t>(rec.get("src"));
      const auto seq = number<std::uint32_t>(rec.get("seq"));
      if (!src || !seq) {
        report("data record without src/seq");
        continue;
      }
      const auto key = std::make_pair(*src, *seq);
      if (rec.event == "send") {
        if (!sent.insert(key).second) report("data packet sent twice");
      } else {
        if (!sent.contains(key)) report("delivery without a matching send");
        if (!received.insert(key).second) report("data packet delivered twice");
      }
    } else if (rec.event == "loop") {
      report(fmt::format("routing loop toward {}", rec.get("dest").value_or("?")));
    }
  }
  return problems;
}

}  // namespace adara
