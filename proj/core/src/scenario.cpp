#include "adara/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace adara {

std::string_view engineName(EngineKind e) { return e == EngineKind::Adara ? "adara" : "aodv"; }

std::optional<EngineKind> parseEngine(std::string_view name) {
  if (name == "adara") return EngineKind::Adara;
  if (name == "aodv") return EngineKind::Aodv;
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    auto part = trim(s.substr(pos, next == std::string_view::npos ? next : next - pos));
    if (!part.empty()) parts.push_back(part);
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view why) {
  throw ScenarioError(std::string(key) + ": " + std::string(why) + " ('" + std::string(value) +
                      "')");
}

double toDouble(std::string_view key, std::string_view v) {
  v = trim(v);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
    bad(key, v, "expected a number");
  }
  return out;
}

std::uint64_t toUint(std::string_view key, std::string_view v) {
  v = trim(v);
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad(key, v, "expected a non-negative integer");
  return out;
}

std::uint32_t toU32(std::string_view key, std::string_view v) {
  const auto x = toUint(key, v);
  if (x > 0xffffffffULL) bad(key, v, "value too large");
  return static_cast<std::uint32_t>(x);
}

bool toBool(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad(key, v, "expected true or false");
}

using Setter = std::function<void(Scenario&, std::string_view key, std::string_view value)>;

const std::vector<std::pair<std::string_view, Setter>>& setters() {
  static const std::vector<std::pair<std::string_view, Setter>> table = {
      {"engine",
       [](Scenario& s, auto k, auto v) {
         auto e = parseEngine(trim(v));
         if (!e) bad(k, v, "expected adara or aodv");
         s.engine = *e;
       }},
      {"seed", [](Scenario& s, auto k, auto v) { s.seed = toUint(k, v); }},
      {"nodes", [](Scenario& s, auto k, auto v) { s.nodeCount = toU32(k, v); }},
      {"area_width", [](Scenario& s, auto k, auto v) { s.area.width = toDouble(k, v); }},
      {"area_height", [](Scenario& s, auto k, auto v) { s.area.height = toDouble(k, v); }},
      {"v_max", [](Scenario& s, auto k, auto v) { s.vMax = toDouble(k, v); }},
      {"pause", [](Scenario& s, auto k, auto v) { s.pause = toDouble(k, v); }},
      {"duration", [](Scenario& s, auto k, auto v) { s.duration = toDouble(k, v); }},
      {"flows", [](Scenario& s, auto k, auto v) { s.flows = toU32(k, v); }},
      {"rate", [](Scenario& s, auto k, auto v) { s.rate = toDouble(k, v); }},
      {"packet_size", [](Scenario& s, auto k, auto v) { s.packetSize = toU32(k, v); }},
      {"on_time", [](Scenario& s, auto k, auto v) { s.onTime = toDouble(k, v); }},
      {"off_time", [](Scenario& s, auto k, auto v) { s.offTime = toDouble(k, v); }},
      {"hotspot_prob", [](Scenario& s, auto k, auto v) { s.hotspotProb = toDouble(k, v); }},
      {"flow_start", [](Scenario& s, auto k, auto v) { s.flowStart = toDouble(k, v); }},
      {"flow_start_spread",
       [](Scenario& s, auto k, auto v) { s.flowStartSpread = toDouble(k, v); }},
      {"flow_stop_before_end",
       [](Scenario& s, auto k, auto v) { s.flowStopBeforeEnd = toDouble(k, v); }},
      {"radio_range", [](Scenario& s, auto k, auto v) { s.radio.range = toDouble(k, v); }},
      {"prop_delay", [](Scenario& s, auto k, auto v) { s.radio.propDelay = toDouble(k, v); }},
      {"jitter", [](Scenario& s, auto k, auto v) { s.radio.jitter = toDouble(k, v); }},
      {"loss_prob", [](Scenario& s, auto k, auto v) { s.radio.lossProb = toDouble(k, v); }},
      {"hello_interval",
       [](Scenario& s, auto k, auto v) { s.protocol.helloInterval = toDouble(k, v); }},
      {"allowed_hello_loss",
       [](Scenario& s, auto k, auto v) { s.protocol.allowedHelloLoss = toU32(k, v); }},
      {"active_route_lifetime",
       [](Scenario& s, auto k, auto v) { s.protocol.activeRouteLifetime = toDouble(k, v); }},
      {"neighbor_hold_time",
       [](Scenario& s, auto k, auto v) { s.protocol.neighborHoldTime = toDouble(k, v); }},
      {"pending_lifetime",
       [](Scenario& s, auto k, auto v) { s.protocol.pendingLifetime = toDouble(k, v); }},
      {"rreq_retries", [](Scenario& s, auto k, auto v) { s.protocol.rreqRetries = toU32(k, v); }},
      {"discovery_timeout",
       [](Scenario& s, auto k, auto v) { s.protocol.discoveryTimeout = toDouble(k, v); }},
      {"buffer_capacity",
       [](Scenario& s, auto k, auto v) { s.protocol.bufferCapacity = toU32(k, v); }},
      {"buffer_max_age",
       [](Scenario& s, auto k, auto v) { s.protocol.bufferMaxAge = toDouble(k, v); }},
      {"rid_only_retransmission",
       [](Scenario& s, auto k, auto v) { s.protocol.ridOnlyRetransmission = toBool(k, v); }},
      {"strict_ldn",
       [](Scenario& s, auto k, auto v) { s.protocol.strictLdnForwarding = toBool(k, v); }},
      {"timers_start", [](Scenario& s, auto k, auto v) { s.timersStart = toDouble(k, v); }},
      {"probe_interval", [](Scenario& s, auto k, auto v) { s.probeInterval = toDouble(k, v); }},
      {"positions",
       [](Scenario& s, auto k, auto v) {
         s.positions.clear();
         for (auto item : split(v, ';')) {
           auto xy = split(item, ',');
           if (xy.size() != 2) bad(k, item, "expected x,y");
           s.positions.push_back({toDouble(k, xy[0]), toDouble(k, xy[1])});
         }
       }},
      {"links",
       [](Scenario& s, auto k, auto v) {
         s.links.clear();
         for (auto item : split(v, ';')) {
           auto ab = split(item, '-');
           if (ab.size() != 2) bad(k, item, "expected a-b");
           s.links.emplace_back(nodeId(toU32(k, ab[0])), nodeId(toU32(k, ab[1])));
         }
       }},
      {"script",
       [](Scenario& s, auto k, auto v) {
         s.script.clear();
         for (auto item : split(v, ';')) {
           const auto colon = item.find(':');
           const auto arrow = item.find('>');
           if (colon == std::string_view::npos || arrow == std::string_view::npos || arrow < colon) {
             bad(k, item, "expected time:src>dest");
           }
           s.script.push_back({toDouble(k, item.substr(0, colon)),
                               nodeId(toU32(k, item.substr(colon + 1, arrow - colon - 1))),
                               nodeId(toU32(k, item.substr(arrow + 1)))});
         }
       }},
  };
  return table;
}

}  // namespace

const std::vector<std::string_view>& scenarioKeys() {
  static const std::vector<std::string_view> keys = [] {
    std::vector<std::string_view> out;
    for (const auto& [k, _] : setters()) out.push_back(k);
    return out;
  }();
  return keys;
}

void applySetting(Scenario& s, std::string_view key, std::string_view value) {
  key = trim(key);
  for (const auto& [k, set] : setters()) {
    if (k == key) {
      set(s, key, value);
      return;
    }
  }
  throw ScenarioError("unknown key '" + std::string(key) + "'");
}

void Scenario::validate() const {
  auto fail = [](const std::string& msg) { throw ScenarioError(msg); };
  if (nodeCount == 0) fail("nodes must be positive");
  if (!(area.width > 0 && area.height > 0)) fail("area dimensions must be positive");
  if (!(vMax >= 0)) fail("v_max must be non-negative");
  if (!(pause >= 0)) fail("pause must be non-negative");
  if (!(duration > 0)) fail("duration must be positive");
  if (!(rate > 0)) fail("rate must be positive");
  if (!(onTime > 0 && offTime >= 0)) fail("on_time must be positive and off_time non-negative");
  if (!(hotspotProb >= 0 && hotspotProb <= 1)) fail("hotspot_prob must be in [0, 1]");
  if (!(flowStart >= 0 && flowStartSpread >= 0 && flowStopBeforeEnd >= 0)) {
    fail("flow timing values must be non-negative");
  }
  if (flows > 0 && nodeCount < 2) fail("flows need at least two nodes");
  if (packetSize == 0) fail("packet_size must be positive");
  if (!(protocol.helloInterval > 0)) fail("hello_interval must be positive");
  if (protocol.allowedHelloLoss == 0) fail("allowed_hello_loss must be positive");
  if (!(protocol.activeRouteLifetime > 0 && protocol.neighborHoldTime > 0 &&
        protocol.pendingLifetime > 0 && protocol.discoveryTimeout > 0 &&
        protocol.bufferMaxAge > 0)) {
    fail("protocol lifetimes and timeouts must be positive");
  }
  if (protocol.bufferCapacity == 0) fail("buffer_capacity must be positive");
  if (!(probeInterval > 0)) fail("probe_interval must be positive");
  if (!(timersStart >= 0)) fail("timers_start must be non-negative");
  try {
    radio.validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  if (!positions.empty()) {
    if (positions.size() != nodeCount) fail("positions must list exactly one point per node");
    for (const auto& p : positions) {
      if (!area.contains(p)) fail("position outside the area");
    }
  }
  for (const auto& [a, b] : links) {
    if (raw(a) >= nodeCount || raw(b) >= nodeCount) fail("link endpoint out of range");
    if (a == b) fail("self link");
  }
  for (const auto& sc : script) {
    if (raw(sc.src) >= nodeCount || raw(sc.dest) >= nodeCount) fail("script node out of range");
    if (sc.src == sc.dest) fail("script source equals destination");
    if (!(sc.time >= 0 && sc.time < duration)) fail("script time outside the run");
  }
}

Scenario parseScenario(std::string_view text) {
  Scenario s;
  std::size_t lineNo = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineNo;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ScenarioError("line " + std::to_string(lineNo) + ": expected key = value");
    }
    try {
      applySetting(s, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ScenarioError& e) {
      throw ScenarioError("line " + std::to_string(lineNo) + ": " + e.what());
    }
  }
  s.validate();
  return s;
}

Scenario loadScenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parseScenario(buf.str());
}

}  // namespace adara
