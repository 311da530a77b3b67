#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adara/engine.hpp"
#include "adara/mobility.hpp"
#include "adara/radio.hpp"

namespace adara {

enum class EngineKind { Adara, Aodv };

std::string_view engineName(EngineKind e);
std::optional<EngineKind> parseEngine(std::string_view name);

/// One data packet sent at a fixed time, for scripted scenarios.
struct ScriptedSend {
  SimTime time;
  NodeId src;
  NodeId dest;
};

/// A simulation run description. Text form: one `key = value` per line, `#`
/// starts a comment. List values:
///   positions = x,y; x,y; ...      static node coordinates (one per node)
///   links     = a-b; a-b; ...      fixed adjacency replacing the radio disk
///   script    = t:src>dest; ...    scripted single packets
struct Scenario {
  EngineKind engine = EngineKind::Adara;
  std::uint64_t seed = 1;
  std::uint32_t nodeCount = 25;
  Area area{300.0, 1000.0};
  double vMax = 20.0;
  SimTime pause = 0.0;
  SimTime duration = 120.0;

  std::uint32_t flows = 10;
  double rate = 15.0;
  std::uint32_t packetSize = kDataPayloadBytes;
  SimTime onTime = 1.0;
  SimTime offTime = 1.0;
  double hotspotProb = 0.5;
  SimTime flowStart = 1.0;
  SimTime flowStartSpread = 5.0;
  /// Data sources stop emitting this long before the end of the run.
  SimTime flowStopBeforeEnd = 5.0;

  RadioModel radio;
  ProtocolParams protocol;
  /// First periodic tick; ticks are offset per node by a random phase.
  SimTime timersStart = 0.0;
  SimTime probeInterval = 0.1;

  std::vector<Vec2> positions;
  std::vector<std::pair<NodeId, NodeId>> links;
  std::vector<ScriptedSend> script;

  /// Hotspot destination: the node with the highest id.
  NodeId hotspot() const { return nodeId(nodeCount - 1); }
  bool usesFixedLinks() const { return !links.empty(); }

  /// Throws ScenarioError describing the first violated constraint.
  void validate() const;
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Applies one `key = value` setting. Throws ScenarioError on unknown keys or
/// unparsable values.
void applySetting(Scenario& s, std::string_view key, std::string_view value);

/// Parses the text form and validates the result.
Scenario parseScenario(std::string_view text);
Scenario loadScenario(const std::filesystem::path& path);

/// Keys accepted by applySetting, in documentation order.
const std::vector<std::string_view>& scenarioKeys();

}  // namespace adara
