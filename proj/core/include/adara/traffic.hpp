#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "adara/types.hpp"

namespace adara {

/// On-off constant-rate source. ON periods start at `start`, `start + period`,
/// ... and emit floor(onTime * rate) packets spaced 1/rate apart.
struct OnOffFlow {
  NodeId src;
  NodeId dest;
  double rate = 15.0;
  std::uint32_t packetSize = 512;
  SimTime onTime = 1.0;
  SimTime offTime = 1.0;
  SimTime start = 0.0;
  SimTime stop = kForever;

  std::uint64_t packetsPerOnPeriod() const;
  /// Emission time of the k-th packet (k from 0), or nullopt past `stop`.
  std::optional<SimTime> emissionTime(std::uint64_t k) const;
  /// Packets emitted in [from, to), as their indices.
  std::vector<std::uint64_t> emissionsIn(SimTime from, SimTime to) const;
};

}  // namespace adara
