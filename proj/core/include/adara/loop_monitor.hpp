#pragma once

#include <optional>
#include <span>
#include <vector>

#include "adara/route_state.hpp"

namespace adara {

class Simulator;

struct LoopViolation {
  NodeId dest;
  std::vector<NodeId> cycle;  ///< in next-hop order, starting at the lowest id
  bool equalSeq = false;      ///< every entry on the cycle has the same dest_seq
};

/// Follows the usable next-hop pointers toward `dest` held in `tables`
/// (indexed by node id) and reports the first cycle found. Along a loop-free
/// path (dest_seq, -hops) strictly increases, so any cycle is a violation.
std::optional<LoopViolation> findLoop(std::span<const RoutingTable* const> tables, NodeId dest,
                                      SimTime now);

/// All destinations, lowest id first.
std::vector<LoopViolation> findLoops(std::span<const RoutingTable* const> tables, SimTime now);

/// Registers a probe that checks every destination and writes one `loop`
/// trace line per violation. `count` is incremented per violation when given.
void attachLoopMonitor(Simulator& sim, std::uint64_t* count = nullptr);

}  // namespace adara
