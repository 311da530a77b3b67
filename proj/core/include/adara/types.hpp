#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>

namespace adara {

/// Opaque router identifier assigned by the scenario loader.
enum class NodeId : std::uint32_t {};

constexpr NodeId nodeId(std::uint32_t v) { return static_cast<NodeId>(v); }
constexpr std::uint32_t raw(NodeId id) { return static_cast<std::uint32_t>(id); }

inline std::ostream& operator<<(std::ostream& os, NodeId id) { return os << raw(id); }

using SeqNum = std::uint32_t;
using RequestId = std::uint32_t;
using HopCount = std::uint32_t;

/// Simulation time in seconds.
using SimTime = double;

inline constexpr SimTime kForever = std::numeric_limits<SimTime>::infinity();

/// Hello sequence number carried by every signaling packet. It has no default
/// constructor, so a signaling packet cannot be built without one.
struct HelloSeq {
  constexpr explicit HelloSeq(SeqNum v) : value(v) {}
  SeqNum value;
  friend constexpr auto operator<=>(HelloSeq, HelloSeq) = default;
};

}  // namespace adara
