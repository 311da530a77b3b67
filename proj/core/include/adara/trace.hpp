#pragma once

#include <ostream>
#include <span>
#include <string_view>

#include "adara/engine.hpp"
#include "adara/messages.hpp"

namespace adara {

/// Tab-separated trace lines: `time node event kind key=value...`.
///
///   tx       RREQ|RREP|RERR|HELLO|DATA  one transmission; `to` is `*` for a
///                                       broadcast, `at` is the arrival time
///   send     DATA                       packet handed to the source router
///   recv     DATA                       delivered at its destination
///   drop     DATA                       discarded, with `reason`
///   linkfail DATA                       unicast next hop out of range
///   linkdown -                          neighbor declared lost by the router
///   loop     -                          routing loop seen by the monitor
class TraceWriter {
 public:
  /// A null stream disables tracing.
  explicit TraceWriter(std::ostream* os) : os_(os) {}

  bool enabled() const { return os_ != nullptr; }

  void transmit(SimTime now, NodeId node, const SignalingPacket& pkt,
                std::span<const NodeId> audience, SimTime arrival);
  void transmit(SimTime now, NodeId node, const DataPacket& pkt, NodeId nextHop, SimTime arrival);
  void send(SimTime now, NodeId node, const DataPacket& pkt);
  void receive(SimTime now, NodeId node, const DataPacket& pkt);
  void drop(SimTime now, NodeId node, const DataPacket& pkt, DropReason reason);
  void linkFail(SimTime now, NodeId node, const DataPacket& pkt, NodeId nextHop);
  void linkDown(SimTime now, NodeId node, NodeId neighbor);
  void loop(SimTime now, NodeId dest, std::span<const NodeId> cycle, bool equalSeq);

 private:
  std::ostream* os_;
};

}  // namespace adara
