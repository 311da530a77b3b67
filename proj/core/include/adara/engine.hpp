#pragma once

#include <deque>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "adara/messages.hpp"
#include "adara/route_state.hpp"
#include "adara/types.hpp"

namespace adara {

/// Timers and limits shared by the ADARA and AODV engines.
struct ProtocolParams {
  SimTime helloInterval = 1.0;
  unsigned allowedHelloLoss = 2;
  SimTime activeRouteLifetime = 10.0;
  SimTime neighborHoldTime = 3.0;
  SimTime pendingLifetime = 6.0;  ///< PRT entries and AODV RREQ records
  unsigned rreqRetries = 2;
  SimTime discoveryTimeout = 2.0;
  std::size_t bufferCapacity = 64;
  SimTime bufferMaxAge = 30.0;
  std::uint32_t dataTtl = kDefaultDataTtl;
  SimTime rerrRateLimit = 1.0;  ///< minimum gap between no-route RERRs for one dest
  SimTime invalidRouteGc = 60.0;

  /// Retransmitted RREQs update only the RID of their precursor tuple.
  bool ridOnlyRetransmission = false;
  /// RREPs are forwarded only by members of the designated-neighbor list,
  /// ignoring the "more than one pending tuple" rule.
  bool strictLdnForwarding = false;
};

enum class DropReason { BufferFull, BufferTimeout, NoRoute, TtlExpired, DiscoveryFailed };

std::string_view dropReasonName(DropReason r);
std::optional<DropReason> parseDropReason(std::string_view name);

/// A signaling packet with a restricted audience: a single entry is a
/// unicast, several entries model a broadcast heard only by those nodes.
struct DirectedSignal {
  SignalingPacket packet;
  std::vector<NodeId> audience;
};

/// Everything a node emits in response to one stimulus.
struct NodeOutput {
  std::vector<SignalingPacket> broadcasts;
  std::vector<DirectedSignal> directed;
  std::vector<std::pair<NodeId, DataPacket>> unicasts;
  std::vector<DataPacket> delivered;
  std::vector<std::pair<DataPacket, DropReason>> dropped;
  std::vector<NodeId> linksDown;

  void append(NodeOutput&& other);
  bool empty() const;
};

/// Bounded FIFO of data packets waiting for a route.
class SendBuffer {
 public:
  SendBuffer(std::size_t capacity, SimTime maxAge);

  struct Item {
    DataPacket pkt;
    SimTime enqueuedAt;
  };

  /// Returns the evicted oldest packet when the buffer was full.
  std::optional<DataPacket> push(DataPacket pkt, SimTime now);
  std::vector<DataPacket> takeFor(NodeId dest);
  /// Packets queued for more than maxAge, removed in queue order.
  std::vector<DataPacket> takeExpired(SimTime now);
  bool hasPacketsFor(NodeId dest) const;
  std::vector<NodeId> destinations() const;

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const std::deque<Item>& items() const { return items_; }

 private:
  std::size_t capacity_;
  SimTime maxAge_;
  std::deque<Item> items_;
};

/// Per-router routing state machine driven by the simulator.
class RoutingEngine {
 public:
  virtual ~RoutingEngine() = default;

  virtual NodeId id() const = 0;
  virtual std::string_view name() const = 0;

  /// A locally generated packet (pkt.src == id()).
  virtual NodeOutput enqueueData(const DataPacket& pkt, SimTime now) = 0;
  virtual NodeOutput handleSignaling(const SignalingPacket& pkt, NodeId sender, SimTime now) = 0;
  virtual NodeOutput handleData(DataPacket pkt, NodeId sender, SimTime now) = 0;
  /// Periodic tick, once per hello interval.
  virtual NodeOutput onTimer(SimTime now) = 0;
  /// The link layer could not reach `nextHop`; the undelivered packet, if
  /// any, is handed back.
  virtual NodeOutput onLinkFailure(NodeId nextHop, std::optional<DataPacket> pkt,
                                   SimTime now) = 0;

  virtual const RoutingTable& routingTable() const = 0;
  virtual SeqNum sequenceNumber() const = 0;
};

/// State and helpers common to both engines.
class EngineBase : public RoutingEngine {
 public:
  EngineBase(NodeId id, ProtocolParams params);

  NodeId id() const override { return id_; }
  const RoutingTable& routingTable() const override { return rt_; }
  SeqNum sequenceNumber() const override { return seq_; }

  const SendBuffer& sendBuffer() const { return buffer_; }
  const ProtocolParams& params() const { return params_; }
  SimTime lastBroadcastAt() const { return lastBroadcastAt_; }
  const std::map<NodeId, SimTime>& neighbors() const { return neighborLastHeard_; }

  struct PendingDiscovery {
    unsigned retries = 0;
    SimTime deadline = 0.0;
    RequestId rid = 0;
  };
  const std::map<NodeId, PendingDiscovery>& pendingDiscoveries() const { return pending_; }

  /// Test hook: seeds a route as if learned from the network.
  void installRoute(RouteEntry entry) { rt_.put(std::move(entry)); }

  /// Locally sourced packet: sent if routed, else buffered (evicting the
  /// oldest when full) and a discovery is started unless one is pending.
  NodeOutput enqueueData(const DataPacket& pkt, SimTime now) override;
  /// Delivers, forwards, or drops a data packet received from `sender`.
  NodeOutput handleData(DataPacket pkt, NodeId sender, SimTime now) override;
  NodeOutput onLinkFailure(NodeId nextHop, std::optional<DataPacket> pkt, SimTime now) override;

  /// Destination-side sequence number for a reply: max(own, requested) + 1.
  SeqNum originateRrepSeq(SeqNum rreqDestSeq);

 protected:
  virtual void originateDiscovery(NodeId dest, unsigned retries, SimTime now, NodeOutput& out) = 0;
  /// A relay holding `pkt` has no route onward. `prevHop` is the own id when
  /// the upstream neighbor is unknown.
  virtual void reportNoRoute(const DataPacket& pkt, NodeId prevHop, SimTime now,
                             NodeOutput& out) = 0;
  /// Invalidates routes through a neighbor that is gone and signals upstream.
  virtual void linkDown(NodeId neighbor, SimTime now, NodeOutput& out) = 0;

  /// Discovery timeouts: retry with a fresh request id, or give up and drop
  /// the packets waiting for that destination.
  void retryDiscoveries(SimTime now, NodeOutput& out);
  /// Neighbor timeout processing shared by both engines.
  void expireNeighbors(SimTime now, NodeOutput& out);

  void bumpSeq(SeqNum atLeast = 0);
  void noteHeard(NodeId neighbor, SimTime now) { neighborLastHeard_[neighbor] = now; }

  /// Sends through the routing table if possible. Refreshes the route's lifetime.
  bool forwardIfRouted(const DataPacket& pkt, SimTime now, NodeOutput& out);
  /// Buffers a locally sourced packet; an evicted packet is reported as BufferFull.
  void bufferPacket(const DataPacket& pkt, SimTime now, NodeOutput& out);
  /// Sends every buffered packet whose destination has become reachable.
  void flushBuffered(SimTime now, NodeOutput& out);
  void dropBufferedFor(NodeId dest, DropReason reason, NodeOutput& out);
  void dropStaleBuffered(SimTime now, NodeOutput& out);

  /// Route-request sequence number to ask for: the last known one, or one
  /// past it when that route has been invalidated.
  SeqNum requestedDestSeq(NodeId dest) const;

  /// Reverse route refresh toward a request's origin.
  void updateReverseRoute(const Rreq& rreq, NodeId sender, SimTime now);

  /// Takes a route update if it is fresher; returns true when the table changed.
  bool acceptRoute(NodeId dest, SeqNum seq, HopCount hops, NodeId nextHop, SimTime now);

  /// Neighbors silent for allowedHelloLoss hello intervals.
  std::vector<NodeId> collectSilentNeighbors(SimTime now);

  bool rerrAllowed(NodeId dest, SimTime now);

  NodeId id_;
  ProtocolParams params_;
  SeqNum seq_ = 0;
  RequestId nextRid_ = 1;
  RoutingTable rt_;
  SendBuffer buffer_;
  std::map<NodeId, PendingDiscovery> pending_;
  std::map<NodeId, SimTime> neighborLastHeard_;
  std::map<NodeId, SimTime> lastRerrFor_;
  SimTime lastBroadcastAt_ = -kForever;
};

}  // namespace adara
