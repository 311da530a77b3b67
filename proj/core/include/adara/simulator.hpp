#pragma once

#include <functional>
#include <memory>
#include <ostream>
#include <variant>
#include <vector>

#include "adara/engine.hpp"
#include "adara/event_queue.hpp"
#include "adara/mobility.hpp"
#include "adara/rng.hpp"
#include "adara/scenario.hpp"
#include "adara/trace.hpp"
#include "adara/traffic.hpp"

namespace adara {

std::unique_ptr<EngineBase> makeEngine(EngineKind kind, NodeId id, const ProtocolParams& params);

/// Flow set for a scenario. Depends only on the seed and traffic settings, so
/// both engines see the same flows; the first k flows do not change when the
/// flow count grows.
std::vector<OnOffFlow> buildFlows(const Scenario& s);

struct PacketDelivery {
  NodeId to;
  NodeId from;
  std::variant<SignalingPacket, DataPacket> packet;
};
struct TimerTick {
  NodeId node;
};
struct WaypointArrival {
  NodeId node;
};
struct TrafficEmit {
  std::size_t flow;
  std::uint64_t index;
  bool scripted = false;
};
struct MonitorProbe {};

using SimEventPayload =
    std::variant<PacketDelivery, TimerTick, WaypointArrival, TrafficEmit, MonitorProbe>;

/// Discrete-event driver connecting the routers through the radio model.
class Simulator {
 public:
  using Probe = std::function<void(Simulator&, SimTime)>;

  /// `trace` may be null. Throws ScenarioError for an invalid scenario.
  Simulator(const Scenario& scenario, std::ostream* trace);

  void addProbe(Probe probe) { probes_.push_back(std::move(probe)); }

  /// Runs until the queue passes the scenario duration.
  void run();
  /// Processes one event; false once the run is over.
  bool step();

  SimTime now() const { return queue_.now(); }
  std::size_t nodeCount() const { return engines_.size(); }
  const EngineBase& engine(NodeId n) const { return *engines_.at(raw(n)); }
  const std::vector<OnOffFlow>& flows() const { return flows_; }
  const Scenario& scenario() const { return scenario_; }
  TraceWriter& trace() { return trace_; }
  std::uint64_t eventsProcessed() const { return events_; }

  /// Transmits a signaling packet from `node` at the current time to every
  /// node in range (or, with an audience, to those of them listed). Returns
  /// the number of deliveries scheduled.
  std::size_t broadcast(NodeId node, SignalingPacket pkt,
                        const std::vector<NodeId>* audience = nullptr);
  /// Sends a data packet one hop at the current time. When `next` is out of
  /// range nothing is delivered, the failure is traced and the sender's
  /// engine is told synchronously; returns false in that case. Throws
  /// std::invalid_argument for a unicast to self.
  bool unicast(NodeId node, NodeId next, const DataPacket& pkt);

  Vec2 positionOf(NodeId n, SimTime t) const;
  bool linked(NodeId a, NodeId b, SimTime t) const;
  /// Nodes that hear a transmission from `n` at time t, in id order.
  std::vector<NodeId> neighborsOf(NodeId n, SimTime t) const;

 private:
  void dispatch(const PacketDelivery& e, SimTime now);
  void dispatch(const TimerTick& e, SimTime now);
  void dispatch(const WaypointArrival& e, SimTime now);
  void dispatch(const TrafficEmit& e, SimTime now);
  void dispatch(const MonitorProbe& e, SimTime now);

  void process(NodeId node, NodeOutput out, SimTime now);
  SimTime arrivalTime(NodeId sender, SimTime now);
  void checkHsn(NodeId node, const SignalingPacket& pkt);
  void emitData(NodeId src, NodeId dest, SimTime now);

  Scenario scenario_;
  WaypointParams waypoint_;
  TraceWriter trace_;
  EventQueue<SimEventPayload> queue_;
  std::vector<std::unique_ptr<EngineBase>> engines_;
  std::vector<MobilityState> mobility_;
  std::vector<Rng> mobilityRng_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<OnOffFlow> flows_;
  std::vector<SimTime> lastArrival_;
  std::vector<SeqNum> lastHsn_;
  std::vector<std::uint32_t> dataSeq_;  ///< per-source packet counter
  Rng radioRng_;
  std::vector<Probe> probes_;
  std::uint64_t events_ = 0;
};

}  // namespace adara
