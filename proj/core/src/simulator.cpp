#include "adara/simulator.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "adara/adara_node.hpp"
#include "adara/aodv_node.hpp"

namespace adara {

std::unique_ptr<EngineBase> makeEngine(EngineKind kind, NodeId id, const ProtocolParams& params) {
  if (kind == EngineKind::Adara) return std::make_unique<AdaraNode>(id, params);
  return std::make_unique<AodvNode>(id, params);
}

std::vector<OnOffFlow> buildFlows(const Scenario& s) {
  std::vector<OnOffFlow> flows;
  if (s.flows == 0 || s.nodeCount < 2) return flows;
  const std::uint32_t candidates = s.nodeCount - 1;  // every node but the hotspot
  std::vector<std::uint32_t> order(candidates);
  std::iota(order.begin(), order.end(), 0u);
  Rng pick = makeStream(s.seed, "flow-sources");
  for (std::uint32_t i = candidates; i > 1; --i) {
    std::swap(order[i - 1], order[pick.index(i)]);
  }
  const SimTime stop = s.duration - s.flowStopBeforeEnd;
  for (std::uint32_t f = 0; f < s.flows; ++f) {
    Rng rng = makeStream(s.seed, "traffic", f);
    OnOffFlow flow;
    flow.src = nodeId(order[f % candidates]);
    if (rng.bernoulli(s.hotspotProb)) {
      flow.dest = s.hotspot();
    } else {
      auto d = static_cast<std::uint32_t>(rng.index(s.nodeCount - 1));
      if (d >= raw(flow.src)) ++d;
      flow.dest = nodeId(d);
    }
    flow.rate = s.rate;
    flow.packetSize = s.packetSize;
    flow.onTime = s.onTime;
    flow.offTime = s.offTime;
    flow.start = s.flowStart + rng.uniform(0.0, s.flowStartSpread);
    flow.stop = stop;
    flows.push_back(flow);
  }
  return flows;
}

Simulator::Simulator(const Scenario& scenario, std::ostream* trace)
    : scenario_(scenario),
      waypoint_{scenario.area, scenario.vMax, scenario.pause},
      trace_(trace),
      radioRng_(makeStream(scenario.seed, "radio")) {
  scenario_.validate();
  const std::uint32_t n = scenario_.nodeCount;
  lastArrival_.assign(n, 0.0);
  lastHsn_.assign(n, 0);
  dataSeq_.assign(n, 0);

  for (std::uint32_t i = 0; i < n; ++i) {
    engines_.push_back(makeEngine(scenario_.engine, nodeId(i), scenario_.protocol));
    mobilityRng_.push_back(makeStream(scenario_.seed, "mobility", i));
    if (!scenario_.positions.empty()) {
      mobility_.push_back(staticMobility(scenario_.positions[i]));
    } else {
      mobility_.push_back(initialMobility(waypoint_, mobilityRng_.back()));
    }
    if (mobility_.back().moving()) {
      queue_.schedule(mobility_.back().arriveAt, WaypointArrival{nodeId(i)});
    }
  }

  if (scenario_.usesFixedLinks()) {
    adjacency_.assign(n, {});
    for (const auto& [a, b] : scenario_.links) {
      adjacency_[raw(a)].push_back(b);
      adjacency_[raw(b)].push_back(a);
    }
    for (auto& adj : adjacency_) {
      std::sort(adj.begin(), adj.end());
      adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
  }

  Rng phases = makeStream(scenario_.seed, "protocol");
  for (std::uint32_t i = 0; i < n; ++i) {
    const SimTime first =
        scenario_.timersStart + phases.uniform(0.0, scenario_.protocol.helloInterval);
    if (first <= scenario_.duration) queue_.schedule(first, TimerTick{nodeId(i)});
  }

  flows_ = buildFlows(scenario_);
  for (std::size_t f = 0; f < flows_.size(); ++f) {
    if (auto t = flows_[f].emissionTime(0); t && *t <= scenario_.duration) {
      queue_.schedule(*t, TrafficEmit{f, 0, false});
    }
  }
  for (std::size_t i = 0; i < scenario_.script.size(); ++i) {
    queue_.schedule(scenario_.script[i].time, TrafficEmit{i, 0, true});
  }
  queue_.schedule(scenario_.probeInterval, MonitorProbe{});
}

Vec2 Simulator::positionOf(NodeId n, SimTime t) const { return mobility_.at(raw(n)).positionAt(t); }

bool Simulator::linked(NodeId a, NodeId b, SimTime t) const {
  if (a == b) return false;
  if (scenario_.usesFixedLinks()) {
    const auto& adj = adjacency_[raw(a)];
    return std::binary_search(adj.begin(), adj.end(), b);
  }
  return scenario_.radio.inRange(positionOf(a, t), positionOf(b, t));
}

std::vector<NodeId> Simulator::neighborsOf(NodeId n, SimTime t) const {
  if (scenario_.usesFixedLinks()) return adjacency_[raw(n)];
  std::vector<NodeId> out;
  for (std::uint32_t j = 0; j < engines_.size(); ++j) {
    if (linked(n, nodeId(j), t)) out.push_back(nodeId(j));
  }
  return out;
}

void Simulator::run() {
  while (step()) {
  }
}

bool Simulator::step() {
  if (queue_.empty() || queue_.nextTime() > scenario_.duration) return false;
  auto ev = queue_.pop();
  ++events_;
  std::visit([&](const auto& payload) { dispatch(payload, ev.time); }, ev.payload);
  return true;
}

SimTime Simulator::arrivalTime(NodeId sender, SimTime now) {
  SimTime t = now + scenario_.radio.propDelay + radioRng_.uniform(0.0, scenario_.radio.jitter);
  // Transmissions from one sender never overtake each other.
  t = std::max(t, lastArrival_[raw(sender)]);
  lastArrival_[raw(sender)] = t;
  return t;
}

void Simulator::checkHsn(NodeId node, const SignalingPacket& pkt) {
  const SeqNum hsn = hsnOf(pkt).value;
  if (hsn < lastHsn_[raw(node)] || hsn > engines_[raw(node)]->sequenceNumber()) {
    throw std::logic_error("signaling packet carries a stale or future HSN");
  }
  lastHsn_[raw(node)] = hsn;
}

std::size_t Simulator::broadcast(NodeId node, SignalingPacket pkt,
                                 const std::vector<NodeId>* audience) {
  const SimTime now = queue_.now();
  checkHsn(node, pkt);
  const SimTime at = arrivalTime(node, now);
  std::span<const NodeId> to;
  if (audience != nullptr) to = *audience;
  trace_.transmit(now, node, pkt, to, at);
  std::size_t scheduled = 0;
  for (NodeId j : neighborsOf(node, now)) {
    if (audience != nullptr && std::find(audience->begin(), audience->end(), j) == audience->end()) {
      continue;
    }
    if (!linked(j, node, now)) throw std::logic_error("asymmetric radio link");
    if (scenario_.radio.lossProb > 0.0 && radioRng_.bernoulli(scenario_.radio.lossProb)) continue;
    queue_.schedule(at, PacketDelivery{j, node, pkt});
    ++scheduled;
  }
  return scheduled;
}

bool Simulator::unicast(NodeId node, NodeId next, const DataPacket& pkt) {
  if (next == node) throw std::invalid_argument("unicast to self");
  const SimTime now = queue_.now();
  if (!linked(node, next, now)) {
    trace_.linkFail(now, node, pkt, next);
    process(node, engines_[raw(node)]->onLinkFailure(next, pkt, now), now);
    return false;
  }
  const SimTime at = arrivalTime(node, now);
  trace_.transmit(now, node, pkt, next, at);
  queue_.schedule(at, PacketDelivery{next, node, pkt});
  return true;
}

void Simulator::process(NodeId node, NodeOutput out, SimTime now) {
  // Each list is in generation order; interleave them so HSNs go out non-decreasing.
  std::size_t b = 0;
  std::size_t d = 0;
  while (b < out.broadcasts.size() || d < out.directed.size()) {
    const bool takeBroadcast =
        d == out.directed.size() ||
        (b < out.broadcasts.size() &&
         hsnOf(out.broadcasts[b]) <= hsnOf(out.directed[d].packet));
    if (takeBroadcast) {
      broadcast(node, std::move(out.broadcasts[b++]));
    } else {
      auto& sig = out.directed[d++];
      broadcast(node, std::move(sig.packet), &sig.audience);
    }
  }
  for (const auto& [pkt, reason] : out.dropped) trace_.drop(now, node, pkt, reason);
  for (const auto& pkt : out.delivered) trace_.receive(now, node, pkt);
  for (NodeId n : out.linksDown) trace_.linkDown(now, node, n);
  for (const auto& [next, pkt] : out.unicasts) unicast(node, next, pkt);
}

void Simulator::dispatch(const PacketDelivery& e, SimTime now) {
  EngineBase& eng = *engines_[raw(e.to)];
  if (const auto* sig = std::get_if<SignalingPacket>(&e.packet)) {
    process(e.to, eng.handleSignaling(*sig, e.from, now), now);
  } else {
    process(e.to, eng.handleData(std::get<DataPacket>(e.packet), e.from, now), now);
  }
}

void Simulator::dispatch(const TimerTick& e, SimTime now) {
  process(e.node, engines_[raw(e.node)]->onTimer(now), now);
  queue_.schedule(now + scenario_.protocol.helloInterval, TimerTick{e.node});
}

void Simulator::dispatch(const WaypointArrival& e, SimTime now) {
  auto& st = mobility_[raw(e.node)];
  st = stepMobility(st, now, waypoint_, mobilityRng_[raw(e.node)]);
  if (st.moving()) queue_.schedule(st.arriveAt, WaypointArrival{e.node});
}

void Simulator::emitData(NodeId src, NodeId dest, SimTime now) {
  DataPacket pkt{src, dest, dataSeq_[raw(src)]++, now, scenario_.packetSize,
                 scenario_.protocol.dataTtl};
  trace_.send(now, src, pkt);
  process(src, engines_[raw(src)]->enqueueData(pkt, now), now);
}

void Simulator::dispatch(const TrafficEmit& e, SimTime now) {
  if (e.scripted) {
    const auto& sc = scenario_.script[e.flow];
    emitData(sc.src, sc.dest, now);
    return;
  }
  const auto& flow = flows_[e.flow];
  emitData(flow.src, flow.dest, now);
  if (auto t = flow.emissionTime(e.index + 1)) {
    queue_.schedule(*t, TrafficEmit{e.flow, e.index + 1, false});
  }
}

void Simulator::dispatch(const MonitorProbe&, SimTime now) {
  for (auto& probe : probes_) probe(*this, now);
  queue_.schedule(now + scenario_.probeInterval, MonitorProbe{});
}

}  // namespace adara
