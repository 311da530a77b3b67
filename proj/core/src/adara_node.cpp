#include "adara/adara_node.hpp"

#include <algorithm>

namespace adara {

namespace {
bool contains(const std::vector<NodeId>& v, NodeId n) {
  return std::find(v.begin(), v.end(), n) != v.end();
}
}  // namespace

AdaraNode::AdaraNode(NodeId id, ProtocolParams params)
    : EngineBase(id, params), prt_(params.pendingLifetime, !params.ridOnlyRetransmission) {}

void AdaraNode::broadcast(SignalingPacket pkt, SimTime now, NodeOutput& out) {
  out.broadcasts.push_back(std::move(pkt));
  lastBroadcastAt_ = now;
}

void AdaraNode::neighborHeard(NodeId sender, HelloSeq hsn, SimTime now) {
  rt_.processHello(sender, hsn, now, params_.neighborHoldTime);
  noteHeard(sender, now);
}

bool AdaraNode::alreadySeen(NodeId origin, RequestId rid, SimTime now) const {
  auto it = seen_.find({origin, rid});
  return it != seen_.end() && now <= it->second;
}

void AdaraNode::markSeen(NodeId origin, RequestId rid, SimTime now) {
  seen_[{origin, rid}] = now + prt_.lifetime();
}

std::vector<NodeId> AdaraNode::consumePending(NodeId dest, SimTime now) {
  std::vector<NodeId> precursors;
  auto entry = prt_.remove(dest);
  if (!entry) return precursors;
  for (const auto& t : entry->tuples) {
    markSeen(t.origin, t.rid, now);
    if (t.precursorNeighbor != id_ && !contains(precursors, t.precursorNeighbor)) {
      precursors.push_back(t.precursorNeighbor);
    }
  }
  return precursors;
}

NodeOutput AdaraNode::handleSignaling(const SignalingPacket& pkt, NodeId sender, SimTime now) {
  return std::visit(
      [&](const auto& p) -> NodeOutput {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Rreq>) return handleRreq(p, sender, now);
        else if constexpr (std::is_same_v<T, Rrep>) return handleRrep(p, sender, now);
        else if constexpr (std::is_same_v<T, Rerr>) return handleRerr(p, sender, now);
        else return handleHello(p, sender, now);
      },
      pkt);
}

void AdaraNode::originateDiscovery(NodeId dest, unsigned retries, SimTime now, NodeOutput& out) {
  bumpSeq();
  const RequestId rid = nextRid_++;
  Rreq rreq{rid, id_, seq_, dest, requestedDestSeq(dest), 0, HelloSeq{seq_}};
  // The origin keeps its own tuple, so echoes of its request are replicas and
  // other origins' requests for the same destination aggregate here.
  prt_.aggregate(rreq, id_, now);
  markSeen(id_, rid, now);
  pending_[dest] = {retries, now + params_.discoveryTimeout, rid};
  broadcast(rreq, now, out);
}

NodeOutput AdaraNode::handleRreq(const Rreq& rreq, NodeId sender, SimTime now) {
  NodeOutput out;
  neighborHeard(sender, rreq.hsn, now);
  if (alreadySeen(rreq.origin, rreq.rid, now)) return out;

  const AggregateOutcome outcome = prt_.aggregate(rreq, sender, now);
  if (outcome == AggregateOutcome::Duplicate) return out;
  markSeen(rreq.origin, rreq.rid, now);

  updateReverseRoute(rreq, sender, now);

  if (rreq.dest == id_) originateRrepSeq(rreq.destSeq);
  RouteEntry* route = rt_.find(rreq.dest);
  if (route != nullptr && route->usable(now) && route->destSeq >= rreq.destSeq) {
    std::vector<NodeId> ldn = consumePending(rreq.dest, now);
    if (ldn.empty()) ldn.push_back(sender);
    if (route->dest != id_) {
      for (NodeId p : ldn) route->addPrecursor(p);
    }
    broadcast(Rrep{rreq.dest, route->destSeq, route->hopCount, std::move(ldn), HelloSeq{seq_}},
              now, out);
  } else if (requiresForwarding(outcome)) {
    Rreq fwd = rreq;
    fwd.hopsToOrigin = rreq.hopsToOrigin + 1;
    fwd.hsn = HelloSeq{seq_};
    broadcast(fwd, now, out);
  }
  flushBuffered(now, out);
  return out;
}

NodeOutput AdaraNode::handleRrep(const Rrep& rrep, NodeId sender, SimTime now) {
  NodeOutput out;
  neighborHeard(sender, rrep.hsn, now);
  if (rrep.dest == id_) return out;

  const RouteEntry* current = rt_.find(rrep.dest);
  if (current != nullptr && rrep.destSeq < current->destSeq) return out;
  acceptRoute(rrep.dest, rrep.destSeq, rrep.hopsToDest + 1, sender, now);

  const bool designated = contains(rrep.ldn, id_);
  const PendingRequestEntry* pending = prt_.find(rrep.dest);
  const std::size_t tuples = pending != nullptr ? pending->tuples.size() : 0;
  RouteEntry* route = rt_.find(rrep.dest);
  const bool forwardable = designated || (!params_.strictLdnForwarding && tuples > 1);

  if (forwardable && pending != nullptr && route != nullptr && route->usable(now)) {
    std::vector<NodeId> ldn = consumePending(rrep.dest, now);
    // Nothing to do when the only precursors left are the neighbor that just
    // sent this reply (it already holds the route).
    const bool reachesSomeone =
        std::any_of(ldn.begin(), ldn.end(), [sender](NodeId n) { return n != sender; });
    if (reachesSomeone) {
      for (NodeId p : ldn) route->addPrecursor(p);
      broadcast(Rrep{rrep.dest, route->destSeq, route->hopCount, std::move(ldn), HelloSeq{seq_}},
                now, out);
    }
  }
  flushBuffered(now, out);
  return out;
}

NodeOutput AdaraNode::handleRerr(const Rerr& rerr, NodeId sender, SimTime now) {
  NodeOutput out;
  neighborHeard(sender, rerr.hsn, now);
  std::vector<NodeId> dests;
  dests.reserve(rerr.unreachable().size());
  for (const auto& u : rerr.unreachable()) dests.push_back(u.dest);

  const auto invalidated = rt_.invalidateVia(sender, std::span<const NodeId>(dests), now);
  const bool hasPrecursor = std::any_of(invalidated.begin(), invalidated.end(),
                                        [](const RouteEntry& e) { return e.hasPrecursors(); });
  if (hasPrecursor) broadcast(Rerr{HelloSeq{seq_}, rerr.unreachable()}, now, out);
  return out;
}

NodeOutput AdaraNode::handleHello(const Hello& hello, NodeId sender, SimTime now) {
  NodeOutput out;
  neighborHeard(sender, hello.hsn, now);
  flushBuffered(now, out);
  return out;
}

void AdaraNode::linkDown(NodeId neighbor, SimTime now, NodeOutput& out) {
  out.linksDown.push_back(neighbor);
  const auto invalidated = rt_.invalidateVia(neighbor, std::nullopt, now);
  std::vector<UnreachableDest> lost;
  for (const auto& e : invalidated) {
    if (e.hasPrecursors()) lost.push_back({e.dest, e.destSeq});
  }
  if (!lost.empty()) broadcast(Rerr{HelloSeq{seq_}, std::move(lost)}, now, out);
}

void AdaraNode::reportNoRoute(const DataPacket& pkt, NodeId, SimTime now, NodeOutput& out) {
  if (!rerrAllowed(pkt.dest, now)) return;
  const RouteEntry* e = rt_.find(pkt.dest);
  broadcast(Rerr{HelloSeq{seq_}, {{pkt.dest, e != nullptr ? e->destSeq : 0}}}, now, out);
}

NodeOutput AdaraNode::onTimer(SimTime now) {
  NodeOutput out;
  // Any broadcast already served as a hello during the last interval.
  if (now - lastBroadcastAt_ >= params_.helloInterval - 1e-9) {
    bumpSeq();
    broadcast(Hello{HelloSeq{seq_}}, now, out);
  }
  expireNeighbors(now, out);
  retryDiscoveries(now, out);
  rt_.expire(now, params_.invalidRouteGc);
  prt_.expire(now);
  std::erase_if(seen_, [now](const auto& kv) { return now > kv.second; });
  dropStaleBuffered(now, out);
  return out;
}

}  // namespace adara
