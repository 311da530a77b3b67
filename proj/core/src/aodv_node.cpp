#include "adara/aodv_node.hpp"

#include <algorithm>

namespace adara {

AodvNode::AodvNode(NodeId id, ProtocolParams params) : EngineBase(id, params) {}

void AodvNode::neighborHeard(NodeId sender, HelloSeq hsn, SimTime now) {
  rt_.processHello(sender, hsn, now, params_.neighborHoldTime);
  noteHeard(sender, now);
}

bool AodvNode::hasRecord(NodeId source, RequestId broadcastId, SimTime now) const {
  auto it = records_.find({source, broadcastId});
  return it != records_.end() && now <= it->second;
}

NodeOutput AodvNode::handleSignaling(const SignalingPacket& pkt, NodeId sender, SimTime now) {
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

void AodvNode::originateDiscovery(NodeId dest, unsigned retries, SimTime now, NodeOutput& out) {
  bumpSeq();
  const RequestId bid = nextRid_++;
  records_[{id_, bid}] = now + params_.pendingLifetime;
  pending_[dest] = {retries, now + params_.discoveryTimeout, bid};
  lastBroadcastAt_ = now;
  out.broadcasts.push_back(Rreq{bid, id_, seq_, dest, requestedDestSeq(dest), 0, HelloSeq{seq_}});
}

bool AodvNode::replyToward(NodeId requester, NodeId dest, SimTime now, NodeOutput& out) {
  RouteEntry* reverse = rt_.find(requester);
  RouteEntry* forward = rt_.find(dest);
  if (reverse == nullptr || !reverse->usable(now) || forward == nullptr) return false;
  if (dest != id_) {
    forward->addPrecursor(reverse->nextHop);
    if (forward->nextHop != reverse->nextHop) reverse->addPrecursor(forward->nextHop);
  }
  Rrep rrep{dest, forward->destSeq, forward->hopCount, {}, HelloSeq{seq_}, requester};
  out.directed.push_back({std::move(rrep), {reverse->nextHop}});
  return true;
}

NodeOutput AodvNode::handleRreq(const Rreq& rreq, NodeId sender, SimTime now) {
  NodeOutput out;
  neighborHeard(sender, rreq.hsn, now);
  if (hasRecord(rreq.origin, rreq.rid, now)) return out;
  records_[{rreq.origin, rreq.rid}] = now + params_.pendingLifetime;
  updateReverseRoute(rreq, sender, now);

  if (rreq.dest == id_) originateRrepSeq(rreq.destSeq);
  const RouteEntry* route = rt_.findUsable(rreq.dest, now);
  if (route != nullptr && route->destSeq >= rreq.destSeq) {
    replyToward(rreq.origin, rreq.dest, now, out);
  } else {
    Rreq fwd = rreq;
    fwd.hopsToOrigin = rreq.hopsToOrigin + 1;
    fwd.hsn = HelloSeq{seq_};
    lastBroadcastAt_ = now;
    out.broadcasts.push_back(fwd);
  }
  flushBuffered(now, out);
  return out;
}

NodeOutput AodvNode::handleRrep(const Rrep& rrep, NodeId sender, SimTime now) {
  NodeOutput out;
  neighborHeard(sender, rrep.hsn, now);
  if (rrep.dest == id_) return out;
  const RouteEntry* current = rt_.find(rrep.dest);
  if (current != nullptr && rrep.destSeq < current->destSeq) return out;
  acceptRoute(rrep.dest, rrep.destSeq, rrep.hopsToDest + 1, sender, now);

  if (rrep.requester && *rrep.requester != id_) {
    auto key = std::make_tuple(rrep.dest, rrep.destSeq, *rrep.requester);
    if (!forwardedReplies_.contains(key) && rt_.findUsable(rrep.dest, now) != nullptr) {
      if (replyToward(*rrep.requester, rrep.dest, now, out)) forwardedReplies_.insert(key);
    }
  }
  flushBuffered(now, out);
  return out;
}

void AodvNode::sendRerrToPrecursors(const std::vector<RouteEntry>& invalidated, NodeOutput& out) {
  std::vector<UnreachableDest> lost;
  std::vector<NodeId> audience;
  for (const auto& e : invalidated) {
    if (!e.hasPrecursors()) continue;
    lost.push_back({e.dest, e.destSeq});
    for (NodeId p : e.precursors) {
      if (std::find(audience.begin(), audience.end(), p) == audience.end()) audience.push_back(p);
    }
  }
  if (lost.empty()) return;
  std::sort(audience.begin(), audience.end());
  out.directed.push_back({Rerr{HelloSeq{seq_}, std::move(lost)}, std::move(audience)});
}

NodeOutput AodvNode::handleRerr(const Rerr& rerr, NodeId sender, SimTime now) {
  NodeOutput out;
  neighborHeard(sender, rerr.hsn, now);
  std::vector<NodeId> dests;
  for (const auto& u : rerr.unreachable()) dests.push_back(u.dest);
  sendRerrToPrecursors(rt_.invalidateVia(sender, std::span<const NodeId>(dests), now), out);
  return out;
}

NodeOutput AodvNode::handleHello(const Hello& hello, NodeId sender, SimTime now) {
  NodeOutput out;
  neighborHeard(sender, hello.hsn, now);
  flushBuffered(now, out);
  return out;
}

void AodvNode::linkDown(NodeId neighbor, SimTime now, NodeOutput& out) {
  out.linksDown.push_back(neighbor);
  sendRerrToPrecursors(rt_.invalidateVia(neighbor, std::nullopt, now), out);
}

void AodvNode::reportNoRoute(const DataPacket& pkt, NodeId prevHop, SimTime now, NodeOutput& out) {
  if (prevHop == id_ || !rerrAllowed(pkt.dest, now)) return;
  const RouteEntry* e = rt_.find(pkt.dest);
  out.directed.push_back(
      {Rerr{HelloSeq{seq_}, {{pkt.dest, e != nullptr ? e->destSeq : 0}}}, {prevHop}});
}

NodeOutput AodvNode::onTimer(SimTime now) {
  NodeOutput out;
  lastBroadcastAt_ = now;
  out.broadcasts.push_back(Hello{HelloSeq{seq_}});
  expireNeighbors(now, out);
  retryDiscoveries(now, out);
  rt_.expire(now, params_.invalidRouteGc);
  std::erase_if(records_, [now](const auto& kv) { return now > kv.second; });
  std::erase_if(forwardedReplies_, [this](const auto& key) {
    return rt_.find(std::get<0>(key)) == nullptr;
  });
  dropStaleBuffered(now, out);
  return out;
}

}  // namespace adara
