#include "adara/engine.hpp"

#include <algorithm>

namespace adara {

std::string_view dropReasonName(DropReason r) {
  switch (r) {
    case DropReason::BufferFull: return "BufferFull";
    case DropReason::BufferTimeout: return "BufferTimeout";
    case DropReason::NoRoute: return "NoRoute";
    case DropReason::TtlExpired: return "TtlExpired";
    case DropReason::DiscoveryFailed: return "DiscoveryFailed";
  }
  return "?";
}

std::optional<DropReason> parseDropReason(std::string_view name) {
  for (auto r : {DropReason::BufferFull, DropReason::BufferTimeout, DropReason::NoRoute,
                 DropReason::TtlExpired, DropReason::DiscoveryFailed}) {
    if (dropReasonName(r) == name) return r;
  }
  return std::nullopt;
}

namespace {
template <class T>
void moveAppend(std::vector<T>& dst, std::vector<T>& src) {
  dst.insert(dst.end(), std::make_move_iterator(src.begin()), std::make_move_iterator(src.end()));
}
}  // namespace

void NodeOutput::append(NodeOutput&& other) {
  moveAppend(broadcasts, other.broadcasts);
  moveAppend(directed, other.directed);
  moveAppend(unicasts, other.unicasts);
  moveAppend(delivered, other.delivered);
  moveAppend(dropped, other.dropped);
  moveAppend(linksDown, other.linksDown);
}

bool NodeOutput::empty() const {
  return broadcasts.empty() && directed.empty() && unicasts.empty() && delivered.empty() &&
         dropped.empty() && linksDown.empty();
}

SendBuffer::SendBuffer(std::size_t capacity, SimTime maxAge) : capacity_(capacity), maxAge_(maxAge) {}

std::optional<DataPacket> SendBuffer::push(DataPacket pkt, SimTime now) {
  std::optional<DataPacket> evicted;
  if (capacity_ == 0) return pkt;
  if (items_.size() >= capacity_) {
    evicted = items_.front().pkt;
    items_.pop_front();
  }
  items_.push_back({pkt, now});
  return evicted;
}

std::vector<DataPacket> SendBuffer::takeFor(NodeId dest) {
  std::vector<DataPacket> out;
  for (auto it = items_.begin(); it != items_.end();) {
    if (it->pkt.dest == dest) {
      out.push_back(it->pkt);
      it = items_.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

std::vector<DataPacket> SendBuffer::takeExpired(SimTime now) {
  std::vector<DataPacket> out;
  for (auto it = items_.begin(); it != items_.end();) {
    if (now - it->enqueuedAt > maxAge_) {
      out.push_back(it->pkt);
      it = items_.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

bool SendBuffer::hasPacketsFor(NodeId dest) const {
  return std::any_of(items_.begin(), items_.end(),
                     [dest](const Item& i) { return i.pkt.dest == dest; });
}

std::vector<NodeId> SendBuffer::destinations() const {
  std::vector<NodeId> out;
  for (const auto& i : items_) {
    if (std::find(out.begin(), out.end(), i.pkt.dest) == out.end()) out.push_back(i.pkt.dest);
  }
  return out;
}

EngineBase::EngineBase(NodeId id, ProtocolParams params)
    : id_(id),
      params_(params),
      rt_(id, 0),
      buffer_(params.bufferCapacity, params.bufferMaxAge) {}

void EngineBase::bumpSeq(SeqNum atLeast) {
  seq_ = std::max(seq_, atLeast) + 1;
  rt_.setOwnSeq(seq_);
}

bool EngineBase::forwardIfRouted(const DataPacket& pkt, SimTime now, NodeOutput& out) {
  RouteEntry* route = rt_.find(pkt.dest);
  if (route == nullptr || !route->usable(now) || route->hopCount == 0) return false;
  route->lifetime = std::max(route->lifetime, now + params_.activeRouteLifetime);
  out.unicasts.emplace_back(route->nextHop, pkt);
  return true;
}

void EngineBase::bufferPacket(const DataPacket& pkt, SimTime now, NodeOutput& out) {
  if (auto evicted = buffer_.push(pkt, now)) {
    out.dropped.emplace_back(*evicted, DropReason::BufferFull);
  }
}

void EngineBase::flushBuffered(SimTime now, NodeOutput& out) {
  for (auto it = pending_.begin(); it != pending_.end();) {
    if (rt_.findUsable(it->first, now) != nullptr) {
      it = pending_.erase(it);
    } else {
      ++it;
    }
  }
  if (buffer_.size() == 0) return;
  for (NodeId dest : buffer_.destinations()) {
    if (rt_.findUsable(dest, now) == nullptr) continue;
    for (const auto& pkt : buffer_.takeFor(dest)) {
      forwardIfRouted(pkt, now, out);
    }
  }
}

void EngineBase::dropBufferedFor(NodeId dest, DropReason reason, NodeOutput& out) {
  for (auto& pkt : buffer_.takeFor(dest)) out.dropped.emplace_back(std::move(pkt), reason);
}

void EngineBase::dropStaleBuffered(SimTime now, NodeOutput& out) {
  for (auto& pkt : buffer_.takeExpired(now)) {
    out.dropped.emplace_back(std::move(pkt), DropReason::BufferTimeout);
  }
}

SeqNum EngineBase::requestedDestSeq(NodeId dest) const {
  const RouteEntry* e = rt_.find(dest);
  if (e == nullptr) return 0;
  return e->valid ? e->destSeq : e->destSeq + 1;
}

void EngineBase::updateReverseRoute(const Rreq& rreq, NodeId sender, SimTime now) {
  acceptRoute(rreq.origin, rreq.originSeq, rreq.hopsToOrigin + 1, sender, now);
}

bool EngineBase::acceptRoute(NodeId dest, SeqNum seq, HopCount hops, NodeId nextHop, SimTime now) {
  if (dest == id_) return false;
  RouteEntry* e = rt_.find(dest);
  if (e == nullptr || isFresher(seq, hops, *e)) {
    RouteEntry entry;
    if (e != nullptr) entry.precursors = e->precursors;
    entry.dest = dest;
    entry.destSeq = seq;
    entry.hopCount = hops;
    entry.nextHop = nextHop;
    entry.lifetime = now + params_.activeRouteLifetime;
    if (e != nullptr && e->usable(now)) entry.lifetime = std::max(entry.lifetime, e->lifetime);
    entry.valid = true;
    rt_.put(std::move(entry));
    return true;
  }
  if (e->destSeq == seq && e->hopCount == hops && e->nextHop == nextHop) {
    // Same route re-advertised: keep it alive.
    e->lifetime = std::max(e->usable(now) ? e->lifetime : now, now + params_.activeRouteLifetime);
    e->valid = true;
    return true;
  }
  return false;
}

std::vector<NodeId> EngineBase::collectSilentNeighbors(SimTime now) {
  std::vector<NodeId> silent;
  const SimTime limit = params_.allowedHelloLoss * params_.helloInterval;
  for (auto it = neighborLastHeard_.begin(); it != neighborLastHeard_.end();) {
    if (now - it->second >= limit - 1e-9) {
      silent.push_back(it->first);
      it = neighborLastHeard_.erase(it);
    } else {
      ++it;
    }
  }
  return silent;
}

bool EngineBase::rerrAllowed(NodeId dest, SimTime now) {
  auto it = lastRerrFor_.find(dest);
  if (it != lastRerrFor_.end() && now - it->second < params_.rerrRateLimit) return false;
  lastRerrFor_[dest] = now;
  return true;
}


SeqNum EngineBase::originateRrepSeq(SeqNum rreqDestSeq) {
  bumpSeq(rreqDestSeq);
  return seq_;
}

NodeOutput EngineBase::enqueueData(const DataPacket& pkt, SimTime now) {
  NodeOutput out;
  if (pkt.dest == id_) {
    out.delivered.push_back(pkt);
    return out;
  }
  if (forwardIfRouted(pkt, now, out)) return out;
  bufferPacket(pkt, now, out);
  if (!pending_.contains(pkt.dest)) originateDiscovery(pkt.dest, 0, now, out);
  return out;
}

NodeOutput EngineBase::handleData(DataPacket pkt, NodeId sender, SimTime now) {
  NodeOutput out;
  if (pkt.dest == id_) {
    out.delivered.push_back(pkt);
    return out;
  }
  if (pkt.ttl <= 1) {
    out.dropped.emplace_back(pkt, DropReason::TtlExpired);
    return out;
  }
  --pkt.ttl;
  if (forwardIfRouted(pkt, now, out)) return out;
  out.dropped.emplace_back(pkt, DropReason::NoRoute);
  reportNoRoute(pkt, sender, now, out);
  return out;
}

NodeOutput EngineBase::onLinkFailure(NodeId nextHop, std::optional<DataPacket> pkt, SimTime now) {
  NodeOutput out;
  neighborLastHeard_.erase(nextHop);
  linkDown(nextHop, now, out);
  if (!pkt) return out;
  if (pkt->src == id_) {
    // Locally sourced flow: keep the packet and look for a new route.
    bufferPacket(*pkt, now, out);
    if (!pending_.contains(pkt->dest)) originateDiscovery(pkt->dest, 0, now, out);
  } else {
    out.dropped.emplace_back(*pkt, DropReason::NoRoute);
    reportNoRoute(*pkt, id_, now, out);
  }
  return out;
}

void EngineBase::retryDiscoveries(SimTime now, NodeOutput& out) {
  std::vector<std::pair<NodeId, PendingDiscovery>> due;
  for (const auto& [dest, pd] : pending_) {
    if (now >= pd.deadline - 1e-9) due.emplace_back(dest, pd);
  }
  for (const auto& [dest, pd] : due) {
    if (rt_.findUsable(dest, now) != nullptr || !buffer_.hasPacketsFor(dest)) {
      pending_.erase(dest);
    } else if (pd.retries < params_.rreqRetries) {
      originateDiscovery(dest, pd.retries + 1, now, out);
    } else {
      pending_.erase(dest);
      dropBufferedFor(dest, DropReason::DiscoveryFailed, out);
    }
  }
}

void EngineBase::expireNeighbors(SimTime now, NodeOutput& out) {
  for (NodeId n : collectSilentNeighbors(now)) linkDown(n, now, out);
}

}  // namespace adara
