#include "adara/route_state.hpp"

#include <algorithm>
#include <iomanip>

namespace adara {

void RouteEntry::addPrecursor(NodeId n) {
  auto it = std::lower_bound(precursors.begin(), precursors.end(), n);
  if (it == precursors.end() || *it != n) precursors.insert(it, n);
}

RoutingTable::RoutingTable(NodeId owner, SeqNum ownSeq) : owner_(owner) {
  RouteEntry self;
  self.dest = owner;
  self.destSeq = ownSeq;
  self.hopCount = 0;
  self.nextHop = owner;
  self.lifetime = kForever;
  self.valid = true;
  entries_.emplace(owner, std::move(self));
}

const RouteEntry* RoutingTable::find(NodeId dest) const {
  auto it = entries_.find(dest);
  return it == entries_.end() ? nullptr : &it->second;
}

RouteEntry* RoutingTable::find(NodeId dest) {
  auto it = entries_.find(dest);
  return it == entries_.end() ? nullptr : &it->second;
}

const RouteEntry* RoutingTable::findUsable(NodeId dest, SimTime now) const {
  const RouteEntry* e = find(dest);
  return e != nullptr && e->usable(now) ? e : nullptr;
}

RouteEntry& RoutingTable::put(RouteEntry entry) {
  auto& slot = entries_[entry.dest];
  slot = std::move(entry);
  return slot;
}

void RoutingTable::setOwnSeq(SeqNum seq) { entries_.at(owner_).destSeq = seq; }

void RoutingTable::processHello(NodeId sender, HelloSeq hsn, SimTime now, SimTime holdTime) {
  if (sender == owner_) return;
  RouteEntry& route = entries_[sender];
  const bool wasUsable = route.usable(now);
  route.dest = sender;
  route.hopCount = 1;
  route.nextHop = sender;
  route.destSeq = hsn.value;
  route.lifetime = wasUsable ? std::max(route.lifetime, now + holdTime) : now + holdTime;
  route.valid = true;
}

void RoutingTable::expire(SimTime now, SimTime gcDelay) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    RouteEntry& e = it->second;
    if (e.dest != owner_ && e.valid && now > e.lifetime) {
      e.valid = false;
      e.invalidSince = now;
    }
    if (!e.valid && now > e.invalidSince + gcDelay) {
      it = entries_.erase(it);
    } else {
      ++it;
    }
  }
}

std::vector<RouteEntry> RoutingTable::invalidateVia(
    NodeId brokenNextHop, std::optional<std::span<const NodeId>> unreachable, SimTime now) {
  std::vector<RouteEntry> affected;
  for (auto& [dest, e] : entries_) {
    if (dest == owner_ || !e.valid || e.nextHop != brokenNextHop) continue;
    if (unreachable && std::find(unreachable->begin(), unreachable->end(), dest) ==
                           unreachable->end()) {
      continue;
    }
    e.valid = false;
    e.invalidSince = now;
    affected.push_back(e);
  }
  return affected;
}

void RoutingTable::dump(std::ostream& os) const {
  for (const auto& [dest, e] : entries_) {
    os << dest << '\t' << e.destSeq << '\t' << e.hopCount << '\t' << e.nextHop << '\t'
       << (e.valid ? "valid" : "invalid") << '\t';
    if (e.lifetime == kForever) {
      os << "inf";
    } else {
      os << std::fixed << std::setprecision(6) << e.lifetime;
    }
    os << '\t';
    if (e.precursors.empty()) os << '-';
    for (std::size_t i = 0; i < e.precursors.size(); ++i) {
      if (i) os << ',';
      os << e.precursors[i];
    }
    os << '\n';
  }
}

bool isFresher(SeqNum seq, HopCount hops, const RouteEntry& current) {
  return seq > current.destSeq || (seq == current.destSeq && hops < current.hopCount);
}

std::string_view outcomeName(AggregateOutcome o) {
  switch (o) {
    case AggregateOutcome::Duplicate: return "duplicate";
    case AggregateOutcome::Retransmission: return "retransmission";
    case AggregateOutcome::Aggregated: return "aggregated";
    case AggregateOutcome::NewEntry: return "new";
  }
  return "?";
}

PendingRequestTable::PendingRequestTable(SimTime lifetime, bool updatePrecursorOnRetransmission)
    : lifetime_(lifetime), updatePrecursor_(updatePrecursorOnRetransmission) {}

AggregateOutcome PendingRequestTable::aggregate(const Rreq& rreq, NodeId sender, SimTime now) {
  // Same origin and RID anywhere in the table: a replica.
  for (const auto& [dest, entry] : entries_) {
    for (const auto& t : entry.tuples) {
      if (t.origin == rreq.origin && t.rid == rreq.rid) return AggregateOutcome::Duplicate;
    }
  }

  auto it = entries_.find(rreq.dest);
  if (it == entries_.end()) {
    PendingRequestEntry entry{rreq.dest, {{rreq.origin, rreq.rid, sender}}, now + lifetime_};
    entries_.emplace(rreq.dest, std::move(entry));
    return AggregateOutcome::NewEntry;
  }

  PendingRequestEntry& entry = it->second;
  entry.lifetime = now + lifetime_;
  for (auto& t : entry.tuples) {
    if (t.origin == rreq.origin) {
      // The origin timed out and retried with a fresh RID.
      t.rid = rreq.rid;
      if (updatePrecursor_) t.precursorNeighbor = sender;
      return AggregateOutcome::Retransmission;
    }
  }
  entry.tuples.push_back({rreq.origin, rreq.rid, sender});
  return AggregateOutcome::Aggregated;
}

std::vector<NodeId> PendingRequestTable::takePrecursors(NodeId dest) {
  std::vector<NodeId> out;
  auto entry = remove(dest);
  if (!entry) return out;
  for (const auto& t : entry->tuples) {
    if (std::find(out.begin(), out.end(), t.precursorNeighbor) == out.end()) {
      out.push_back(t.precursorNeighbor);
    }
  }
  return out;
}

std::optional<PendingRequestEntry> PendingRequestTable::remove(NodeId dest) {
  auto it = entries_.find(dest);
  if (it == entries_.end()) return std::nullopt;
  PendingRequestEntry e = std::move(it->second);
  entries_.erase(it);
  return e;
}

const PendingRequestEntry* PendingRequestTable::find(NodeId dest) const {
  auto it = entries_.find(dest);
  return it == entries_.end() ? nullptr : &it->second;
}

void PendingRequestTable::expire(SimTime now) {
  std::erase_if(entries_, [now](const auto& kv) { return now > kv.second.lifetime; });
}

void PendingRequestTable::dump(std::ostream& os) const {
  for (const auto& [dest, e] : entries_) {
    os << dest << '\t' << std::fixed << std::setprecision(6) << e.lifetime << '\t';
    for (std::size_t i = 0; i < e.tuples.size(); ++i) {
      if (i) os << ',';
      os << '(' << e.tuples[i].origin << ':' << e.tuples[i].rid << ':'
         << e.tuples[i].precursorNeighbor << ')';
    }
    os << '\n';
  }
}

}  // namespace adara
