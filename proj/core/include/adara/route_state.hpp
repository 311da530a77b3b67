#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "adara/messages.hpp"
#include "adara/types.hpp"

namespace adara {

struct RouteEntry {
  NodeId dest;
  SeqNum destSeq = 0;
  HopCount hopCount = 0;
  NodeId nextHop;
  std::vector<NodeId> precursors;  ///< sorted, unique
  SimTime lifetime = 0.0;
  bool valid = false;
  SimTime invalidSince = 0.0;

  /// Valid and not past its lifetime (alive while now <= lifetime).
  bool usable(SimTime now) const { return valid && now <= lifetime; }
  bool hasPrecursors() const { return !precursors.empty(); }
  void addPrecursor(NodeId n);
};

/// Routing table (RT) of one router. Iteration order is by destination id.
class RoutingTable {
 public:
  RoutingTable(NodeId owner, SeqNum ownSeq);

  NodeId owner() const { return owner_; }

  const RouteEntry* find(NodeId dest) const;
  RouteEntry* find(NodeId dest);
  const RouteEntry* findUsable(NodeId dest, SimTime now) const;

  /// Inserts or overwrites the entry for `entry.dest`.
  RouteEntry& put(RouteEntry entry);

  /// Keeps the self-route (hop 0, always valid) in sync with the owner's counter.
  void setOwnSeq(SeqNum seq);

  /// Neighbor-route refresh on any received signaling packet: hop 1 via the
  /// sender, sequence number taken from the packet's HSN, marked valid.
  void processHello(NodeId sender, HelloSeq hsn, SimTime now, SimTime holdTime);

  /// Marks entries past their lifetime invalid (sequence number retained) and
  /// garbage-collects entries that have been invalid for longer than gcDelay.
  void expire(SimTime now, SimTime gcDelay = 60.0);

  /// Invalidates valid entries routed through `brokenNextHop`. With a list of
  /// unreachable destinations only those are affected; with nullopt every
  /// entry using that next hop is (link-failure detection). Returns copies of
  /// the invalidated entries, including their precursor sets.
  std::vector<RouteEntry> invalidateVia(NodeId brokenNextHop,
                                        std::optional<std::span<const NodeId>> unreachable,
                                        SimTime now);

  const std::map<NodeId, RouteEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  /// One line per entry: dest seq hops next_hop valid lifetime precursors.
  void dump(std::ostream& os) const;

 private:
  NodeId owner_;
  std::map<NodeId, RouteEntry> entries_;
};

/// Freshness rule shared by both engines: strictly newer sequence number, or
/// the same one with a strictly shorter hop count.
bool isFresher(SeqNum seq, HopCount hops, const RouteEntry& current);

struct PrecursorTuple {
  NodeId origin;
  RequestId rid;
  NodeId precursorNeighbor;
  friend bool operator==(const PrecursorTuple&, const PrecursorTuple&) = default;
};

struct PendingRequestEntry {
  NodeId dest;
  std::vector<PrecursorTuple> tuples;
  SimTime lifetime = 0.0;
};

enum class AggregateOutcome { Duplicate, Retransmission, Aggregated, NewEntry };

/// Duplicate and Aggregated stop the RREQ here; the other two forward it.
constexpr bool requiresForwarding(AggregateOutcome o) {
  return o == AggregateOutcome::Retransmission || o == AggregateOutcome::NewEntry;
}

std::string_view outcomeName(AggregateOutcome o);

/// Pending request table (PRT): per-destination aggregation of outstanding
/// route requests.
class PendingRequestTable {
 public:
  /// `updatePrecursorOnRetransmission` also rewrites the precursor neighbor of
  /// a retransmitted request (it may arrive over a different neighbor after
  /// movement). Off reproduces the literal RID-only update.
  explicit PendingRequestTable(SimTime lifetime, bool updatePrecursorOnRetransmission = true);

  AggregateOutcome aggregate(const Rreq& rreq, NodeId sender, SimTime now);

  /// Precursor neighbors of every tuple for dest (first-seen order, no
  /// duplicates); the entry is removed. Empty when there is no entry.
  std::vector<NodeId> takePrecursors(NodeId dest);

  std::optional<PendingRequestEntry> remove(NodeId dest);
  const PendingRequestEntry* find(NodeId dest) const;

  /// Deletes entries past their lifetime (alive while now <= lifetime).
  void expire(SimTime now);

  const std::map<NodeId, PendingRequestEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  SimTime lifetime() const { return lifetime_; }

  void dump(std::ostream& os) const;

 private:
  SimTime lifetime_;
  bool updatePrecursor_;
  std::map<NodeId, PendingRequestEntry> entries_;
};

}  // namespace adara
