#pragma once

#include <map>
#include <utility>

#include "adara/engine.hpp"

namespace adara {

/// ADARA router: on-demand routing with route-request aggregation in the
/// pending request table and broadcast replies scoped by designated
/// neighbors. Every signaling packet carries the router's sequence number
/// (HSN) and counts as a hello, so periodic hellos are suppressed while the
/// router is otherwise broadcasting.
class AdaraNode final : public EngineBase {
 public:
  explicit AdaraNode(NodeId id, ProtocolParams params = {});

  std::string_view name() const override { return "adara"; }

  NodeOutput handleSignaling(const SignalingPacket& pkt, NodeId sender, SimTime now) override;
  NodeOutput handleRreq(const Rreq& rreq, NodeId sender, SimTime now);
  NodeOutput handleRrep(const Rrep& rrep, NodeId sender, SimTime now);
  NodeOutput handleRerr(const Rerr& rerr, NodeId sender, SimTime now);
  NodeOutput handleHello(const Hello& hello, NodeId sender, SimTime now);
  NodeOutput onTimer(SimTime now) override;

  const PendingRequestTable& pendingRequests() const { return prt_; }

 protected:
  void originateDiscovery(NodeId dest, unsigned retries, SimTime now, NodeOutput& out) override;
  void reportNoRoute(const DataPacket& pkt, NodeId prevHop, SimTime now, NodeOutput& out) override;
  void linkDown(NodeId neighbor, SimTime now, NodeOutput& out) override;

 private:
  void broadcast(SignalingPacket pkt, SimTime now, NodeOutput& out);
  void neighborHeard(NodeId sender, HelloSeq hsn, SimTime now);

  /// Requests handled here within the PRT lifetime. A PRT tuple disappears
  /// once a reply consumes it or a retry overwrites its RID, so late replicas
  /// are recognized through this set instead.
  bool alreadySeen(NodeId origin, RequestId rid, SimTime now) const;
  void markSeen(NodeId origin, RequestId rid, SimTime now);
  /// Removes the PRT entry for dest and returns its distinct precursor
  /// neighbors other than this router.
  std::vector<NodeId> consumePending(NodeId dest, SimTime now);

  PendingRequestTable prt_;
  std::map<std::pair<NodeId, RequestId>, SimTime> seen_;
};

}  // namespace adara
