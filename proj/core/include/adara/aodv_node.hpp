#pragma once

#include <map>
#include <set>
#include <tuple>
#include <utility>

#include "adara/engine.hpp"

namespace adara {

/// Reference AODV router used as the comparison baseline: flooded RREQs
/// filtered by (source, broadcast id) records, replies unicast along the
/// reverse path, route errors sent only to precursors, and unconditional
/// periodic hellos.
class AodvNode final : public EngineBase {
 public:
  explicit AodvNode(NodeId id, ProtocolParams params = {});

  std::string_view name() const override { return "aodv"; }

  NodeOutput handleSignaling(const SignalingPacket& pkt, NodeId sender, SimTime now) override;
  NodeOutput handleRreq(const Rreq& rreq, NodeId sender, SimTime now);
  NodeOutput handleRrep(const Rrep& rrep, NodeId sender, SimTime now);
  NodeOutput handleRerr(const Rerr& rerr, NodeId sender, SimTime now);
  NodeOutput handleHello(const Hello& hello, NodeId sender, SimTime now);
  NodeOutput onTimer(SimTime now) override;

  /// Live (source, broadcast id) records.
  bool hasRecord(NodeId source, RequestId broadcastId, SimTime now) const;
  std::size_t recordCount() const { return records_.size(); }

 protected:
  void originateDiscovery(NodeId dest, unsigned retries, SimTime now, NodeOutput& out) override;
  void reportNoRoute(const DataPacket& pkt, NodeId prevHop, SimTime now, NodeOutput& out) override;
  void linkDown(NodeId neighbor, SimTime now, NodeOutput& out) override;

 private:
  void neighborHeard(NodeId sender, HelloSeq hsn, SimTime now);
  /// Sends a reply for `dest` one hop back toward `requester`.
  bool replyToward(NodeId requester, NodeId dest, SimTime now, NodeOutput& out);
  void sendRerrToPrecursors(const std::vector<RouteEntry>& invalidated, NodeOutput& out);

  std::map<std::pair<NodeId, RequestId>, SimTime> records_;
  std::set<std::tuple<NodeId, SeqNum, NodeId>> forwardedReplies_;
};

}  // namespace adara
