#include <gtest/gtest.h>

#include <algorithm>

#include "adara/adara_node.hpp"

namespace adara {
namespace {

const NodeId S = nodeId(0);
const NodeId A = nodeId(1);
const NodeId B = nodeId(2);
const NodeId M = nodeId(3);
const NodeId N = nodeId(4);
const NodeId O = nodeId(5);
const NodeId Q = nodeId(7);
const NodeId R = nodeId(8);
const NodeId D = nodeId(9);
const NodeId X = nodeId(11);

RouteEntry route(NodeId dest, NodeId next, HopCount hops, SimTime lifetime, SeqNum seq = 1) {
  RouteEntry e;
  e.dest = dest;
  e.destSeq = seq;
  e.hopCount = hops;
  e.nextHop = next;
  e.lifetime = lifetime;
  e.valid = true;
  return e;
}

DataPacket data(NodeId src, NodeId dest, std::uint32_t seq = 0, SimTime at = 0.0) {
  return DataPacket{src, dest, seq, at};
}

template <class T>
std::vector<T> only(const NodeOutput& out) {
  std::vector<T> v;
  for (const auto& b : out.broadcasts) {
    if (const auto* p = std::get_if<T>(&b)) v.push_back(*p);
  }
  return v;
}

TEST(AdaraEnqueue, RoutedPacketGoesToTheNextHop) {
  AdaraNode s(S);
  s.installRoute(route(D, M, 4, 100.0));
  const auto out = s.enqueueData(data(S, D), 1.0);
  ASSERT_EQ(out.unicasts.size(), 1u);
  EXPECT_EQ(out.unicasts.front().first, M);
  EXPECT_TRUE(out.broadcasts.empty());
}

TEST(AdaraEnqueue, UnroutedPacketStartsADiscovery) {
  AdaraNode s(S);
  const auto out = s.enqueueData(data(S, D), 1.0);
  const auto rreqs = only<Rreq>(out);
  ASSERT_EQ(rreqs.size(), 1u);
  EXPECT_EQ(rreqs[0].rid, 1u);
  EXPECT_EQ(rreqs[0].origin, S);
  EXPECT_EQ(rreqs[0].dest, D);
  EXPECT_EQ(rreqs[0].destSeq, 0u);
  EXPECT_EQ(rreqs[0].hopsToOrigin, 0u);
  EXPECT_EQ(rreqs[0].hsn.value, s.sequenceNumber());
  EXPECT_EQ(s.sendBuffer().size(), 1u);
  // The origin's own tuple makes later requests for D aggregate here.
  EXPECT_EQ(s.pendingRequests().find(D)->tuples, (std::vector<PrecursorTuple>{{S, 1, S}}));

  const auto again = s.enqueueData(data(S, D, 1), 1.1);
  EXPECT_TRUE(again.broadcasts.empty());
  EXPECT_EQ(s.sendBuffer().size(), 2u);
}

TEST(AdaraEnqueue, InvalidatedRouteAsksForANewerSeq) {
  AdaraNode s(S);
  auto stale = route(D, M, 3, 1.0, 7);
  stale.valid = false;
  s.installRoute(stale);
  const auto rreqs = only<Rreq>(s.enqueueData(data(S, D), 2.0));
  ASSERT_EQ(rreqs.size(), 1u);
  EXPECT_EQ(rreqs[0].destSeq, 8u);
}

TEST(AdaraEnqueue, FullBufferEvictsTheOldest) {
  AdaraNode s(S);
  for (std::uint32_t i = 0; i < 64; ++i) {
    EXPECT_TRUE(s.enqueueData(data(S, D, i), 0.01 * i).dropped.empty());
  }
  const auto out = s.enqueueData(data(S, D, 64), 1.0);
  ASSERT_EQ(out.dropped.size(), 1u);
  EXPECT_EQ(out.dropped[0].first.seqNo, 0u);
  EXPECT_EQ(out.dropped[0].second, DropReason::BufferFull);
  EXPECT_EQ(s.sendBuffer().size(), 64u);
  EXPECT_EQ(s.sendBuffer().items().back().pkt.seqNo, 64u);
}

TEST(AdaraRreq, FirstRequestCreatesStateAndIsForwarded) {
  AdaraNode m(M);
  const auto out = m.handleRreq(Rreq{1, S, 1, D, 0, 0, HelloSeq{1}}, S, 0.1);
  const RouteEntry* back = m.routingTable().find(S);
  ASSERT_NE(back, nullptr);
  EXPECT_EQ(back->hopCount, 1u);
  EXPECT_EQ(back->nextHop, S);
  EXPECT_EQ(m.pendingRequests().find(D)->tuples, (std::vector<PrecursorTuple>{{S, 1, S}}));
  const auto fwd = only<Rreq>(out);
  ASSERT_EQ(fwd.size(), 1u);
  EXPECT_EQ(fwd[0].hopsToOrigin, 1u);
  EXPECT_EQ(fwd[0].origin, S);
  EXPECT_EQ(fwd[0].hsn.value, m.sequenceNumber());
}

TEST(AdaraRreq, SecondOriginIsAggregatedSilently) {
  AdaraNode m(M);
  m.handleRreq(Rreq{1, S, 1, D, 0, 0, HelloSeq{1}}, S, 0.1);
  const auto out = m.handleRreq(Rreq{1, B, 1, D, 0, 0, HelloSeq{1}}, B, 0.12);
  EXPECT_TRUE(out.broadcasts.empty());
  EXPECT_EQ(m.pendingRequests().find(D)->tuples,
            (std::vector<PrecursorTuple>{{S, 1, S}, {B, 1, B}}));
  EXPECT_NE(m.routingTable().findUsable(B, 0.12), nullptr);
}

TEST(AdaraRreq, ReplicaIsIgnored) {
  AdaraNode o(O);
  o.handleRreq(Rreq{1, S, 1, D, 0, 1, HelloSeq{0}}, M, 0.11);
  const auto out = o.handleRreq(Rreq{1, S, 1, D, 0, 2, HelloSeq{0}}, N, 0.12);
  EXPECT_TRUE(out.empty());
  EXPECT_EQ(o.pendingRequests().find(D)->tuples, (std::vector<PrecursorTuple>{{S, 1, M}}));
}

TEST(AdaraRreq, DestinationRepliesToTheSender) {
  AdaraNode d(D);
  const auto out = d.handleRreq(Rreq{1, S, 1, D, 0, 3, HelloSeq{0}}, Q, 0.13);
  const auto reps = only<Rrep>(out);
  ASSERT_EQ(reps.size(), 1u);
  EXPECT_EQ(reps[0].ldn, (std::vector<NodeId>{Q}));
  EXPECT_EQ(reps[0].dest, D);
  EXPECT_EQ(reps[0].hopsToDest, 0u);
  EXPECT_EQ(reps[0].destSeq, 1u);
  EXPECT_EQ(reps[0].hsn.value, d.sequenceNumber());
  EXPECT_TRUE(only<Rreq>(out).empty());
  EXPECT_EQ(d.pendingRequests().find(D), nullptr);
}

TEST(AdaraRreq, IntermediateWithAFreshRouteReplies) {
  AdaraNode o(O);
  o.installRoute(route(D, Q, 2, 100.0, 4));
  o.handleRreq(Rreq{1, A, 1, N, 0, 1, HelloSeq{0}}, R, 0.1);  // unrelated dest
  const auto out = o.handleRreq(Rreq{1, S, 1, D, 3, 1, HelloSeq{0}}, M, 0.2);
  const auto reps = only<Rrep>(out);
  ASSERT_EQ(reps.size(), 1u);
  EXPECT_EQ(reps[0].ldn, (std::vector<NodeId>{M}));
  EXPECT_EQ(reps[0].hopsToDest, 2u);
  EXPECT_EQ(reps[0].destSeq, 4u);
  EXPECT_EQ(o.routingTable().find(D)->precursors, (std::vector<NodeId>{M}));
}

TEST(AdaraRreq, RouteOlderThanRequestedIsNotEnough) {
  AdaraNode o(O);
  o.installRoute(route(D, Q, 2, 100.0, 4));
  const auto out = o.handleRreq(Rreq{1, S, 1, D, 5, 1, HelloSeq{0}}, M, 0.2);
  EXPECT_TRUE(only<Rrep>(out).empty());
  EXPECT_EQ(only<Rreq>(out).size(), 1u);
}

TEST(AdaraRreq, LateReplicaAfterARetryIsStillIgnored) {
  AdaraNode m(M);
  m.handleRreq(Rreq{1, S, 1, D, 0, 0, HelloSeq{1}}, S, 0.1);
  EXPECT_EQ(only<Rreq>(m.handleRreq(Rreq{2, S, 2, D, 0, 0, HelloSeq{2}}, S, 2.1)).size(), 1u);
  EXPECT_TRUE(m.handleRreq(Rreq{1, S, 1, D, 0, 2, HelloSeq{0}}, N, 2.2).broadcasts.empty());
}

TEST(AdaraRrep, NonDesignatedSingleTupleRouterConsumesIt) {
  AdaraNode n(N);
  n.handleRreq(Rreq{1, S, 1, D, 0, 1, HelloSeq{0}}, M, 0.11);
  const auto out = n.handleRrep(Rrep{D, 1, 2, {M, R}, HelloSeq{0}}, O, 0.14);
  EXPECT_TRUE(out.broadcasts.empty());
  const RouteEntry* e = n.routingTable().find(D);
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->nextHop, O);
  EXPECT_EQ(e->hopCount, 3u);
}

TEST(AdaraRrep, DesignatedRouterForwardsToAllPrecursors) {
  AdaraNode o(O);
  o.handleRreq(Rreq{1, S, 1, D, 0, 1, HelloSeq{0}}, M, 0.11);
  o.handleRreq(Rreq{1, A, 1, D, 0, 1, HelloSeq{0}}, R, 0.12);
  const auto out = o.handleRrep(Rrep{D, 1, 1, {O}, HelloSeq{0}}, Q, 0.13);
  const auto reps = only<Rrep>(out);
  ASSERT_EQ(reps.size(), 1u);
  EXPECT_EQ(reps[0].ldn, (std::vector<NodeId>{M, R}));
  EXPECT_EQ(reps[0].hopsToDest, 2u);
  EXPECT_EQ(o.routingTable().find(D)->precursors, (std::vector<NodeId>{M, R}));
  EXPECT_EQ(o.pendingRequests().find(D), nullptr);
}

TEST(AdaraRrep, AggregatingRouterForwardsEvenWhenNotDesignated) {
  AdaraNode o(O);
  o.handleRreq(Rreq{1, S, 1, D, 0, 1, HelloSeq{0}}, M, 0.11);
  o.handleRreq(Rreq{1, A, 1, D, 0, 1, HelloSeq{0}}, R, 0.12);
  EXPECT_EQ(only<Rrep>(o.handleRrep(Rrep{D, 1, 1, {N}, HelloSeq{0}}, Q, 0.13)).size(), 1u);

  ProtocolParams strict;
  strict.strictLdnForwarding = true;
  AdaraNode literal(O, strict);
  literal.handleRreq(Rreq{1, S, 1, D, 0, 1, HelloSeq{0}}, M, 0.11);
  literal.handleRreq(Rreq{1, A, 1, D, 0, 1, HelloSeq{0}}, R, 0.12);
  EXPECT_TRUE(literal.handleRrep(Rrep{D, 1, 1, {N}, HelloSeq{0}}, Q, 0.13).broadcasts.empty());
}

TEST(AdaraRrep, StaleReplyChangesNothing) {
  AdaraNode o(O);
  o.handleRreq(Rreq{1, S, 1, D, 0, 1, HelloSeq{0}}, M, 0.11);
  o.installRoute(route(D, Q, 2, 100.0, 6));
  const auto out = o.handleRrep(Rrep{D, 5, 1, {O}, HelloSeq{0}}, N, 0.13);
  EXPECT_TRUE(out.broadcasts.empty());
  const RouteEntry* e = o.routingTable().find(D);
  EXPECT_EQ(e->destSeq, 6u);
  EXPECT_EQ(e->nextHop, Q);
  EXPECT_NE(o.pendingRequests().find(D), nullptr);
}

TEST(AdaraRrep, EqualSeqNeedsFewerHops) {
  AdaraNode o(O);
  o.installRoute(route(D, Q, 2, 100.0, 6));
  o.handleRrep(Rrep{D, 6, 1, {}, HelloSeq{0}}, N, 0.1);
  EXPECT_EQ(o.routingTable().find(D)->nextHop, Q);
  o.handleRrep(Rrep{D, 6, 0, {}, HelloSeq{0}}, N, 0.2);
  EXPECT_EQ(o.routingTable().find(D)->nextHop, N);
  EXPECT_EQ(o.routingTable().find(D)->hopCount, 1u);
}

TEST(AdaraRrep, OriginFlushesItsBuffer) {
  AdaraNode s(S);
  s.enqueueData(data(S, D, 0), 0.1);
  s.enqueueData(data(S, D, 1), 0.15);
  const auto out = s.handleRrep(Rrep{D, 1, 3, {S, B}, HelloSeq{0}}, M, 0.2);
  EXPECT_TRUE(out.broadcasts.empty());
  ASSERT_EQ(out.unicasts.size(), 2u);
  EXPECT_EQ(out.unicasts[0].second.seqNo, 0u);
  EXPECT_EQ(out.unicasts[1].second.seqNo, 1u);
  EXPECT_EQ(out.unicasts[0].first, M);
  EXPECT_EQ(s.sendBuffer().size(), 0u);
  EXPECT_TRUE(s.pendingDiscoveries().empty());
}

TEST(AdaraRrep, OnlyTheSenderAsPrecursorMeansNoRebroadcast) {
  AdaraNode o(O);
  o.handleRreq(Rreq{1, S, 1, D, 0, 1, HelloSeq{0}}, M, 0.11);
  EXPECT_TRUE(o.handleRrep(Rrep{D, 1, 3, {O}, HelloSeq{0}}, M, 0.13).broadcasts.empty());
}

TEST(AdaraRerr, InvalidatedRouteWithPrecursorsIsPropagated) {
  AdaraNode o(O);
  auto e = route(D, Q, 2, 100.0, 3);
  e.precursors = {X};
  o.installRoute(e);
  const auto out = o.handleRerr(Rerr{HelloSeq{2}, {{D, 3}}}, Q, 5.0);
  EXPECT_FALSE(o.routingTable().find(D)->valid);
  const auto rerrs = only<Rerr>(out);
  ASSERT_EQ(rerrs.size(), 1u);
  EXPECT_EQ(rerrs[0].unreachable(), (std::vector<UnreachableDest>{{D, 3}}));
}

TEST(AdaraRerr, RouteWithoutPrecursorsIsAbsorbed) {
  AdaraNode o(O);
  o.installRoute(route(D, Q, 2, 100.0, 3));
  const auto out = o.handleRerr(Rerr{HelloSeq{2}, {{D, 3}}}, Q, 5.0);
  EXPECT_FALSE(o.routingTable().find(D)->valid);
  EXPECT_TRUE(out.broadcasts.empty());
}

TEST(AdaraRerr, NoRoutesThroughTheSender) {
  AdaraNode o(O);
  auto e = route(D, Q, 2, 100.0, 3);
  e.precursors = {X};
  o.installRoute(e);
  const auto out = o.handleRerr(Rerr{HelloSeq{2}, {{D, 3}}}, M, 5.0);
  EXPECT_TRUE(o.routingTable().find(D)->valid);
  EXPECT_TRUE(out.broadcasts.empty());
}

TEST(AdaraData, RelayForwardsOnItsRoute) {
  AdaraNode m(M);
  m.installRoute(route(D, O, 3, 100.0));
  const auto out = m.handleData(data(S, D), S, 1.0);
  ASSERT_EQ(out.unicasts.size(), 1u);
  EXPECT_EQ(out.unicasts[0].first, O);
  EXPECT_EQ(out.unicasts[0].second.ttl, kDefaultDataTtl - 1);
}

TEST(AdaraData, RelayWithAnExpiredRouteReportsAnError) {
  AdaraNode m(M);
  m.installRoute(route(D, O, 3, 10.0, 4));
  const auto out = m.handleData(data(S, D), S, 10.5);
  ASSERT_EQ(out.dropped.size(), 1u);
  EXPECT_EQ(out.dropped[0].second, DropReason::NoRoute);
  const auto rerrs = only<Rerr>(out);
  ASSERT_EQ(rerrs.size(), 1u);
  EXPECT_EQ(rerrs[0].unreachable().front().dest, D);
  // A burst of packets for the same destination yields one RERR per second.
  EXPECT_TRUE(only<Rerr>(m.handleData(data(S, D, 1), S, 10.6)).empty());
  EXPECT_EQ(only<Rerr>(m.handleData(data(S, D, 2), S, 11.6)).size(), 1u);
}

TEST(AdaraData, DestinationDelivers) {
  AdaraNode d(D);
  const auto out = d.handleData(data(S, D, 7), Q, 1.0);
  ASSERT_EQ(out.delivered.size(), 1u);
  EXPECT_EQ(out.delivered[0].seqNo, 7u);
}

TEST(AdaraData, TtlRunsOut) {
  AdaraNode m(M);
  m.installRoute(route(D, O, 3, 100.0));
  auto pkt = data(S, D);
  pkt.ttl = 1;
  const auto out = m.handleData(pkt, S, 1.0);
  EXPECT_TRUE(out.unicasts.empty());
  ASSERT_EQ(out.dropped.size(), 1u);
  EXPECT_EQ(out.dropped[0].second, DropReason::TtlExpired);
}

TEST(AdaraTimer, RecentBroadcastSuppressesTheHello) {
  AdaraNode d(D);
  d.handleRreq(Rreq{1, S, 1, D, 0, 3, HelloSeq{0}}, Q, 9.7);
  EXPECT_TRUE(only<Hello>(d.onTimer(10.0)).empty());
  const SeqNum before = d.sequenceNumber();
  const auto hellos = only<Hello>(d.onTimer(11.0));
  ASSERT_EQ(hellos.size(), 1u);
  EXPECT_EQ(hellos[0].hsn.value, before + 1);
  EXPECT_EQ(d.sequenceNumber(), before + 1);
}

TEST(AdaraTimer, SilentNeighborIsDeclaredDown) {
  AdaraNode o(O);
  o.handleHello(Hello{HelloSeq{1}}, Q, 0.5);
  auto e = route(D, Q, 2, 100.0, 3);
  e.precursors = {M};
  o.installRoute(e);
  EXPECT_TRUE(o.onTimer(2.4).linksDown.empty());
  const auto out = o.onTimer(2.5);
  EXPECT_EQ(out.linksDown, (std::vector<NodeId>{Q}));
  EXPECT_FALSE(o.routingTable().find(D)->valid);
  EXPECT_FALSE(o.routingTable().find(Q)->valid);
  const auto rerrs = only<Rerr>(out);
  ASSERT_EQ(rerrs.size(), 1u);
  EXPECT_EQ(rerrs[0].unreachable(), (std::vector<UnreachableDest>{{D, 3}}));
}

TEST(AdaraTimer, RetriesUseFreshRidsThenGiveUp) {
  AdaraNode s(S);
  for (std::uint32_t i = 0; i < 3; ++i) s.enqueueData(data(S, D, i), 0.0);
  auto out = s.onTimer(2.0);
  ASSERT_EQ(only<Rreq>(out).size(), 1u);
  EXPECT_EQ(only<Rreq>(out)[0].rid, 2u);
  out = s.onTimer(4.0);
  ASSERT_EQ(only<Rreq>(out).size(), 1u);
  EXPECT_EQ(only<Rreq>(out)[0].rid, 3u);
  out = s.onTimer(6.0);
  EXPECT_TRUE(only<Rreq>(out).empty());
  ASSERT_EQ(out.dropped.size(), 3u);
  for (const auto& [pkt, reason] : out.dropped) EXPECT_EQ(reason, DropReason::DiscoveryFailed);
  EXPECT_EQ(s.sendBuffer().size(), 0u);
}

TEST(AdaraTimer, OldBufferedPacketsAreDropped) {
  ProtocolParams p;
  p.rreqRetries = 100;
  AdaraNode s(S, p);
  s.enqueueData(data(S, D, 0), 0.0);
  s.enqueueData(data(S, D, 1), 5.0);
  EXPECT_TRUE(s.onTimer(30.0).dropped.empty());
  const auto out = s.onTimer(30.5);
  ASSERT_EQ(out.dropped.size(), 1u);
  EXPECT_EQ(out.dropped[0].first.seqNo, 0u);
  EXPECT_EQ(out.dropped[0].second, DropReason::BufferTimeout);
}

TEST(AdaraSeq, ReplySeqIsMaxThenIncrement) {
  AdaraNode d(D);
  EXPECT_EQ(d.originateRrepSeq(3), 4u);
  EXPECT_EQ(d.originateRrepSeq(0), 5u);
  AdaraNode e(D);
  e.originateRrepSeq(3);
  EXPECT_EQ(e.originateRrepSeq(9), 10u);
  const SeqNum a = e.originateRrepSeq(0);
  EXPECT_GT(e.originateRrepSeq(0), a);
  EXPECT_EQ(e.routingTable().find(D)->destSeq, e.sequenceNumber());
}

}  // namespace
}  // namespace adara
