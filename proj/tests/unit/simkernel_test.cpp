#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "adara/event_queue.hpp"
#include "adara/rng.hpp"
#include "adara/simulator.hpp"
#include "gen.hpp"

namespace adara {
namespace {

TEST(EventQueue, PopsByTimeThenInsertionOrder) {
  EventQueue<int> q;
  q.schedule(2.0, 1);
  q.schedule(1.0, 2);
  q.schedule(2.0, 3);
  q.schedule(1.0, 4);
  std::vector<int> order;
  while (!q.empty()) order.push_back(q.pop().payload);
  EXPECT_EQ(order, (std::vector<int>{2, 4, 1, 3}));
  EXPECT_EQ(q.now(), 2.0);
}

TEST(EventQueue, RefusesThePast) {
  EventQueue<int> q;
  q.schedule(1.0, 0);
  q.pop();
  EXPECT_NO_THROW(q.schedule(1.0, 1));
  EXPECT_THROW(q.schedule(0.5, 2), std::logic_error);
}

TEST(Rng, SameSeedSameDraws) {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.uniform01(), b.uniform01());
}

TEST(Rng, StreamsAreSeparatedByPurposeAndIndex) {
  std::set<std::uint64_t> seeds;
  for (const char* purpose : {"radio", "mobility", "traffic"}) {
    for (std::uint64_t i = 0; i < 10; ++i) seeds.insert(streamSeed(7, purpose, i));
  }
  EXPECT_EQ(seeds.size(), 30u);
  EXPECT_EQ(streamSeed(7, "radio", 3), streamSeed(7, "radio", 3));
  EXPECT_NE(streamSeed(7, "radio", 3), streamSeed(8, "radio", 3));
}

TEST(Rng, DrawsStayInRange) {
  Rng r(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform(2.0, 5.0);
    EXPECT_GE(u, 2.0);
    EXPECT_LT(u, 5.0);
    EXPECT_LT(r.index(7), 7u);
  }
}

TEST(Radio, BoundaryDistanceIsInRange) {
  RadioModel radio;
  EXPECT_TRUE(radio.inRange({0, 0}, {250, 0}));
  EXPECT_FALSE(radio.inRange({0, 0}, {251, 0}));
  EXPECT_TRUE(radio.inRange({0, 0}, {150, 200}));
}

TEST(Radio, CertainLossIsRejected) {
  RadioModel radio;
  radio.lossProb = 1.0;
  EXPECT_THROW(radio.validate(), std::invalid_argument);
  radio.lossProb = 0.99;
  EXPECT_NO_THROW(radio.validate());
  radio.range = 0.0;
  EXPECT_THROW(radio.validate(), std::invalid_argument);
}

// Node 0 at the center of a plus: 1 and 2 at exactly 250 m, 4 close by,
// 3 one meter too far.
Scenario plusScenario() {
  Scenario s;
  s.nodeCount = 5;
  s.area = {1000.0, 1000.0};
  s.vMax = 0.0;
  s.flows = 0;
  s.duration = 5.0;
  s.timersStart = 100.0;
  s.radio.jitter = 0.0;
  s.positions = {{100, 100}, {350, 100}, {100, 350}, {351, 100}, {0, 0}};
  return s;
}

TEST(Simulator, BroadcastReachesEveryNodeInRange) {
  std::ostringstream trace;
  Simulator sim(plusScenario(), &trace);
  EXPECT_EQ(sim.neighborsOf(nodeId(0), 0.0),
            (std::vector<NodeId>{nodeId(1), nodeId(2), nodeId(4)}));
  EXPECT_EQ(sim.broadcast(nodeId(0), Hello{HelloSeq{0}}), 3u);
  ASSERT_TRUE(sim.step());
  EXPECT_DOUBLE_EQ(sim.now(), 0.001);
  sim.step();
  sim.step();
  for (std::uint32_t n : {1u, 2u, 4u}) {
    EXPECT_TRUE(sim.engine(nodeId(n)).neighbors().contains(nodeId(0))) << n;
  }
  EXPECT_TRUE(sim.engine(nodeId(3)).neighbors().empty());
  EXPECT_NE(trace.str().find("at=0.001000000"), std::string::npos);
}

TEST(Simulator, AudienceNarrowsTheDelivery) {
  Simulator sim(plusScenario(), nullptr);
  const std::vector<NodeId> audience{nodeId(2), nodeId(3)};
  EXPECT_EQ(sim.broadcast(nodeId(0), Hello{HelloSeq{0}}, &audience), 1u);
}

TEST(Simulator, StaleHsnIsALogicError) {
  Simulator sim(plusScenario(), nullptr);
  EXPECT_THROW(sim.broadcast(nodeId(0), Hello{HelloSeq{1}}), std::logic_error);
}

TEST(Simulator, UnicastToSelfIsRejected) {
  Simulator sim(plusScenario(), nullptr);
  EXPECT_THROW(sim.unicast(nodeId(0), nodeId(0), DataPacket{nodeId(0), nodeId(1), 0, 0.0}),
               std::invalid_argument);
}

TEST(Simulator, UnicastOutOfRangeIsALinkFailure) {
  std::ostringstream trace;
  Simulator sim(plusScenario(), &trace);
  EXPECT_FALSE(sim.unicast(nodeId(0), nodeId(3), DataPacket{nodeId(0), nodeId(3), 0, 0.0}));
  EXPECT_NE(trace.str().find("linkfail"), std::string::npos);
  // The source keeps its packet and starts looking for a route.
  EXPECT_EQ(sim.engine(nodeId(0)).sendBuffer().size(), 1u);
}

TEST(Simulator, UnicastInRangeArrivesAfterThePropagationDelay) {
  std::ostringstream trace;
  Simulator sim(plusScenario(), &trace);
  EXPECT_TRUE(sim.unicast(nodeId(0), nodeId(4), DataPacket{nodeId(0), nodeId(4), 0, 0.0}));
  ASSERT_TRUE(sim.step());
  EXPECT_DOUBLE_EQ(sim.now(), 0.001);
  EXPECT_NE(trace.str().find("recv\tDATA"), std::string::npos);
}

TEST(Simulator, FixedLinksReplaceGeometry) {
  Scenario s = plusScenario();
  s.links = {{nodeId(0), nodeId(3)}};
  Simulator sim(s, nullptr);
  EXPECT_TRUE(sim.linked(nodeId(0), nodeId(3), 0.0));
  EXPECT_FALSE(sim.linked(nodeId(0), nodeId(4), 0.0));
}

TEST(Simulator, LinksAreSymmetric) {
  props::Gen g(91);
  for (int c = 0; c < 50; ++c) {
    Scenario s;
    s.seed = g.below(1000000);
    s.nodeCount = 12;
    s.vMax = 20.0;
    s.flows = 0;
    s.duration = 20.0;
    Simulator sim(s, nullptr);
    const SimTime t = g.real(0.0, 20.0);
    for (std::uint32_t a = 0; a < 12; ++a) {
      for (std::uint32_t b = 0; b < 12; ++b) {
        EXPECT_EQ(sim.linked(nodeId(a), nodeId(b), t), sim.linked(nodeId(b), nodeId(a), t));
      }
    }
  }
}

TEST(Mobility, StaticNodeNeverMoves) {
  Rng rng(1);
  WaypointParams p;
  p.vMax = 0.0;
  const auto st = initialMobility(p, rng);
  EXPECT_FALSE(st.moving());
  EXPECT_EQ(st.positionAt(0.0), st.positionAt(1e6));
  EXPECT_EQ(stepMobility(st, 50.0, p, rng).position, st.position);
}

TEST(Mobility, LongPauseHoldsTheNodeAtItsWaypoint) {
  Rng rng(5);
  WaypointParams p;
  p.vMax = 20.0;
  p.pause = 900.0;
  const auto first = initialMobility(p, rng);
  const auto second = stepMobility(first, first.arriveAt, p, rng);
  EXPECT_EQ(second.position, first.waypoint);
  EXPECT_GE(second.pauseUntil, 900.0);
  EXPECT_EQ(second.positionAt(899.0), first.waypoint);
}

TEST(Mobility, LegsFollowTheStraightLineFormula) {
  props::Gen g(17);
  Rng rng(17);
  WaypointParams p;
  p.vMax = 20.0;
  p.pause = 2.0;
  auto st = initialMobility(p, rng);
  for (int leg = 0; leg < 1000; ++leg) {
    ASSERT_TRUE(st.moving());
    EXPECT_GT(st.speed, 0.0);
    EXPECT_LE(st.speed, p.vMax);
    EXPECT_TRUE(p.area.contains(st.waypoint));
    const double len = std::hypot(st.waypoint.x - st.position.x, st.waypoint.y - st.position.y);
    EXPECT_NEAR(st.arriveAt - st.pauseUntil, len / st.speed, 1e-9);
    const SimTime t = g.real(st.pauseUntil, st.arriveAt);
    const double f = (t - st.pauseUntil) / (st.arriveAt - st.pauseUntil);
    const Vec2 at = st.positionAt(t);
    EXPECT_NEAR(at.x, st.position.x + f * (st.waypoint.x - st.position.x), 1e-6);
    EXPECT_NEAR(at.y, st.position.y + f * (st.waypoint.y - st.position.y), 1e-6);
    EXPECT_TRUE(p.area.contains(at));
    const SimTime arrived = st.arriveAt;
    const Vec2 target = st.waypoint;
    st = stepMobility(st, arrived, p, rng);
    EXPECT_EQ(st.position, target);
    EXPECT_DOUBLE_EQ(st.pauseUntil, arrived + p.pause);
  }
}

TEST(Traffic, OnOffPacing) {
  OnOffFlow f;
  f.start = 1.0;
  EXPECT_EQ(f.packetsPerOnPeriod(), 15u);
  EXPECT_EQ(f.emissionsIn(1.0, 2.0).size(), 15u);
  EXPECT_TRUE(f.emissionsIn(2.0, 3.0).empty());
  EXPECT_EQ(f.emissionsIn(1.0, 11.0).size(), 75u);
  EXPECT_DOUBLE_EQ(*f.emissionTime(15), 3.0);
  f.stop = 2.5;
  EXPECT_FALSE(f.emissionTime(15).has_value());
}

TEST(Traffic, FlowPrefixIsStableAsTheCountGrows) {
  Scenario s;
  s.nodeCount = 50;
  s.flows = 5;
  const auto few = buildFlows(s);
  s.flows = 20;
  const auto many = buildFlows(s);
  ASSERT_EQ(many.size(), 20u);
  std::set<NodeId> sources;
  for (std::size_t i = 0; i < many.size(); ++i) {
    if (i < few.size()) {
      EXPECT_EQ(many[i].src, few[i].src);
      EXPECT_EQ(many[i].dest, few[i].dest);
      EXPECT_EQ(many[i].start, few[i].start);
    }
    EXPECT_NE(many[i].src, many[i].dest);
    sources.insert(many[i].src);
  }
  EXPECT_EQ(sources.size(), 20u);
}

TEST(Traffic, CertainHotspotSendsEverythingToTheLastNode) {
  Scenario s;
  s.nodeCount = 30;
  s.flows = 12;
  s.hotspotProb = 1.0;
  for (const auto& f : buildFlows(s)) EXPECT_EQ(f.dest, nodeId(29));
}

TEST(Traffic, BothEnginesGetTheSameFlows) {
  Scenario s;
  s.flows = 8;
  s.engine = EngineKind::Adara;
  const auto a = buildFlows(s);
  s.engine = EngineKind::Aodv;
  const auto b = buildFlows(s);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].src, b[i].src);
    EXPECT_EQ(a[i].dest, b[i].dest);
    EXPECT_EQ(a[i].start, b[i].start);
  }
  Simulator sa(s, nullptr);
  s.engine = EngineKind::Adara;
  Simulator sb(s, nullptr);
  for (std::uint32_t n = 0; n < s.nodeCount; ++n) {
    EXPECT_EQ(sa.positionOf(nodeId(n), 7.5), sb.positionOf(nodeId(n), 7.5));
  }
}

}  // namespace
}  // namespace adara
