#include <benchmark/benchmark.h>

#include "adara/route_state.hpp"
#include "adara/run.hpp"
#include "adara/simulator.hpp"

namespace {

using namespace adara;

// Many origins requesting a handful of destinations, as at a relay near a hotspot.
void BM_PrtAggregate(benchmark::State& state) {
  const auto origins = static_cast<std::uint32_t>(state.range(0));
  Rng rng(1);
  for (auto _ : state) {
    PendingRequestTable prt(6.0);
    for (std::uint32_t i = 0; i < origins; ++i) {
      const Rreq rreq{1, nodeId(i), 1, nodeId(1000 + i % 4), 0, 2, HelloSeq{0}};
      benchmark::DoNotOptimize(prt.aggregate(rreq, nodeId(static_cast<std::uint32_t>(rng.index(8))), 0.0));
    }
    for (std::uint32_t d = 0; d < 4; ++d) benchmark::DoNotOptimize(prt.takePrecursors(nodeId(1000 + d)));
  }
  state.SetItemsProcessed(state.iterations() * origins);
}
BENCHMARK(BM_PrtAggregate)->Arg(8)->Arg(64)->Arg(512);

void BM_RoutingTableLookup(benchmark::State& state) {
  RoutingTable rt(nodeId(0), 1);
  for (std::uint32_t d = 1; d <= 100; ++d) {
    RouteEntry e;
    e.dest = nodeId(d);
    e.nextHop = nodeId(d % 7 + 1);
    e.hopCount = d % 5 + 1;
    e.lifetime = 100.0;
    e.valid = true;
    rt.put(e);
  }
  std::uint32_t d = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rt.findUsable(nodeId(d++ % 101), 5.0));
  }
}
BENCHMARK(BM_RoutingTableLookup);

void BM_SimulatedRun(benchmark::State& state) {
  Scenario s;
  s.engine = state.range(0) == 0 ? EngineKind::Adara : EngineKind::Aodv;
  s.nodeCount = 50;
  s.flows = 10;
  s.duration = 30.0;
  std::uint64_t events = 0;
  for (auto _ : state) {
    Simulator sim(s, nullptr);
    sim.run();
    events += sim.eventsProcessed();
  }
  state.SetLabel(std::string(engineName(s.engine)));
  state.counters["events/s"] = benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SimulatedRun)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
