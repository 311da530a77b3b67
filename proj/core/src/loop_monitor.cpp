#include "adara/loop_monitor.hpp"

#include <algorithm>

#include "adara/simulator.hpp"

namespace adara {

std::optional<LoopViolation> findLoop(std::span<const RoutingTable* const> tables, NodeId dest,
                                      SimTime now) {
  const std::size_t n = tables.size();
  auto next = [&](std::size_t i) -> std::optional<std::size_t> {
    const RouteEntry* e = tables[i]->findUsable(dest, now);
    if (e == nullptr || e->hopCount == 0 || raw(e->nextHop) >= n) return std::nullopt;
    return raw(e->nextHop);
  };
  // 0 = unvisited, 1 = on the current walk, 2 = known to terminate.
  std::vector<int> state(n, 0);
  for (std::size_t start = 0; start < n; ++start) {
    if (state[start] != 0) continue;
    std::vector<std::size_t> walk;
    std::optional<std::size_t> cur = start;
    while (cur && state[*cur] == 0) {
      state[*cur] = 1;
      walk.push_back(*cur);
      cur = next(*cur);
    }
    if (cur && state[*cur] == 1) {
      LoopViolation v{dest, {}, true};
      auto it = std::find(walk.begin(), walk.end(), *cur);
      for (; it != walk.end(); ++it) v.cycle.push_back(nodeId(static_cast<std::uint32_t>(*it)));
      std::rotate(v.cycle.begin(), std::min_element(v.cycle.begin(), v.cycle.end()),
                  v.cycle.end());
      const SeqNum seq = tables[raw(v.cycle.front())]->find(dest)->destSeq;
      for (NodeId c : v.cycle) {
        if (tables[raw(c)]->find(dest)->destSeq != seq) v.equalSeq = false;
      }
      return v;
    }
    for (std::size_t w : walk) state[w] = 2;
  }
  return std::nullopt;
}

std::vector<LoopViolation> findLoops(std::span<const RoutingTable* const> tables, SimTime now) {
  std::vector<LoopViolation> out;
  for (std::size_t d = 0; d < tables.size(); ++d) {
    if (auto v = findLoop(tables, nodeId(static_cast<std::uint32_t>(d)), now)) {
      out.push_back(std::move(*v));
    }
  }
  return out;
}

void attachLoopMonitor(Simulator& sim, std::uint64_t* count) {
  sim.addProbe([count](Simulator& s, SimTime now) {
    std::vector<const RoutingTable*> tables;
    tables.reserve(s.nodeCount());
    for (std::uint32_t i = 0; i < s.nodeCount(); ++i) {
      tables.push_back(&s.engine(nodeId(i)).routingTable());
    }
    for (const auto& v : findLoops(tables, now)) {
      s.trace().loop(now, v.dest, v.cycle, v.equalSeq);
      if (count != nullptr) ++*count;
    }
  });
}

}  // namespace adara
