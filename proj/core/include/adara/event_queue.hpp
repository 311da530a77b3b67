#pragma once

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <vector>

#include "adara/types.hpp"

namespace adara {

/// Time-ordered queue; events at equal times pop in insertion order.
template <class Payload>
class EventQueue {
 public:
  struct Event {
    SimTime time;
    std::uint64_t seq;
    Payload payload;
  };

  /// Throws std::logic_error when `time` lies before the current time.
  void schedule(SimTime time, Payload payload) {
    if (time < now_) throw std::logic_error("event scheduled in the past");
    heap_.push(Event{time, nextSeq_++, std::move(payload)});
  }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  SimTime now() const { return now_; }
  SimTime nextTime() const { return heap_.empty() ? kForever : heap_.top().time; }

  Event pop() {
    Event e = heap_.top();
    heap_.pop();
    now_ = e.time;
    return e;
  }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t nextSeq_ = 0;
  SimTime now_ = 0.0;
};

}  // namespace adara
