#pragma once

#include <cstdint>
#include <queue>
#include <vector>

namespace parrot::sim {

enum class EventKind : std::uint8_t {
  mobility_tick,
  chirp_emit,
  app_packet,
  tx_start,
  tx_end,
  deferred_enqueue,
};

struct Event {
  double time = 0.0;
  std::uint64_t order = 0;
  EventKind kind = EventKind::mobility_tick;
  std::uint32_t node = 0;
  std::uint32_t arg = 0;
};

/// Min-heap on (time, insertion order). Equal timestamps run in scheduling order.
class EventQueue {
 public:
  void push(double time, EventKind kind, std::uint32_t node = 0, std::uint32_t arg = 0) {
    heap_.push(Event{time, next_order_++, kind, node, arg});
  }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  const Event& top() const { return heap_.top(); }

  Event pop() {
    Event e = heap_.top();
    heap_.pop();
    return e;
  }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.order > b.order;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_order_ = 0;
};

}  // namespace parrot::sim
