#pragma once

#include <cstddef>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "avi/types.hpp"

namespace avi {

// Global event times for a set of elemental steps over a duration: the
// sorted, deduplicated union of { j * h_i : 0 <= j <= duration / h_i }
// over every term i, in ticks. Always contains 0; the last event is the
// largest multiple of any step that fits in the duration.
class EventSchedule {
 public:
  EventSchedule() = default;

  // Throws ScheduleError on an empty term list or when the event count
  // would overflow sane memory / exact-double-tick bounds; throws
  // ContractError on duration < 1 or a step < 1.
  static EventSchedule build(std::span<const PotentialTerm> terms,
                             Tick duration_ticks);

  std::size_t size() const { return events_.size(); }
  Tick duration_ticks() const { return duration_; }

  // Tick of the k-th event, 0 <= k < size().
  Tick xi(std::size_t k) const;

  // Indices of terms whose step divides xi(k), ascending. k = 0 is an
  // error: elemental sums start at j = 1, so no impulse is due at t=0.
  std::vector<std::size_t> due_terms(std::size_t k) const;

  // Event index of the j-th occurrence of term i: xi(omega(i, j)) is
  // exactly j * step(i). Requires j >= 0 and j * step(i) <= duration.
  std::size_t omega(std::size_t term_index, Tick j) const;

  std::span<const Tick> events() const { return events_; }
  std::span<const Tick> term_steps() const { return steps_; }

 private:
  std::vector<Tick> events_;
  std::vector<Tick> steps_;  // per input term, same order
  Tick duration_ = 0;
};

// Lazy realization of the same event sequence via a k-way merge on a
// min-heap; yields exactly EventSchedule::build's events in order.
class LazyEventQueue {
 public:
  LazyEventQueue(std::span<const PotentialTerm> terms, Tick duration_ticks);

  // Next event tick, or nullopt once the sequence is exhausted.
  std::optional<Tick> next();

 private:
  struct Entry {
    Tick tick;
    std::size_t term;
    bool operator>(const Entry& o) const { return tick > o.tick; }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap_;
  std::vector<Tick> steps_;
  Tick duration_ = 0;
  bool emitted_any_ = false;
  Tick last_ = -1;
};

}  // namespace avi
