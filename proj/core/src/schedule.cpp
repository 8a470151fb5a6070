#include "avi/schedule.hpp"

#include <algorithm>
#include <string>

#include "avi/errors.hpp"

namespace avi {

namespace {

// Ticks must stay exactly representable as doubles for diagnostics
// timestamps, and the materialized union must fit in memory.
constexpr Tick kMaxDuration = Tick{1} << 53;
constexpr std::size_t kMaxEvents = std::size_t{1} << 27;

std::vector<Tick> collect_steps(std::span<const PotentialTerm> terms,
                                Tick duration_ticks) {
  if (terms.empty()) {
    throw ScheduleError("schedule: term list is empty, no time structure");
  }
  if (duration_ticks < 1) {
    throw ContractError("schedule: duration_ticks must be >= 1, got " +
                        std::to_string(duration_ticks));
  }
  if (duration_ticks > kMaxDuration) {
    throw ScheduleError("schedule: duration " + std::to_string(duration_ticks) +
                        " ticks exceeds the exactly representable range");
  }
  std::vector<Tick> steps;
  steps.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const Tick h = terms[i].step_ticks;
    if (h < 1) {
      throw ContractError("schedule: term " + std::to_string(i) +
                          " has step_ticks < 1");
    }
    steps.push_back(h);
  }
  return steps;
}

}  // namespace

EventSchedule EventSchedule::build(std::span<const PotentialTerm> terms,
                                   Tick duration_ticks) {
  EventSchedule s;
  s.steps_ = collect_steps(terms, duration_ticks);
  s.duration_ = duration_ticks;

  std::size_t bound = 0;
  for (Tick h : s.steps_) {
    bound += static_cast<std::size_t>(duration_ticks / h) + 1;
    if (bound > kMaxEvents) {
      throw ScheduleError("schedule: event count would exceed " +
                          std::to_string(kMaxEvents));
    }
  }

  s.events_.reserve(bound);
  for (Tick h : s.steps_) {
    for (Tick t = 0; t <= duration_ticks; t += h) {
      s.events_.push_back(t);
    }
  }
  std::sort(s.events_.begin(), s.events_.end());
  s.events_.erase(std::unique(s.events_.begin(), s.events_.end()),
                  s.events_.end());
  return s;
}

Tick EventSchedule::xi(std::size_t k) const {
  if (k >= events_.size()) {
    throw ScheduleError("schedule: event index " + std::to_string(k) +
                        " out of range, have " +
                        std::to_string(events_.size()) + " events");
  }
  return events_[k];
}

std::vector<std::size_t> EventSchedule::due_terms(std::size_t k) const {
  if (k == 0) {
    throw ScheduleError(
        "schedule: no impulses are due at event 0, elemental sums start at "
        "the first step");
  }
  const Tick t = xi(k);
  std::vector<std::size_t> due;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (t % steps_[i] == 0) due.push_back(i);
  }
  return due;
}

std::size_t EventSchedule::omega(std::size_t term_index, Tick j) const {
  if (term_index >= steps_.size()) {
    throw ScheduleError("schedule: term index " + std::to_string(term_index) +
                        " out of range");
  }
  if (j < 0) {
    throw ScheduleError("schedule: occurrence index must be >= 0");
  }
  const Tick h = steps_[term_index];
  if (j > duration_ / h) {
    throw ScheduleError("schedule: occurrence " + std::to_string(j) +
                        " of term " + std::to_string(term_index) +
                        " lies beyond the duration");
  }
  const Tick t = j * h;
  const auto it = std::lower_bound(events_.begin(), events_.end(), t);
  // Every multiple of a term step within the duration is an event.
  return static_cast<std::size_t>(it - events_.begin());
}

LazyEventQueue::LazyEventQueue(std::span<const PotentialTerm> terms,
                               Tick duration_ticks) {
  steps_ = collect_steps(terms, duration_ticks);
  duration_ = duration_ticks;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    heap_.push(Entry{0, i});
  }
}

std::optional<Tick> LazyEventQueue::next() {
  while (!heap_.empty()) {
    const Entry e = heap_.top();
    heap_.pop();
    if (e.tick + steps_[e.term] <= duration_) {
      heap_.push(Entry{e.tick + steps_[e.term], e.term});
    }
    if (!emitted_any_ || e.tick != last_) {
      emitted_any_ = true;
      last_ = e.tick;
      return e.tick;
    }
  }
  return std::nullopt;
}

}  // namespace avi
