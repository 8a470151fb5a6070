#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "avi/diagnostics.hpp"
#include "avi/energy.hpp"
#include "avi/schedule.hpp"
#include "avi/types.hpp"

namespace avi {

// Uniform-step integrator over a term set; step_ticks fields are
// ignored, every term fires every step.
struct SyncStepper {
  MassModel mass;
  std::vector<PotentialTerm> terms;
  double step = 0.0;  // h > 0
};

// Two-point position update: the new configuration satisfying the
// discrete momentum balance
//   q_next = 2 q_cur - q_prev - h^2 M^-1 grad V(q_cur).
Configuration sync_step(const SyncStepper& stepper, const Configuration& q_prev,
                        const Configuration& q_cur);

// Trajectory {q_0, q_1, ..., q_n}. The start is second-order: the first
// drift uses v0 corrected by a half-weighted kick, after which the run
// is the plain kick/drift recursion (identical arithmetic to the
// asynchronous runner at uniform steps).
std::vector<Configuration> sync_run(const SyncStepper& stepper,
                                    const Configuration& q0,
                                    const Velocity& v0, std::size_t n_steps);

// Event-driven integrator. Each event k: every term whose step divides
// xi(k) kicks the stencil velocities with its step-weighted gradient
// (ascending term order; nothing is due at event 0, which instead
// applies the half-kick seeding), then all vertices drift to xi(k+1).
class AviRunner {
 public:
  // Copies are taken; the schedule must have been built from the same
  // term list. Throws ContractError on inconsistent sizes.
  AviRunner(MassModel mass, std::vector<PotentialTerm> terms,
            EventSchedule schedule, SystemState initial);

  // The internal warning sink is bound to this object's address.
  AviRunner(const AviRunner&) = delete;
  AviRunner& operator=(const AviRunner&) = delete;
  AviRunner(AviRunner&&) = delete;
  AviRunner& operator=(AviRunner&&) = delete;

  // Diagnostics sampling: every stride-th event plus the first and last.
  // Samples use the time-centered velocity (average of pre- and
  // post-kick), the standard energy estimator for staggered schemes.
  void set_sample_stride(std::size_t stride);

  // Optional observer invoked at each recorded sample with the
  // post-kick state; must not mutate it.
  using SampleHook =
      std::function<void(const DiagnosticsSample&, const SystemState&)>;
  void set_sample_hook(SampleHook hook);

  // Advance one event: kick at the current event, drift to the next.
  // Throws ScheduleError once the final event has been reached.
  void step();

  // Drive the remaining events, apply the impulses due at the final
  // event, and return the accumulated diagnostics. Callable once.
  DiagnosticsRecord run();

  const SystemState& state() const { return state_; }
  std::size_t event_index() const { return event_; }
  const EventSchedule& schedule() const { return schedule_; }
  const DiagnosticsRecord& diagnostics() const { return record_; }

 private:
  void ensure_started();
  void kick_current_event();
  void record_sample(const Velocity& v_sample);

  MassModel mass_;
  std::vector<PotentialTerm> terms_;
  EventSchedule schedule_;
  SystemState state_;
  std::size_t event_ = 0;
  std::size_t stride_ = 100;
  SampleHook hook_;
  DiagnosticsRecord record_;
  bool started_ = false;
  bool finished_ = false;
  // scratch
  std::vector<double> impulse_;
  Velocity v_pre_;
  Velocity v_mid_;
  std::vector<double> term_weight_;     // step_ticks * tick_duration
  std::vector<Tick> distinct_steps_;
  std::vector<std::size_t> step_slot_;  // term -> index into distinct_steps_
  std::vector<char> step_due_;
  WarningSink sink_;
};

// Reference trajectory from a classical 4th-order Runge-Kutta
// integration of q'' = -M^-1 grad V(q) at a fixed small step. Samples
// every sample_stride-th step plus the endpoint.
struct OracleTrajectory {
  std::vector<double> times;
  std::vector<Configuration> configurations;
  std::vector<Velocity> velocities;
};
OracleTrajectory oracle_run(const MassModel& mass,
                            const std::vector<PotentialTerm>& terms,
                            const Configuration& q0, const Velocity& v0,
                            double t_final, double h,
                            std::size_t sample_stride = 1);

// Conservative explicit-stability bound 2/omega from the stiffest
// two-body linearization of the term: spring and point-point penalty
// use omega^2 = k (1/m_a + 1/m_b), point-plane uses omega^2 = k/m.
// Zero stiffness yields an unbounded (+infinity) estimate; hinge and
// gravity have no pairwise linearization and yield nullopt.
std::optional<double> stable_step_estimate(const PotentialTerm& term,
                                           const MassModel& mass);

}  // namespace avi
