#include "avi/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "avi/errors.hpp"

namespace avi {

namespace {

// v -= impulse / m, componentwise. Every integrator path funnels
// velocity updates through here so uniform-step synchronous and
// asynchronous runs agree bit-for-bit.
void apply_impulse(Velocity& v, std::span<const double> impulse,
                   const MassModel& mass) {
  const std::size_t dim = static_cast<std::size_t>(v.dim);
  for (std::size_t a = 0; a < mass.masses.size(); ++a) {
    const double m = mass.masses[a];
    for (std::size_t c = 0; c < dim; ++c) {
      v.coords[a * dim + c] -= impulse[a * dim + c] / m;
    }
  }
}

void drift(Configuration& q, const Velocity& v, double dt) {
  for (std::size_t j = 0; j < q.coords.size(); ++j) {
    q.coords[j] += dt * v.coords[j];
  }
}

// Second-order start: v gains a half-weighted kick from every term so
// the first drift lands on the Taylor expansion through O(dt^2).
void seed_velocity(const std::vector<PotentialTerm>& terms,
                   const Configuration& q, const MassModel& mass,
                   double dt_first, std::vector<double>& impulse, Velocity& v,
                   const WarningSink* warn) {
  std::fill(impulse.begin(), impulse.end(), 0.0);
  const double w = 0.5 * dt_first;
  for (const PotentialTerm& term : terms) {
    accumulate_potential_gradient(term, q, mass, w, impulse, warn);
  }
  apply_impulse(v, impulse, mass);
}

void check_uniform_inputs(const SyncStepper& stepper) {
  if (!std::isfinite(stepper.step) || stepper.step <= 0.0) {
    throw ContractError("sync: step must be positive and finite");
  }
}

std::string format_time(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", t);
  return buf;
}

}  // namespace

Configuration sync_step(const SyncStepper& stepper, const Configuration& q_prev,
                        const Configuration& q_cur) {
  check_uniform_inputs(stepper);
  validate_system(q_cur, Velocity{q_cur.dim,
                                  std::vector<double>(q_cur.coords.size())},
                  stepper.mass, stepper.terms);
  if (q_prev.dim != q_cur.dim || q_prev.coords.size() != q_cur.coords.size()) {
    throw ContractError("sync_step: q_prev and q_cur have different shapes");
  }

  std::vector<double> grad(q_cur.coords.size(), 0.0);
  for (const PotentialTerm& term : stepper.terms) {
    accumulate_potential_gradient(term, q_cur, stepper.mass, 1.0, grad);
  }

  const double h2 = stepper.step * stepper.step;
  const std::size_t dim = static_cast<std::size_t>(q_cur.dim);
  Configuration q_next = q_cur;
  for (std::size_t a = 0; a < stepper.mass.masses.size(); ++a) {
    const double m = stepper.mass.masses[a];
    for (std::size_t c = 0; c < dim; ++c) {
      const std::size_t j = a * dim + c;
      q_next.coords[j] =
          2.0 * q_cur.coords[j] - q_prev.coords[j] - (h2 / m) * grad[j];
    }
  }
  return q_next;
}

std::vector<Configuration> sync_run(const SyncStepper& stepper,
                                    const Configuration& q0,
                                    const Velocity& v0, std::size_t n_steps) {
  check_uniform_inputs(stepper);
  validate_system(q0, v0, stepper.mass, stepper.terms);

  std::vector<Configuration> traj;
  traj.reserve(n_steps + 1);
  traj.push_back(q0);
  if (n_steps == 0) return traj;

  Configuration q = q0;
  Velocity v = v0;
  std::vector<double> impulse(q.coords.size());

  seed_velocity(stepper.terms, q, stepper.mass, stepper.step, impulse, v,
                nullptr);
  drift(q, v, stepper.step);
  traj.push_back(q);

  for (std::size_t s = 1; s < n_steps; ++s) {
    std::fill(impulse.begin(), impulse.end(), 0.0);
    for (const PotentialTerm& term : stepper.terms) {
      accumulate_potential_gradient(term, q, stepper.mass, stepper.step,
                                    impulse);
    }
    apply_impulse(v, impulse, stepper.mass);
    drift(q, v, stepper.step);
    traj.push_back(q);
  }
  return traj;
}

AviRunner::AviRunner(MassModel mass, std::vector<PotentialTerm> terms,
                     EventSchedule schedule, SystemState initial)
    : mass_(std::move(mass)),
      terms_(std::move(terms)),
      schedule_(std::move(schedule)),
      state_(std::move(initial)) {
  validate_system(state_.q, state_.v, mass_, terms_);
  if (!std::isfinite(state_.tick_duration) || state_.tick_duration <= 0.0) {
    throw ContractError("runner: tick_duration must be positive and finite");
  }
  if (state_.tick != 0) {
    throw ContractError("runner: initial state must sit at tick 0");
  }
  const auto steps = schedule_.term_steps();
  if (steps.size() != terms_.size()) {
    throw ContractError("runner: schedule was built for " +
                        std::to_string(steps.size()) + " terms, got " +
                        std::to_string(terms_.size()));
  }
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (steps[i] != terms_[i].step_ticks) {
      throw ContractError("runner: schedule step of term " + std::to_string(i) +
                          " differs from the term's step_ticks");
    }
  }

  impulse_.resize(state_.q.coords.size());
  v_pre_ = state_.v;
  v_mid_ = state_.v;

  term_weight_.resize(terms_.size());
  step_slot_.resize(terms_.size());
  distinct_steps_.assign(steps.begin(), steps.end());
  std::sort(distinct_steps_.begin(), distinct_steps_.end());
  distinct_steps_.erase(
      std::unique(distinct_steps_.begin(), distinct_steps_.end()),
      distinct_steps_.end());
  step_due_.assign(distinct_steps_.size(), 0);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    term_weight_[i] =
        static_cast<double>(terms_[i].step_ticks) * state_.tick_duration;
    step_slot_[i] = static_cast<std::size_t>(
        std::lower_bound(distinct_steps_.begin(), distinct_steps_.end(),
                         terms_[i].step_ticks) -
        distinct_steps_.begin());
  }

  sink_ = [this](const std::string& msg) {
    record_.warnings.push_back("t=" + format_time(state_.time()) + ": " + msg);
  };
}

void AviRunner::set_sample_stride(std::size_t stride) {
  if (stride == 0) {
    throw ContractError("runner: sample stride must be >= 1");
  }
  stride_ = stride;
}

void AviRunner::set_sample_hook(SampleHook hook) { hook_ = std::move(hook); }

void AviRunner::ensure_started() {
  if (started_) return;
  started_ = true;
  record_sample(state_.v);  // the caller's initial velocity, pre-seeding
}

void AviRunner::record_sample(const Velocity& v_sample) {
  DiagnosticsSample smp;
  smp.time = state_.time();
  smp.kinetic = kinetic_energy(mass_, v_sample);
  smp.potential = 0.0;
  for (const PotentialTerm& term : terms_) {
    smp.potential += potential_energy(term, state_.q, mass_);
  }
  smp.total_energy = smp.kinetic + smp.potential;
  smp.linear_momentum = linear_momentum(mass_, v_sample);
  smp.angular_momentum = angular_momentum(mass_, state_.q, v_sample);
  record_.samples.push_back(smp);
  if (hook_) hook_(smp, state_);
}

void AviRunner::kick_current_event() {
  const Tick t = schedule_.xi(event_);
  for (std::size_t s = 0; s < distinct_steps_.size(); ++s) {
    step_due_[s] = (t % distinct_steps_[s] == 0) ? 1 : 0;
  }
  std::fill(impulse_.begin(), impulse_.end(), 0.0);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (step_due_[step_slot_[i]]) {
      accumulate_potential_gradient(terms_[i], state_.q, mass_,
                                    term_weight_[i], impulse_, &sink_);
    }
  }
  apply_impulse(state_.v, impulse_, mass_);
}

void AviRunner::step() {
  ensure_started();
  if (finished_ || event_ + 1 >= schedule_.size()) {
    throw ScheduleError("runner: schedule exhausted at event " +
                        std::to_string(event_));
  }

  if (event_ == 0) {
    const double dt1 =
        static_cast<double>(schedule_.xi(1) - schedule_.xi(0)) *
        state_.tick_duration;
    seed_velocity(terms_, state_.q, mass_, dt1, impulse_, state_.v, &sink_);
  } else {
    v_pre_.coords = state_.v.coords;
    kick_current_event();
    if (event_ % stride_ == 0) {
      for (std::size_t j = 0; j < v_mid_.coords.size(); ++j) {
        v_mid_.coords[j] = 0.5 * (v_pre_.coords[j] + state_.v.coords[j]);
      }
      record_sample(v_mid_);
    }
  }

  const double dt =
      static_cast<double>(schedule_.xi(event_ + 1) - schedule_.xi(event_)) *
      state_.tick_duration;
  drift(state_.q, state_.v, dt);
  ++event_;
  state_.tick = schedule_.xi(event_);
}

DiagnosticsRecord AviRunner::run() {
  if (finished_) {
    throw ScheduleError("runner: run() already completed");
  }
  ensure_started();
  while (event_ + 1 < schedule_.size()) step();

  if (schedule_.size() > 1) {
    // Impulses due at the final event still apply; they close the last
    // velocity half-step.
    v_pre_.coords = state_.v.coords;
    kick_current_event();
    for (std::size_t j = 0; j < v_mid_.coords.size(); ++j) {
      v_mid_.coords[j] = 0.5 * (v_pre_.coords[j] + state_.v.coords[j]);
    }
    record_sample(v_mid_);
  }
  finished_ = true;
  return std::move(record_);
}

OracleTrajectory oracle_run(const MassModel& mass,
                            const std::vector<PotentialTerm>& terms,
                            const Configuration& q0, const Velocity& v0,
                            double t_final, double h,
                            std::size_t sample_stride) {
  validate_system(q0, v0, mass, terms);
  if (!std::isfinite(h) || h <= 0.0) {
    throw ContractError("oracle: step must be positive and finite");
  }
  if (!std::isfinite(t_final) || t_final < 0.0) {
    throw ContractError("oracle: final time must be >= 0 and finite");
  }
  if (sample_stride == 0) {
    throw ContractError("oracle: sample stride must be >= 1");
  }

  const std::size_t n = q0.coords.size();
  Configuration q = q0;
  Velocity v = v0;
  std::vector<double> grad(n), acc(n), qt(n), kq(4 * n), kv(4 * n);
  const std::size_t dim = static_cast<std::size_t>(q0.dim);

  auto accel = [&](const std::vector<double>& pos, std::vector<double>& out) {
    Configuration probe{q0.dim, pos};
    std::fill(grad.begin(), grad.end(), 0.0);
    for (const PotentialTerm& term : terms) {
      accumulate_potential_gradient(term, probe, mass, 1.0, grad);
    }
    for (std::size_t a = 0; a < mass.masses.size(); ++a) {
      for (std::size_t c = 0; c < dim; ++c) {
        out[a * dim + c] = -grad[a * dim + c] / mass.masses[a];
      }
    }
  };

  OracleTrajectory traj;
  auto sample = [&](double t) {
    traj.times.push_back(t);
    traj.configurations.push_back(q);
    traj.velocities.push_back(v);
  };
  sample(0.0);

  // Times come from the step index, not accumulation, so the run lands
  // exactly on t_final with at most one short trailing step.
  const std::size_t n_full =
      static_cast<std::size_t>(std::floor(t_final / h + 1e-9));
  const double tail = t_final - static_cast<double>(n_full) * h;
  const bool has_tail = tail > 1e-12 * h;
  const std::size_t total = n_full + (has_tail ? 1 : 0);

  for (std::size_t s = 1; s <= total; ++s) {
    const double dt = (s <= n_full) ? h : tail;

    // classical 4th-order Runge-Kutta on (q, v)
    auto kqs = [&](int s) { return kq.data() + s * n; };
    auto kvs = [&](int s) { return kv.data() + s * n; };

    std::copy(v.coords.begin(), v.coords.end(), kqs(0));
    accel(q.coords, acc);
    std::copy(acc.begin(), acc.end(), kvs(0));

    for (std::size_t j = 0; j < n; ++j) {
      qt[j] = q.coords[j] + 0.5 * dt * kqs(0)[j];
      kqs(1)[j] = v.coords[j] + 0.5 * dt * kvs(0)[j];
    }
    accel(qt, acc);
    std::copy(acc.begin(), acc.end(), kvs(1));

    for (std::size_t j = 0; j < n; ++j) {
      qt[j] = q.coords[j] + 0.5 * dt * kqs(1)[j];
      kqs(2)[j] = v.coords[j] + 0.5 * dt * kvs(1)[j];
    }
    accel(qt, acc);
    std::copy(acc.begin(), acc.end(), kvs(2));

    for (std::size_t j = 0; j < n; ++j) {
      qt[j] = q.coords[j] + dt * kqs(2)[j];
      kqs(3)[j] = v.coords[j] + dt * kvs(2)[j];
    }
    accel(qt, acc);
    std::copy(acc.begin(), acc.end(), kvs(3));

    for (std::size_t j = 0; j < n; ++j) {
      q.coords[j] += dt / 6.0 *
                     (kqs(0)[j] + 2.0 * kqs(1)[j] + 2.0 * kqs(2)[j] +
                      kqs(3)[j]);
      v.coords[j] += dt / 6.0 *
                     (kvs(0)[j] + 2.0 * kvs(1)[j] + 2.0 * kvs(2)[j] +
                      kvs(3)[j]);
    }

    if (s == total || s % sample_stride == 0) {
      sample(s == total ? t_final : static_cast<double>(s) * h);
    }
  }
  return traj;
}

std::optional<double> stable_step_estimate(const PotentialTerm& term,
                                           const MassModel& mass) {
  auto mass_at = [&](std::size_t i) {
    if (term.stencil.size() <= i || term.stencil[i] >= mass.vertex_count()) {
      throw ContractError("stable_step_estimate: stencil index out of range");
    }
    return mass.masses[term.stencil[i]];
  };

  switch (term.kind()) {
    case PotentialKind::Spring: {
      const double k = std::get<SpringParams>(term.params).stiffness;
      if (k == 0.0) return std::numeric_limits<double>::infinity();
      const double w2 = k * (1.0 / mass_at(0) + 1.0 / mass_at(1));
      return 2.0 / std::sqrt(w2);
    }
    case PotentialKind::PenaltyPointPoint: {
      const double k = std::get<PenaltyPointPointParams>(term.params).stiffness;
      if (k == 0.0) return std::numeric_limits<double>::infinity();
      const double w2 = k * (1.0 / mass_at(0) + 1.0 / mass_at(1));
      return 2.0 / std::sqrt(w2);
    }
    case PotentialKind::PenaltyPointPlane: {
      const double k = std::get<PenaltyPointPlaneParams>(term.params).stiffness;
      if (k == 0.0) return std::numeric_limits<double>::infinity();
      return 2.0 / std::sqrt(k / mass_at(0));
    }
    case PotentialKind::HingeBend:
    case PotentialKind::Gravity:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace avi
