#include <benchmark/benchmark.h>

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

#include "avi/energy.hpp"
#include "avi/integrators.hpp"
#include "avi/schedule.hpp"
#include "avi/types.hpp"

namespace {

struct ChainFixture {
  avi::MassModel mass;
  std::vector<avi::PotentialTerm> terms;
  avi::Configuration q;
  avi::Velocity v;
};

// n vertices along x, consecutive springs, slightly stretched so the
// gradients are nonzero.
ChainFixture make_chain(std::size_t n) {
  ChainFixture f;
  f.q.dim = 3;
  f.v.dim = 3;
  for (std::size_t i = 0; i < n; ++i) {
    f.q.coords.insert(f.q.coords.end(),
                      {static_cast<double>(i) * 0.51, 0.0, 0.0});
    f.v.coords.insert(f.v.coords.end(), {0.0, 0.001 * (i % 3), 0.0});
    f.mass.masses.push_back(1.0);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    avi::PotentialTerm term;
    term.stencil = {i, i + 1};
    term.step_ticks = 1;
    term.params = avi::SpringParams{100.0, 0.5};
    f.terms.push_back(term);
  }
  return f;
}

std::vector<avi::PotentialTerm> multirate_terms() {
  std::vector<avi::PotentialTerm> terms;
  for (avi::Tick step : {2, 3, 5, 7, 11, 13}) {
    avi::PotentialTerm term;
    term.stencil = {0, 1};
    term.step_ticks = step;
    term.params = avi::SpringParams{1.0, 1.0};
    terms.push_back(term);
  }
  return terms;
}

void BM_SpringGradient(benchmark::State& state) {
  avi::PotentialTerm term;
  term.stencil = {0, 1};
  term.params = avi::SpringParams{10.0, 1.0};
  avi::Configuration q{3, {0.0, 0.0, 0.0, 1.3, 0.2, -0.1}};
  avi::MassModel mass{{1.0, 1.0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(avi::potential_gradient(term, q, mass));
  }
}
BENCHMARK(BM_SpringGradient);

void BM_HingeGradient(benchmark::State& state) {
  avi::PotentialTerm term;
  term.stencil = {0, 1, 2, 3};
  term.params = avi::HingeParams{2.0, 0.3};
  avi::Configuration q{
      3, {0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.4, 0.9, 0.1, 0.6, -0.2, -0.8}};
  avi::MassModel mass{{1.0, 1.0, 1.0, 1.0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(avi::potential_gradient(term, q, mass));
  }
}
BENCHMARK(BM_HingeGradient);

void BM_GradientAccumulate(benchmark::State& state) {
  const ChainFixture chain = make_chain(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(chain.q.coords.size());
  for (auto _ : state) {
    std::fill(out.begin(), out.end(), 0.0);
    for (const avi::PotentialTerm& term : chain.terms) {
      avi::accumulate_potential_gradient(term, chain.q, chain.mass, 0.01, out);
    }
    benchmark::DoNotOptimize(out.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(chain.terms.size()));
}
BENCHMARK(BM_GradientAccumulate)->Arg(64)->Arg(1024);

void BM_ScheduleBuild(benchmark::State& state) {
  const auto terms = multirate_terms();
  const avi::Tick duration = state.range(0);
  const std::size_t events = avi::EventSchedule::build(terms, duration).size();
  for (auto _ : state) {
    benchmark::DoNotOptimize(avi::EventSchedule::build(terms, duration));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(events));
}
BENCHMARK(BM_ScheduleBuild)->Range(1000, 1000000)->Unit(benchmark::kMicrosecond);

void BM_LazyQueueDrain(benchmark::State& state) {
  const auto terms = multirate_terms();
  const avi::Tick duration = state.range(0);
  for (auto _ : state) {
    avi::LazyEventQueue queue(terms, duration);
    avi::Tick last = 0;
    while (auto tick = queue.next()) last = *tick;
    benchmark::DoNotOptimize(last);
  }
}
BENCHMARK(BM_LazyQueueDrain)->Range(1000, 1000000)->Unit(benchmark::kMicrosecond);

void BM_RunnerThroughput(benchmark::State& state) {
  const ChainFixture chain = make_chain(static_cast<std::size_t>(state.range(0)));
  const avi::Tick duration = 1000;
  const avi::EventSchedule sched =
      avi::EventSchedule::build(chain.terms, duration);
  for (auto _ : state) {
    avi::AviRunner runner(chain.mass, chain.terms, sched,
                          avi::SystemState{chain.q, chain.v, 0, 1e-4});
    runner.set_sample_stride(std::numeric_limits<std::size_t>::max());
    benchmark::DoNotOptimize(runner.run().samples.size());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(sched.size() - 1));
}
BENCHMARK(BM_RunnerThroughput)->Arg(16)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
