#include "avi/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "avi/diagnostics.hpp"
#include "avi/errors.hpp"
#include "avi/integrators.hpp"
#include "avi/scenario.hpp"

namespace avi {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

std::filesystem::path output_path(const std::string& flag_out,
                                  const Scenario& sc,
                                  const std::string& input) {
  if (!flag_out.empty()) return flag_out;
  if (!sc.output_path.empty()) return sc.output_path;
  return std::filesystem::path(input).stem().string() + "_diagnostics.csv";
}

void print_record_summary(const DiagnosticsRecord& record,
                          const std::filesystem::path& csv) {
  std::cout << "samples: " << record.samples.size() << "  ->  " << csv.string()
            << "\n";
  if (!record.warnings.empty()) {
    std::cout << "warnings: " << record.warnings.size() << "\n";
    const std::size_t show = std::min<std::size_t>(record.warnings.size(), 5);
    for (std::size_t i = 0; i < show; ++i) {
      std::cout << "  " << record.warnings[i] << "\n";
    }
    if (show < record.warnings.size()) {
      std::cout << "  ... " << record.warnings.size() - show << " more\n";
    }
  }
  if (record.samples.size() >= 2) {
    std::cout << describe(analyze(record));
  }
}

int do_simulate(const std::string& file, const std::string& out,
                std::optional<Tick> duration, std::optional<std::size_t> stride) {
  Scenario sc = load_scenario_file(file);
  if (duration) sc.duration_ticks = *duration;
  if (stride) sc.diagnostics_stride = *stride;

  EventSchedule schedule = EventSchedule::build(sc.terms, sc.duration_ticks);
  AviRunner runner(sc.mass, sc.terms, schedule, initial_state(sc));
  runner.set_sample_stride(sc.diagnostics_stride);
  const DiagnosticsRecord record = runner.run();

  const auto csv = output_path(out, sc, file);
  write_csv(record, csv);

  std::cout << file << ": " << sc.positions.vertex_count() << " vertices, "
            << sc.terms.size() << " terms, " << schedule.size() << " events\n";
  print_record_summary(record, csv);
  return 0;
}

int do_oracle(const std::string& file, const std::string& out, double h,
              std::optional<std::size_t> stride) {
  Scenario sc = load_scenario_file(file);
  const double t_final =
      static_cast<double>(sc.duration_ticks) * sc.tick_duration;

  std::size_t sample_stride = stride.value_or(0);
  if (sample_stride == 0) {
    const double steps = t_final / h;
    sample_stride = steps > 2e5 ? static_cast<std::size_t>(steps / 2e5) : 1;
  }

  const OracleTrajectory traj =
      oracle_run(sc.mass, sc.terms, sc.positions, sc.velocities, t_final, h,
                 sample_stride);

  DiagnosticsRecord record;
  record.samples.reserve(traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    DiagnosticsSample smp;
    smp.time = traj.times[i];
    smp.kinetic = kinetic_energy(sc.mass, traj.velocities[i]);
    smp.potential = 0.0;
    for (const PotentialTerm& term : sc.terms) {
      smp.potential += potential_energy(term, traj.configurations[i], sc.mass);
    }
    smp.total_energy = smp.kinetic + smp.potential;
    smp.linear_momentum = linear_momentum(sc.mass, traj.velocities[i]);
    smp.angular_momentum =
        angular_momentum(sc.mass, traj.configurations[i], traj.velocities[i]);
    record.samples.push_back(smp);
  }

  const auto csv = output_path(out, sc, file);
  write_csv(record, csv);

  std::cout << file << ": reference run, step " << fmt(h) << ", "
            << traj.times.size() << " samples\n";
  print_record_summary(record, csv);
  return 0;
}

int do_check(const std::string& file) {
  Scenario sc = load_scenario_file(file);
  EventSchedule schedule = EventSchedule::build(sc.terms, sc.duration_ticks);

  std::cout << file << ": OK\n"
            << "  dimension " << sc.dimension << ", "
            << sc.positions.vertex_count() << " vertices, " << sc.terms.size()
            << " terms\n"
            << "  duration " << sc.duration_ticks << " ticks at "
            << fmt(sc.tick_duration) << " per tick ("
            << fmt(static_cast<double>(sc.duration_ticks) * sc.tick_duration)
            << " time units)\n"
            << "  schedule: " << schedule.size() << " events\n";

  std::size_t flagged = 0;
  for (std::size_t i = 0; i < sc.terms.size(); ++i) {
    const auto estimate = stable_step_estimate(sc.terms[i], sc.mass);
    if (!estimate) continue;
    const double actual =
        static_cast<double>(sc.terms[i].step_ticks) * sc.tick_duration;
    if (actual > *estimate) {
      std::cout << "  term " << i << " (" << kind_name(sc.terms[i].kind())
                << "): step " << fmt(actual) << " exceeds stable estimate "
                << fmt(*estimate) << "\n";
      ++flagged;
    }
  }
  if (flagged == 0) {
    std::cout << "  all linearizable terms within their stable step estimates\n";
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const argv[]) {
  CLI::App app{"event-driven variational integrator for multirate interaction potentials"};
  app.name("avi-sim");
  app.require_subcommand(1);

  std::string file, out;
  Tick duration = 0;
  std::size_t stride = 0;
  double h = 0.0;

  auto* sim = app.add_subcommand("simulate", "run a scenario, write a diagnostics csv");
  sim->add_option("scenario", file, "scenario file (json)")->required();
  sim->add_option("--out", out, "diagnostics csv path");
  auto* dur_opt =
      sim->add_option("--duration-ticks", duration, "override the scenario duration")
          ->check(CLI::PositiveNumber);
  auto* stride_opt =
      sim->add_option("--stride", stride, "events between diagnostics samples")
          ->check(CLI::PositiveNumber);

  auto* orc = app.add_subcommand("oracle", "reference run at a fixed small step");
  // The short -h help alias would collide with --h below.
  orc->set_help_flag("--help", "print this help message and exit");
  orc->add_option("scenario", file, "scenario file (json)")->required();
  orc->add_option("--h", h, "integration step (time units)")
      ->required()
      ->check(CLI::PositiveNumber);
  orc->add_option("--out", out, "diagnostics csv path");
  auto* orc_stride_opt =
      orc->add_option("--stride", stride, "steps between samples")
          ->check(CLI::PositiveNumber);

  auto* chk = app.add_subcommand("check", "validate a scenario and report step estimates");
  chk->add_option("scenario", file, "scenario file (json)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) {
      return do_simulate(file, out,
                         dur_opt->count() ? std::optional<Tick>(duration)
                                          : std::nullopt,
                         stride_opt->count()
                             ? std::optional<std::size_t>(stride)
                             : std::nullopt);
    }
    if (orc->parsed()) {
      return do_oracle(file, out, h,
                       orc_stride_opt->count()
                           ? std::optional<std::size_t>(stride)
                           : std::nullopt);
    }
    return do_check(file);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace avi
