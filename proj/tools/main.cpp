// beesim command-line front end: single journeys, statistical batches,
// evolutionary optimization, calibration, and rate-vs-spiking comparison.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "beesim/calibration.hpp"
#include "beesim/evolution.hpp"
#include "beesim/io.hpp"
#include "beesim/rate_network.hpp"
#include "beesim/spiking_sim.hpp"
#include "beesim/stats.hpp"
#include "beesim/thread_pool.hpp"

namespace fs = std::filesystem;
using namespace beesim;

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::string out_dir = ".";
  int workers = static_cast<int>(std::thread::hardware_concurrency());
};

JourneyConfig load_config(const CommonOptions& opts) {
  JourneyConfig cfg;
  if (!opts.config_path.empty())
    cfg = JourneyConfig::load_file(opts.config_path);
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.mode) {
    if (*opts.mode == "rate")
      cfg.mode = SimMode::kRate;
    else if (*opts.mode == "spiking")
      cfg.mode = SimMode::kSpiking;
    else
      throw CLI::ValidationError("--mode", "must be rate or spiking");
  }
  cfg.validate();
  return cfg;
}

fs::path ensure_out_dir(const CommonOptions& opts) {
  fs::path dir(opts.out_dir);
  fs::create_directories(dir);
  return dir;
}

CalibrationTable table_for(const JourneyConfig& cfg) {
  return apply_fixed_pattern_noise(CalibrationTable::nominal(), cfg.noise.cv,
                                   cfg.noise.seed);
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "Configuration file");
  cmd->add_option("--seed", opts.seed, "Master seed");
  cmd->add_option("--mode", opts.mode, "Simulation mode: rate|spiking");
  cmd->add_option("--out", opts.out_dir, "Output directory");
  cmd->add_option("--workers", opts.workers, "Worker threads");
}

int cmd_run(const CommonOptions& opts) {
  JourneyConfig cfg = load_config(opts);
  const fs::path dir = ensure_out_dir(opts);
  const Genome genome = Genome::primitive();
  const CalibrationTable table = table_for(cfg);
  RngStream rng(cfg.seed);

  Trajectory traj;
  if (cfg.mode == SimMode::kRate) {
    traj = run_rate_journey(cfg, genome, rng, table.rate_params()).first;
  } else {
    auto [t, spikes] =
        run_spiking_journey(cfg, genome, rng, table.spiking_params());
    traj = std::move(t);
    std::ofstream sp(dir / "spikes.csv", std::ios::binary);
    write_spikes_csv(sp, spikes);
  }
  std::ofstream out(dir / "trajectory.csv", std::ios::binary);
  write_trajectory_csv(out, traj);

  const JourneyRecord rec = analyze_trajectory(traj, cfg);
  std::printf(
      "journey seed=%llu mode=%s: outbound radius %.0f, return deviation "
      "%.0f, looping radius %.0f\n",
      static_cast<unsigned long long>(cfg.seed), to_string(cfg.mode).c_str(),
      rec.outbound_radius, std::hypot(rec.return_x, rec.return_y),
      rec.looping_radius);
  return 0;
}

int cmd_batch(const CommonOptions& opts, int journeys, bool no_trajectories) {
  JourneyConfig cfg = load_config(opts);
  const fs::path dir = ensure_out_dir(opts);
  const Genome genome = Genome::primitive();
  const CalibrationTable table = table_for(cfg);

  std::mutex io_mutex;
  TrajectorySink sink;
  if (!no_trajectories) {
    sink = [&](int index, const Trajectory& t) {
      char name[64];
      std::snprintf(name, sizeof(name), "trajectory_%04d.csv", index);
      std::ostringstream body;
      write_trajectory_csv(body, t);
      std::lock_guard<std::mutex> lock(io_mutex);
      write_text_file((dir / name).string(), body.str());
    };
  }
  auto [stats, records] =
      run_batch(cfg, genome, journeys, cfg.seed, opts.workers, sink, table);
  write_text_file((dir / "stats.json").string(), stats_to_json(stats));
  for (const auto& r : records)
    if (r.failed)
      std::fprintf(stderr, "journey %d (seed %llu) failed: %s\n", r.index,
                   static_cast<unsigned long long>(r.seed), r.error.c_str());
  std::printf(
      "batch n=%d mode=%s: median outbound radius %.0f, mean return "
      "deviation %.0f (%.2f%%), within-1000 %.3f, overlap %.3f\n",
      stats.n_journeys, to_string(cfg.mode).c_str(),
      stats.median_outbound_radius, stats.mean_return_deviation,
      stats.mean_return_deviation_pct, stats.within_1000_fraction,
      stats.overlap_fraction);
  return stats.n_failed == 0 ? 0 : 2;
}

int cmd_evolve(const CommonOptions& opts, int generations) {
  JourneyConfig cfg = load_config(opts);
  if (generations > 0) cfg.es.generations = generations;
  const fs::path dir = ensure_out_dir(opts);
  const CalibrationTable table = table_for(cfg);
  const RateNetworkParams rate_params = table.rate_params();
  const SpikingParams spiking_params = table.spiking_params();

  FitnessEvaluator evaluator = [&](const Genome& genome,
                                   std::span<const std::uint64_t> seeds) {
    std::vector<Trajectory> runs;
    runs.reserve(seeds.size());
    for (std::uint64_t seed : seeds) {
      JourneyConfig jc = cfg;
      jc.seed = seed;
      RngStream rng(seed);
      if (cfg.mode == SimMode::kRate)
        runs.push_back(run_rate_journey(jc, genome, rng, rate_params).first);
      else
        runs.push_back(
            run_spiking_journey(jc, genome, rng, spiking_params).first);
    }
    return fitness(runs);
  };

  const EsResult result = evolve(cfg.es, evaluator, Genome::primitive(),
                                 cfg.seed, opts.workers);

  std::ostringstream history;
  write_history_csv(history, result.history);
  write_text_file((dir / "es_history.csv").string(), history.str());
  write_text_file((dir / "genome.json").string(),
                  genome_to_json(result.final_mean));
  if (cfg.es.snapshot_every > 0) {
    for (const auto& rec : result.history) {
      if (rec.generation % cfg.es.snapshot_every != 0) continue;
      char name[64];
      std::snprintf(name, sizeof(name), "genome_gen%04d.json", rec.generation);
      write_text_file((dir / name).string(), genome_to_json(rec.mean_genome));
    }
  }
  std::printf("evolve generations=%d: gen0 mean fitness %.1f, final best %.1f\n",
              cfg.es.generations, result.history.front().mean_fitness,
              result.history.back().best_fitness);
  return 0;
}

int cmd_calibrate(const CommonOptions& opts) {
  JourneyConfig cfg = load_config(opts);
  const fs::path dir = ensure_out_dir(opts);
  CalibrationTable table = table_for(cfg);
  table = calibrate_all(cfg, table);
  write_text_file((dir / "calibration.json").string(),
                  calibration_to_json(table));
  double worst = 0.0;
  for (const auto& f : table.fit) worst = std::max(worst, f.fit_residual);
  std::printf("calibration written (noise cv=%.3f, worst fit residual %.4f)\n",
              cfg.noise.cv, worst);
  return 0;
}

// Shared random stimuli through both CPU4 integrator implementations.
int cmd_compare(const CommonOptions& opts, int stimuli, int updates) {
  JourneyConfig cfg = load_config(opts);
  const fs::path dir = ensure_out_dir(opts);
  const Genome genome = Genome::primitive();
  const CalibrationTable table = table_for(cfg);

  nlohmann::ordered_json report;
  report["schema"] = "beesim-compare/1";
  report["updates"] = updates;
  auto entries = nlohmann::ordered_json::array();
  double worst_pct = 0.0;
  for (int s = 0; s < stimuli; ++s) {
    const std::uint64_t seed = derive_seed(cfg.seed, {kSourceStream,
                                           static_cast<std::uint64_t>(s)});
    RngStream stim_rng(seed);

    JourneyConfig jc = cfg;
    jc.mode = SimMode::kSpiking;
    SpikingParams sp = table.spiking_params();
    sp.tb1_source_mode = SourceMode::kPeriodic;  // exact per-window counts
    sp.tn_source_mode = SourceMode::kPeriodic;
    SpikingSimulation sim(jc, genome, sp, RngStream(seed));
    RateNetwork oracle(genome, table.rate_params(), cfg.h, cfg.k);

    double phi = 0.0;
    for (int w = 0; w < updates; ++w) {
      SensorRates rates;
      phi = wrap_angle(phi + stim_rng.gaussian(0.0, 0.4));
      rates.tb1 = tb1_rates(phi);
      const double speed = stim_rng.uniform01();
      const double dphi = stim_rng.gaussian(0.0, 0.15);
      std::tie(rates.tn_l, rates.tn_r) = tn_rates(speed, dphi, cfg.world);
      sim.override_sensors(rates);
      sim.run_update_cycle();
      // periodic sources emit round(10 r); the oracle integrates the same
      std::array<double, 4> c_tb1;
      for (int j = 0; j < 4; ++j)
        c_tb1[j] = std::round(10.0 * rates.tb1[j]);
      oracle.update_cpu4(std::round(10.0 * rates.tn_l),
                         std::round(10.0 * rates.tn_r), c_tb1);
    }
    double worst = 0.0;
    for (int i = 0; i < kNumCpu4; ++i) {
      const double diff = std::abs(sim.connectome().cpu4_input[i].real_value() -
                                   oracle.state().cpu4_state[i]);
      worst = std::max(worst, diff);
    }
    const double pct = 100.0 * worst / kAccumulatorMax;
    worst_pct = std::max(worst_pct, pct);
    nlohmann::ordered_json e;
    e["stimulus"] = s;
    e["seed"] = seed;
    e["max_divergence"] = worst;
    e["max_divergence_pct_full_scale"] = pct;
    entries.push_back(std::move(e));
    std::printf("stimulus %d: max CPU4 divergence %.2f (%.3f%% of full scale)\n",
                s, worst, pct);
  }
  report["stimuli"] = std::move(entries);
  report["worst_pct_full_scale"] = worst_pct;
  write_text_file((dir / "compare.json").string(), report.dump(2) + "\n");
  std::printf("worst divergence across %d stimuli: %.3f%% of full scale\n",
              stimuli, worst_pct);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spike-based insect path integration simulator"};
  app.require_subcommand(1);

  CommonOptions opts;
  int journeys = 100;
  int generations = 0;
  bool no_trajectories = false;
  int stimuli = 5;
  int updates = 200;

  auto* run = app.add_subcommand("run", "Run a single journey");
  add_common(run, opts);

  auto* batch = app.add_subcommand("batch", "Run a batch of journeys");
  add_common(batch, opts);
  batch->add_option("--journeys", journeys, "Number of journeys");
  batch->add_flag("--no-trajectories", no_trajectories,
                  "Skip per-journey trajectory files");

  auto* evolve_cmd = app.add_subcommand("evolve", "Evolutionary optimization");
  add_common(evolve_cmd, opts);
  evolve_cmd->add_option("--generations", generations,
                         "Override generation count");

  auto* calibrate_cmd =
      app.add_subcommand("calibrate", "Fit per-neuron calibration");
  add_common(calibrate_cmd, opts);

  auto* compare_cmd = app.add_subcommand(
      "compare", "Rate-vs-spiking CPU4 integrator divergence");
  add_common(compare_cmd, opts);
  compare_cmd->add_option("--stimuli", stimuli, "Number of random stimuli");
  compare_cmd->add_option("--updates", updates, "Updates per stimulus");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  try {
    if (run->parsed()) return cmd_run(opts);
    if (batch->parsed()) return cmd_batch(opts, journeys, no_trajectories);
    if (evolve_cmd->parsed()) return cmd_evolve(opts, generations);
    if (calibrate_cmd->parsed()) return cmd_calibrate(opts);
    if (compare_cmd->parsed()) return cmd_compare(opts, stimuli, updates);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    const std::string what = e.what();
    return what.find("config") != std::string::npos ? 1 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
