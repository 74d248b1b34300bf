#include "beesim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "beesim/rate_network.hpp"
#include "beesim/spiking_sim.hpp"
#include "beesim/thread_pool.hpp"

#include "json.hpp"

namespace beesim {

JourneyRecord analyze_trajectory(const Trajectory& trajectory,
                                 const JourneyConfig& config) {
  JourneyRecord rec;
  rec.seed = trajectory.seed;
  double sx = 0.0, sy = 0.0;
  long n_loop = 0;
  double min_dist = std::numeric_limits<double>::infinity();
  const TrajectorySample* last_outbound = nullptr;
  for (const auto& s : trajectory.samples) {
    if (s.phase == Phase::kOutbound) last_outbound = &s;
    if (s.phase != Phase::kLooping) continue;
    sx += s.x;
    sy += s.y;
    min_dist = std::min(min_dist, std::hypot(s.x, s.y));
    ++n_loop;
  }
  if (n_loop == 0)
    throw std::invalid_argument("analyze_trajectory: no looping samples");
  rec.return_x = sx / static_cast<double>(n_loop);
  rec.return_y = sy / static_cast<double>(n_loop);
  rec.min_loop_distance = min_dist;
  double lr = 0.0;
  for (const auto& s : trajectory.samples) {
    if (s.phase != Phase::kLooping) continue;
    lr += std::hypot(s.x - rec.return_x, s.y - rec.return_y);
  }
  rec.looping_radius = lr / static_cast<double>(n_loop);
  rec.outbound_radius =
      last_outbound ? std::hypot(last_outbound->x, last_outbound->y) : 0.0;
  (void)config;
  return rec;
}

SummaryStats summary_stats(std::span<const JourneyRecord> records,
                           double d_overlap) {
  SummaryStats s;
  s.d_overlap = d_overlap;
  s.n_journeys = static_cast<int>(records.size());
  std::vector<const JourneyRecord*> ok;
  for (const auto& r : records) {
    if (r.failed)
      ++s.n_failed;
    else
      ok.push_back(&r);
  }
  if (ok.empty()) throw std::invalid_argument("summary_stats: empty batch");
  const double n = static_cast<double>(ok.size());

  for (const auto* r : ok) {
    s.mean_dx += r->return_x;
    s.mean_dy += r->return_y;
  }
  s.mean_dx /= n;
  s.mean_dy /= n;
  for (const auto* r : ok) {
    s.std_dx += (r->return_x - s.mean_dx) * (r->return_x - s.mean_dx);
    s.std_dy += (r->return_y - s.mean_dy) * (r->return_y - s.mean_dy);
  }
  s.std_dx = std::sqrt(s.std_dx / n);
  s.std_dy = std::sqrt(s.std_dy / n);

  std::vector<double> radii;
  radii.reserve(ok.size());
  for (const auto* r : ok) radii.push_back(r->outbound_radius);
  std::sort(radii.begin(), radii.end());
  s.median_outbound_radius = radii[radii.size() / 2];

  int overlap = 0, within = 0;
  for (const auto* r : ok) {
    const double dev = std::hypot(r->return_x, r->return_y);
    s.mean_return_deviation += dev;
    s.mean_looping_radius += r->looping_radius;
    if (r->min_loop_distance <= d_overlap) ++overlap;
    if (dev <= 1000.0) ++within;
  }
  s.mean_return_deviation /= n;
  s.mean_looping_radius /= n;
  s.overlap_fraction = overlap / n;
  s.within_1000_fraction = within / n;
  s.mean_return_deviation_pct =
      s.median_outbound_radius > 0.0
          ? 100.0 * s.mean_return_deviation / s.median_outbound_radius
          : 0.0;
  return s;
}

SummaryStats summary_stats(std::span<const Trajectory> trajectories,
                           const JourneyConfig& config) {
  std::vector<JourneyRecord> records;
  records.reserve(trajectories.size());
  int index = 0;
  for (const auto& t : trajectories) {
    JourneyRecord r = analyze_trajectory(t, config);
    r.index = index++;
    records.push_back(std::move(r));
  }
  return summary_stats(records, config.world.v_max / 2.0);
}

std::pair<SummaryStats, std::vector<JourneyRecord>> run_batch(
    const JourneyConfig& config, const Genome& genome, int n_journeys,
    std::uint64_t master_seed, int n_workers, const TrajectorySink& sink,
    const CalibrationTable& table) {
  if (n_journeys < 1) throw std::invalid_argument("run_batch: need n >= 1");
  config.validate();
  std::vector<JourneyRecord> records(static_cast<size_t>(n_journeys));

  const RateNetworkParams rate_params = table.rate_params();
  const SpikingParams spiking_params = table.spiking_params();

  parallel_for(n_journeys, n_workers, [&](int i) {
    JourneyRecord& rec = records[static_cast<size_t>(i)];
    rec.index = i;
    const std::uint64_t seed = derive_seed(
        master_seed, {kJourneyStream, static_cast<std::uint64_t>(i)});
    rec.seed = seed;
    try {
      JourneyConfig jc = config;
      jc.seed = seed;
      RngStream rng(seed);
      Trajectory traj;
      if (config.mode == SimMode::kRate) {
        traj = run_rate_journey(jc, genome, rng, rate_params).first;
      } else {
        traj = run_spiking_journey(jc, genome, rng, spiking_params).first;
      }
      const int index = rec.index;
      rec = analyze_trajectory(traj, jc);
      rec.index = index;
      rec.seed = seed;
      if (sink) sink(i, traj);
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.error = e.what();
    }
  });

  SummaryStats stats = summary_stats(records, config.world.v_max / 2.0);
  return {stats, std::move(records)};
}

std::string stats_to_json(const SummaryStats& s) {
  nlohmann::ordered_json j;
  j["schema"] = "beesim-stats/1";
  j["n_journeys"] = s.n_journeys;
  j["n_failed"] = s.n_failed;
  j["mean_dx"] = s.mean_dx;
  j["mean_dy"] = s.mean_dy;
  j["std_dx"] = s.std_dx;
  j["std_dy"] = s.std_dy;
  j["overlap_fraction"] = s.overlap_fraction;
  j["within_1000_fraction"] = s.within_1000_fraction;
  j["median_outbound_radius"] = s.median_outbound_radius;
  j["mean_return_deviation"] = s.mean_return_deviation;
  j["mean_return_deviation_pct"] = s.mean_return_deviation_pct;
  j["mean_looping_radius"] = s.mean_looping_radius;
  j["d_overlap"] = s.d_overlap;
  return j.dump(2) + "\n";
}

}  // namespace beesim
