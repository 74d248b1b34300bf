#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "beesim/calibration.hpp"
#include "beesim/config.hpp"
#include "beesim/genome.hpp"
#include "beesim/trajectory.hpp"

namespace beesim {

// Per-journey reduction of a trajectory.
struct JourneyRecord {
  int index = 0;
  std::uint64_t seed = 0;
  double return_x = 0.0;         // mean looping position
  double return_y = 0.0;
  double outbound_radius = 0.0;  // |position| at the last outbound sample
  double looping_radius = 0.0;   // mean distance to the looping centroid
  double min_loop_distance = 0.0;  // closest looping approach to the origin
  bool failed = false;
  std::string error;
};

struct SummaryStats {
  int n_journeys = 0;
  int n_failed = 0;
  double mean_dx = 0.0, mean_dy = 0.0;
  double std_dx = 0.0, std_dy = 0.0;
  double overlap_fraction = 0.0;      // looping passes within d_overlap
  double within_1000_fraction = 0.0;  // |return location| <= 1000 (inclusive)
  double median_outbound_radius = 0.0;
  double mean_return_deviation = 0.0;
  double mean_return_deviation_pct = 0.0;  // of the median outbound radius
  double mean_looping_radius = 0.0;
  double d_overlap = 35.0;
};

JourneyRecord analyze_trajectory(const Trajectory& trajectory,
                                 const JourneyConfig& config);

// Aggregates per-journey records; failed journeys are excluded from the
// statistics but counted. Throws std::invalid_argument for an empty batch.
SummaryStats summary_stats(std::span<const JourneyRecord> records,
                           double d_overlap);
SummaryStats summary_stats(std::span<const Trajectory> trajectories,
                           const JourneyConfig& config);

// Runs n independent journeys with per-index derived seeds, optionally in
// parallel; results are index-ordered, so the outcome does not depend on the
// worker count. The optional sink receives each finished trajectory (called
// from worker threads, must be internally synchronized or pure).
using TrajectorySink = std::function<void(int index, const Trajectory&)>;

std::pair<SummaryStats, std::vector<JourneyRecord>> run_batch(
    const JourneyConfig& config, const Genome& genome, int n_journeys,
    std::uint64_t master_seed, int n_workers = 1,
    const TrajectorySink& sink = nullptr,
    const CalibrationTable& table = CalibrationTable::nominal());

std::string stats_to_json(const SummaryStats& stats);

}  // namespace beesim
