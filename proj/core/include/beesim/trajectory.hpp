#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "beesim/config.hpp"

namespace beesim {

enum class Phase { kOutbound, kReturn, kLooping };

std::string to_string(Phase phase);
Phase phase_from_string(const std::string& s);

// Phase of an update index: outbound [0, n_ret), return [n_ret, 2 n_ret),
// looping [2 n_ret, n_stop).
Phase phase_of_update(long update_index, const JourneyConfig& config);

struct TrajectorySample {
  long step = 0;
  double t_ms = 0.0;
  double x = 0.0;
  double y = 0.0;
  double phi = 0.0;
  Phase phase = Phase::kOutbound;

  bool operator==(const TrajectorySample&) const = default;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  // metadata
  std::uint64_t seed = 0;
  SimMode mode = SimMode::kRate;
  FidelityMode fidelity = FidelityMode::kFullPrecision;
  std::string genome_hash;
  // hardware-16bit bookkeeping
  bool overflow_flag = false;  // some coordinate was clamped to int16
  bool capacity_flag = false;  // a record beyond max_records was rejected
};

// Records positions with the configured fidelity. In hardware mode the
// coordinates are rounded half-away-from-zero, clamped to signed 16 bit, and
// at most max_records samples are kept; later records are rejected.
class PositionRecorder {
 public:
  explicit PositionRecorder(FidelityMode mode, int max_records);

  // Returns false when the record was rejected (capacity exhausted).
  bool record(Trajectory& trajectory, const TrajectorySample& sample);

 private:
  FidelityMode mode_;
  int max_records_;
};

// CSV schema: header "step,t_bio_ms,x,y,phi,phase"; full round-trip precision.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
Trajectory read_trajectory_csv(std::istream& in);

}  // namespace beesim
