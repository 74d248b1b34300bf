#pragma once

#include "beesim/rng.hpp"

namespace beesim {

enum class SourceMode { kPeriodic, kPoisson };

// Rate-coded virtual spike generator ticked once per spike slot. Periodic
// mode emits exactly round(rate * slots) evenly spaced spikes per update
// window; Poisson mode emits at most one spike per slot with matching
// expected rate.
class SpikeSource {
 public:
  explicit SpikeSource(SourceMode mode = SourceMode::kPeriodic,
                       int slots_per_window = 10)
      : mode_(mode), slots_(slots_per_window) {}

  void set_rate(double normalized_rate);  // clamped to [0, 1]
  double rate() const { return rate_; }

  // Called at each window boundary; zeroes the per-window emission count.
  void begin_window();

  // One slot tick; rng is only touched in Poisson mode.
  bool tick(int slot_index, RngStream& rng);

  // Spikes emitted since begin_window(); the counts entering Eq.-style
  // integrator updates.
  int window_count() const { return count_; }

 private:
  SourceMode mode_;
  int slots_;
  double rate_ = 0.0;
  int spikes_this_window_ = 0;  // periodic target, round(rate * slots)
  int count_ = 0;
};

}  // namespace beesim
