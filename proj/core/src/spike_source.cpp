#include "beesim/spike_source.hpp"

#include <algorithm>
#include <cmath>

namespace beesim {

void SpikeSource::set_rate(double normalized_rate) {
  rate_ = std::clamp(normalized_rate, 0.0, 1.0);
}

void SpikeSource::begin_window() {
  spikes_this_window_ =
      static_cast<int>(std::lround(rate_ * static_cast<double>(slots_)));
  count_ = 0;
}

bool SpikeSource::tick(int slot_index, RngStream& rng) {
  bool emit = false;
  if (mode_ == SourceMode::kPeriodic) {
    // Bresenham spacing: n spikes spread evenly over the window's slots.
    const int n = spikes_this_window_;
    emit = ((slot_index + 1) * n) / slots_ > (slot_index * n) / slots_;
  } else {
    emit = rng.uniform01() < rate_;
  }
  if (emit) ++count_;
  return emit;
}

}  // namespace beesim
