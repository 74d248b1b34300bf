#pragma once

#include <array>
#include <cstdint>

namespace beesim {

// 16 additively joined 6-bit synapses acting as one weight in [0, 1008],
// plus a sub-LSB residual so integrator updates far below one weight step
// still accumulate. Invariant: total() + residual() equals the clamped
// real-valued accumulator exactly (the residual always lies in [0, 1)).
class Supersynapse {
 public:
  static constexpr int kSubSynapses = 16;
  static constexpr int kSubWeightMax = 63;
  static constexpr int kTotalMax = kSubSynapses * kSubWeightMax;  // 1008

  Supersynapse() = default;
  explicit Supersynapse(int total) { write_total(total); }

  // Balanced distribution: every sub-weight floor(total/16), the first
  // (total mod 16) of them incremented. Out-of-range totals clamp; the
  // return value reports whether clamping happened.
  bool write_total(int total);

  // One integrator update with counts from the elapsed window:
  // real <- clamp(real + h*(c_tn - c_tb1 - k), 0, 1008); the integer part is
  // written back through write_total, the fraction is kept as the residual.
  void update(double c_tn, double c_tb1, double h, double k);

  int total() const;
  double residual() const { return residual_; }
  double real_value() const { return total() + residual_; }
  const std::array<std::uint8_t, kSubSynapses>& sub_weights() const {
    return sub_weights_;
  }

 private:
  std::array<std::uint8_t, kSubSynapses> sub_weights_{};
  double residual_ = 0.0;
};

}  // namespace beesim
