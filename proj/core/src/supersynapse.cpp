#include "beesim/supersynapse.hpp"

#include <algorithm>
#include <cmath>

namespace beesim {

bool Supersynapse::write_total(int total) {
  const int clamped = std::clamp(total, 0, kTotalMax);
  const int base = clamped / kSubSynapses;
  const int extra = clamped % kSubSynapses;
  for (int i = 0; i < kSubSynapses; ++i)
    sub_weights_[i] = static_cast<std::uint8_t>(base + (i < extra ? 1 : 0));
  return clamped != total;
}

void Supersynapse::update(double c_tn, double c_tb1, double h, double k) {
  double real = total() + residual_ + h * (c_tn - c_tb1 - k);
  real = std::clamp(real, 0.0, static_cast<double>(kTotalMax));
  const double stored = std::floor(real);
  write_total(static_cast<int>(stored));
  residual_ = real - stored;
}

int Supersynapse::total() const {
  int sum = 0;
  for (std::uint8_t w : sub_weights_) sum += w;
  return sum;
}

}  // namespace beesim
