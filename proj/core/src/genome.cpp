#include "beesim/genome.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace beesim {

Genome Genome::primitive() {
  // Uniform per-class weights, tuned against the closed-loop homing
  // statistics in rate mode. Integer-valued so the quantized spiking
  // materialization is lossless.
  Genome g;
  g.tb1_to_cpu1.fill(22.0);
  g.cpu4_to_cpu1_exc.fill(63.0);
  g.cpu4_to_cpu1_inh.fill(44.0);
  g.cpu1_to_m.fill(60.0);
  return g;
}

std::array<double, Genome::kSize> Genome::flatten() const {
  std::array<double, kSize> out{};
  int i = 0;
  for (double w : tb1_to_cpu1) out[i++] = w;
  for (double w : cpu4_to_cpu1_exc) out[i++] = w;
  for (double w : cpu4_to_cpu1_inh) out[i++] = w;
  for (double w : cpu1_to_m) out[i++] = w;
  return out;
}

Genome Genome::unflatten(std::span<const double, kSize> v) {
  Genome g;
  int i = 0;
  for (double& w : g.tb1_to_cpu1) w = v[i++];
  for (double& w : g.cpu4_to_cpu1_exc) w = v[i++];
  for (double& w : g.cpu4_to_cpu1_inh) w = v[i++];
  for (double& w : g.cpu1_to_m) w = v[i++];
  return g;
}

double Genome::normalized(double gene) {
  return std::clamp(gene, 0.0, kWeightMax) / kWeightMax;
}

int Genome::quantized(double gene) {
  const double q = std::round(gene);
  return static_cast<int>(std::clamp(q, 0.0, kWeightMax));
}

std::string Genome::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (double w : flatten()) {
    std::uint64_t bits;
    std::memcpy(&bits, &w, sizeof(bits));
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffu;
      h *= 0x100000001b3ull;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace beesim
