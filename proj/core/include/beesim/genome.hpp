#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

namespace beesim {

// The 26 evolvable synaptic weights around CPU1, on the raw 6-bit synapse
// scale [0, 63]. Genes are real-valued; they are only quantized/normalized
// when materialized into a network. Index blocks: entries 0..3 of each array
// belong to the left hemisphere, 4..7 to the right.
struct Genome {
  static constexpr int kSize = 26;
  static constexpr double kWeightMax = 63.0;

  std::array<double, 8> tb1_to_cpu1{};
  std::array<double, 8> cpu4_to_cpu1_exc{};
  std::array<double, 8> cpu4_to_cpu1_inh{};
  std::array<double, 2> cpu1_to_m{};

  // Hand-set starting point for the closed loop and the evolution strategy.
  static Genome primitive();

  std::array<double, kSize> flatten() const;
  static Genome unflatten(std::span<const double, kSize> values);

  // Gene clamped to [0, 63] and normalized to [0, 1]; the rate network's
  // weight scale.
  static double normalized(double gene);
  // Gene rounded and clamped to the integer 6-bit range; the spiking
  // network's weight scale.
  static int quantized(double gene);

  // FNV-1a over the gene bit patterns, for trajectory metadata.
  std::string hash() const;

  bool operator==(const Genome&) const = default;
};

}  // namespace beesim
