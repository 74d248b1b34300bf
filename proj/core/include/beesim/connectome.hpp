#pragma once

#include <array>
#include <string>

#include "beesim/genome.hpp"
#include "beesim/lif.hpp"
#include "beesim/supersynapse.hpp"

namespace beesim {

// Simulated neuron ids. Sources (TB1, TN, background) are virtual and live
// outside this id space; only the 18 hardware neurons appear in spike logs.
inline constexpr int kNumCpu4 = 8;
inline constexpr int kNumCpu1 = 8;
inline constexpr int kNumMotor = 2;
inline constexpr int kNumNeurons = kNumCpu4 + kNumCpu1 + kNumMotor;  // 18

constexpr int cpu4_id(int hemisphere, int j) { return hemisphere * 4 + j; }
constexpr int cpu1_id(int hemisphere, int j) { return 8 + hemisphere * 4 + j; }
constexpr int motor_id(int hemisphere) { return 16 + hemisphere; }

std::string population_of(int neuron_id);  // e.g. "CPU4_L", "M_R"

// Fixed CPU1 afferent triple implementing the rotated Fig.-2 wiring.
struct Cpu1Afferents {
  int exc_from;    // CPU4 neuron id, same hemisphere, equal index
  int inh_from;    // CPU4 neuron id, opposite hemisphere, index + 2 (mod 4)
  int tb1_source;  // TB1 cell index, +1 (left) / -1 (right) (mod 4)
  int w_exc = 0;   // 6-bit weights
  int w_inh = 0;
  int w_tb1 = 0;
};

// Static wiring plus the mutable CPU4 supersynapses. Built from a genome;
// weights are the quantized genes.
struct Connectome {
  std::array<Supersynapse, kNumCpu4> cpu4_input;  // background -> CPU4_i
  std::array<Cpu1Afferents, kNumCpu1> cpu1;       // indexed by cpu1 cell
  std::array<int, kNumMotor> motor_weight{};      // single synapse per M

  Genome extract_genome() const;
};

// Realizes the network topology for a genome: virtual TB1(4) and TN(2)
// sources, one full-rate background source per CPU4 cell behind a
// supersynapse initialized to the accumulator baseline, rotated CPU4/TB1
// projections onto CPU1, and one synapse per motor neuron.
Connectome build_network(const Genome& genome);

}  // namespace beesim
