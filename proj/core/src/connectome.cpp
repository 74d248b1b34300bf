#include "beesim/connectome.hpp"

#include <cmath>

#include "beesim/rate_network.hpp"

namespace beesim {

std::string population_of(int neuron_id) {
  if (neuron_id < 4) return "CPU4_L";
  if (neuron_id < 8) return "CPU4_R";
  if (neuron_id < 12) return "CPU1_L";
  if (neuron_id < 16) return "CPU1_R";
  return neuron_id == 16 ? "M_L" : "M_R";
}

Connectome build_network(const Genome& genome) {
  Connectome net;
  for (auto& s : net.cpu4_input)
    s.write_total(static_cast<int>(kAccumulatorBaseline));
  for (int h = 0; h < 2; ++h) {
    for (int j = 0; j < 4; ++j) {
      Cpu1Afferents& a = net.cpu1[h * 4 + j];
      a.exc_from = cpu4_id(h, j);
      a.inh_from = cpu4_id(1 - h, (j + 2) % 4);
      a.tb1_source = h == 0 ? (j + 1) % 4 : (j + 3) % 4;
      a.w_exc = Genome::quantized(genome.cpu4_to_cpu1_exc[h * 4 + j]);
      a.w_inh = Genome::quantized(genome.cpu4_to_cpu1_inh[h * 4 + j]);
      a.w_tb1 = Genome::quantized(genome.tb1_to_cpu1[h * 4 + j]);
    }
    net.motor_weight[h] = Genome::quantized(genome.cpu1_to_m[h]);
  }
  return net;
}

Genome Connectome::extract_genome() const {
  Genome g;
  for (int i = 0; i < kNumCpu1; ++i) {
    g.cpu4_to_cpu1_exc[i] = cpu1[i].w_exc;
    g.cpu4_to_cpu1_inh[i] = cpu1[i].w_inh;
    g.tb1_to_cpu1[i] = cpu1[i].w_tb1;
  }
  g.cpu1_to_m[0] = motor_weight[0];
  g.cpu1_to_m[1] = motor_weight[1];
  return g;
}

}  // namespace beesim
