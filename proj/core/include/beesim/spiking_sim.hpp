#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "beesim/agent.hpp"
#include "beesim/config.hpp"
#include "beesim/connectome.hpp"
#include "beesim/genome.hpp"
#include "beesim/lif.hpp"
#include "beesim/spike_source.hpp"
#include "beesim/trajectory.hpp"

namespace beesim {

// Effective per-neuron physics of the emulated analog core: LIF constants
// plus synaptic charge gains. These are the values after fixed-pattern noise
// and calibration corrections are folded in (calibration.hpp does that).
struct SpikingNeuronConfig {
  LifParams lif;
  double gain_exc = 0.0;  // current jump per weight unit, excitatory
  double gain_inh = 0.0;  // inhibitory
};

struct SpikingParams {
  std::array<SpikingNeuronConfig, kNumNeurons> neurons;
  // Per-population source modes. The compass sources default to Poisson:
  // their synaptic irregularity dithers the motor spike counts, which
  // otherwise alias into a steering dead zone on straight glides. The flow
  // sources have no synaptic targets (their counts only feed the weight
  // updates), so they stay periodic for exact odometry.
  SourceMode tb1_source_mode = SourceMode::kPoisson;
  SourceMode tn_source_mode = SourceMode::kPeriodic;
  bool source_jitter = false;  // uniform sub-slot delivery jitter

  static SpikingParams nominal();
};

struct SpikeEvent {
  double t_ms = 0.0;
  std::int16_t neuron_id = 0;
};

struct SpikeRecord {
  std::vector<SpikeEvent> events;
};

// CSV schema: t_ms_bio,neuron_id,population
void write_spikes_csv(std::ostream& out, const SpikeRecord& record);

// Clock-driven simulation of the 18-neuron network plus virtual sources,
// scheduled in update cycles of (by default) 10 spike slots x 100 LIF steps.
// Each cycle performs the three boundary subcycles (agent/sensor update,
// count readout + weight delta, weight write-back + motor step + recording)
// and then dispatches the slots.
class SpikingSimulation {
 public:
  SpikingSimulation(const JourneyConfig& config, const Genome& genome,
                    const SpikingParams& params, RngStream rng);

  // Executes one full agent/environment update cycle.
  void run_update_cycle();

  long cycle_index() const { return cycle_; }
  const AgentState& agent() const { return agent_; }
  const Connectome& connectome() const { return connectome_; }
  Connectome& connectome() { return connectome_; }
  const Trajectory& trajectory() const { return trajectory_; }
  const SpikeRecord& spikes() const { return spikes_; }
  const std::array<NeuronState, kNumNeurons>& neurons() const {
    return neurons_;
  }

  // Spike counts of the most recently completed window, per neuron.
  const std::array<int, kNumNeurons>& last_window_counts() const {
    return window_counts_;
  }

  // Drives the TB1/TN source rates externally instead of from the agent;
  // used by the oracle-equivalence tests and calibration sweeps.
  void override_sensors(const SensorRates& rates);
  void clear_sensor_override();

  Trajectory take_trajectory() { return std::move(trajectory_); }
  SpikeRecord take_spikes() { return std::move(spikes_); }

 private:
  void dispatch_slots();
  void deliver_neuron_spike(int neuron_id);

  JourneyConfig config_;
  SpikingParams params_;
  Connectome connectome_;
  RngStream rng_;

  AgentState agent_;
  std::array<NeuronState, kNumNeurons> neurons_{};
  std::array<LifIntegrator, kNumNeurons> integrators_;
  std::array<int, kNumNeurons> window_counts_{};

  // virtual sources: TB1[0..3], TN L/R, one background generator per CPU4
  std::array<SpikeSource, 4> tb1_sources_;
  std::array<SpikeSource, 2> tn_sources_;
  std::array<SpikeSource, kNumCpu4> bg_sources_;

  // spikes emitted in the previous LIF step, delivered at the next one
  std::vector<int> pending_spikes_;

  bool sensor_override_ = false;
  SensorRates forced_sensors_;

  long cycle_ = 0;
  bool have_prev_window_ = false;
  PositionRecorder recorder_;
  Trajectory trajectory_;
  SpikeRecord spikes_;
};

// Runs a full spiking journey. Deterministic in (config, genome, params, rng).
std::pair<Trajectory, SpikeRecord> run_spiking_journey(
    const JourneyConfig& config, const Genome& genome, RngStream& rng);
std::pair<Trajectory, SpikeRecord> run_spiking_journey(
    const JourneyConfig& config, const Genome& genome, RngStream& rng,
    const SpikingParams& params);

}  // namespace beesim
