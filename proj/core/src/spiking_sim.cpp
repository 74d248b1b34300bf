#include "beesim/spiking_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "beesim/rate_network.hpp"

namespace beesim {

namespace {

std::array<LifIntegrator, kNumNeurons> make_integrators(
    const SpikingParams& params, double dt_ms) {
  // no default constructor for LifIntegrator; build explicitly
  auto make = [&](int i) { return LifIntegrator(params.neurons[i].lif, dt_ms); };
  return {make(0),  make(1),  make(2),  make(3),  make(4),  make(5),
          make(6),  make(7),  make(8),  make(9),  make(10), make(11),
          make(12), make(13), make(14), make(15), make(16), make(17)};
}

}  // namespace

SpikingParams SpikingParams::nominal() {
  SpikingParams p;
  // CPU4: long membrane time constant (near-perfect integrator) so the
  // output rate tracks the supersynapse weight proportionally from zero;
  // with tau_m = 10 ms the cells stay silent below half range. The small
  // bias offsets the residual leak, and the gain puts w = 1008 just under
  // the 100 Hz cap.
  for (int i = 0; i < kNumCpu4; ++i) {
    auto& n = p.neurons[i];
    n.lif = LifParams{};
    n.lif.g_l = 0.01;  // tau_m = 100 ms
    n.lif.i_bias = 0.005;
    n.gain_exc = 2.05e-4;
    n.gain_inh = 0.0;
  }
  // CPU1: long refractory period places the operating band in the
  // compressive part of the f-I curve, mirroring the oracle's logistic
  // above its midpoint; a constant bias keeps the cells active under net
  // inhibition.
  for (int i = kNumCpu4; i < kNumCpu4 + kNumCpu1; ++i) {
    auto& n = p.neurons[i];
    n.lif = LifParams{};
    n.lif.t_ref_ms = 5.5;
    n.lif.i_bias = 0.30;
    n.gain_exc = 0.0095;
    n.gain_inh = 0.0095;
  }
  // Motor: near-linear aggregation of the hemisphere's CPU1 spikes, same
  // integrator regime as CPU4.
  for (int i = kNumCpu4 + kNumCpu1; i < kNumNeurons; ++i) {
    auto& n = p.neurons[i];
    n.lif = LifParams{};
    n.lif.g_l = 0.01;
    n.lif.i_bias = 0.005;
    n.gain_exc = 9.0e-4;
    n.gain_inh = 0.0;
  }
  return p;
}

void write_spikes_csv(std::ostream& out, const SpikeRecord& record) {
  out << "t_ms_bio,neuron_id,population\n";
  char buf[96];
  for (const auto& e : record.events) {
    std::snprintf(buf, sizeof(buf), "%.4f,%d,%s\n", e.t_ms, e.neuron_id,
                  population_of(e.neuron_id).c_str());
    out << buf;
  }
}

SpikingSimulation::SpikingSimulation(const JourneyConfig& config,
                                     const Genome& genome,
                                     const SpikingParams& params,
                                     RngStream rng)
    : config_(config),
      params_(params),
      connectome_(build_network(genome)),
      rng_(rng),
      integrators_(make_integrators(params, config.schedule.dt_neuron_ms)),
      tb1_sources_{SpikeSource(params.tb1_source_mode, config.schedule.slots_per_update()),
                   SpikeSource(params.tb1_source_mode, config.schedule.slots_per_update()),
                   SpikeSource(params.tb1_source_mode, config.schedule.slots_per_update()),
                   SpikeSource(params.tb1_source_mode, config.schedule.slots_per_update())},
      tn_sources_{SpikeSource(params.tn_source_mode, config.schedule.slots_per_update()),
                  SpikeSource(params.tn_source_mode, config.schedule.slots_per_update())},
      recorder_(config.fidelity, config.schedule.max_records) {
  config_.validate();
  for (auto& s : bg_sources_) {
    // background generators always run at the full rate; CPU4 output is then
    // controlled purely by the supersynapse weight
    s = SpikeSource(SourceMode::kPeriodic, config.schedule.slots_per_update());
    s.set_rate(1.0);
  }
  trajectory_.seed = config.seed;
  trajectory_.mode = SimMode::kSpiking;
  trajectory_.fidelity = config.fidelity;
  trajectory_.genome_hash = genome.hash();
  pending_spikes_.reserve(kNumNeurons);
}

void SpikingSimulation::override_sensors(const SensorRates& rates) {
  sensor_override_ = true;
  forced_sensors_ = rates;
}

void SpikingSimulation::clear_sensor_override() { sensor_override_ = false; }

void SpikingSimulation::run_update_cycle() {
  const long w = cycle_;
  const long n_ret = config_.n_return_updates();

  // subcycle 2/3 readout: spike counters are read exactly once per window
  for (int i = 0; i < kNumNeurons; ++i) {
    window_counts_[i] = neurons_[i].spike_count;
    neurons_[i].spike_count = 0;
  }

  // subcycle 3: motor output of the elapsed window moves the agent
  if (!sensor_override_) {
    if (w < n_ret) {
      agent_ = step_outbound(agent_, rng_, config_.world);
    } else {
      const double r_ml =
          std::min(window_counts_[motor_id(0)] / kCountsPerUnitRate, 1.0);
      const double r_mr =
          std::min(window_counts_[motor_id(1)] / kCountsPerUnitRate, 1.0);
      agent_ = apply_motor(agent_, r_ml, r_mr, config_.world);
    }
  }

  // subcycle 2/3: integrate the elapsed window's source counts into the
  // CPU4 supersynapses (crossed flow assignment, as in the rate oracle)
  if (have_prev_window_) {
    const double c_tn_l = tn_sources_[0].window_count();
    const double c_tn_r = tn_sources_[1].window_count();
    for (int j = 0; j < 4; ++j) {
      const double c_tb1 = tb1_sources_[j].window_count();
      connectome_.cpu4_input[cpu4_id(0, j)].update(c_tn_r, c_tb1, config_.h,
                                                   config_.k);
      connectome_.cpu4_input[cpu4_id(1, j)].update(c_tn_l, c_tb1, config_.h,
                                                   config_.k);
    }
  }

  // subcycle 1: encode the new agent state into the source rates
  const SensorRates sensors =
      sensor_override_ ? forced_sensors_ : sense(agent_, config_.world);
  for (int j = 0; j < 4; ++j) tb1_sources_[j].set_rate(sensors.tb1[j]);
  tn_sources_[0].set_rate(sensors.tn_l);
  tn_sources_[1].set_rate(sensors.tn_r);

  // trajectory storage (every record_stride-th cycle in fidelity mode)
  const bool record_this =
      config_.fidelity == FidelityMode::kFullPrecision ||
      (w % config_.schedule.record_stride) == 0;
  if (record_this) {
    const double t_ms = static_cast<double>(w) * config_.schedule.dt_update_ms;
    recorder_.record(trajectory_, {agent_.step_index, t_ms, agent_.x, agent_.y,
                                   agent_.phi, phase_of_update(w, config_)});
  }

  dispatch_slots();
  have_prev_window_ = true;
  ++cycle_;
}

void SpikingSimulation::deliver_neuron_spike(int neuron_id) {
  if (neuron_id < kNumCpu4) {
    // CPU4 -> CPU1: excitatory same index, inhibitory to the opposite
    // hemisphere rotated by 180 degrees
    const int h = neuron_id / 4;
    const int j = neuron_id % 4;
    const int exc_target = cpu1_id(h, j);
    const int inh_target = cpu1_id(1 - h, (j + 2) % 4);
    deliver_spike(neurons_[exc_target], connectome_.cpu1[exc_target - 8].w_exc,
                  true, params_.neurons[exc_target].gain_exc);
    deliver_spike(neurons_[inh_target], connectome_.cpu1[inh_target - 8].w_inh,
                  false, params_.neurons[inh_target].gain_inh);
  } else if (neuron_id < kNumCpu4 + kNumCpu1) {
    // CPU1 -> M: all four hemisphere cells share the single motor synapse
    const int h = (neuron_id - 8) / 4;
    const int m = motor_id(h);
    deliver_spike(neurons_[m], connectome_.motor_weight[h], true,
                  params_.neurons[m].gain_exc);
  }
  // motor spikes are consumed by the scheduler via the spike counters
}

void SpikingSimulation::dispatch_slots() {
  const int slots = config_.schedule.slots_per_update();
  const int steps = config_.schedule.neuron_steps_per_slot();
  const double dt = config_.schedule.dt_neuron_ms;
  const double t0 = static_cast<double>(cycle_) * config_.schedule.dt_update_ms;

  for (auto& s : tb1_sources_) s.begin_window();
  for (auto& s : tn_sources_) s.begin_window();
  for (auto& s : bg_sources_) s.begin_window();

  // per-slot source deliveries: (step index, target, weight, gain, exc)
  struct Delivery {
    int step;
    int target;
    double weight;
    double gain;
    bool exc;
  };
  std::vector<Delivery> deliveries;
  deliveries.reserve(16);

  for (int slot = 0; slot < slots; ++slot) {
    deliveries.clear();
    auto delivery_step = [&]() {
      return params_.source_jitter
                 ? static_cast<int>(rng_.next_u64() % static_cast<unsigned>(steps))
                 : 0;
    };
    // TB1 inhibition onto CPU1 (rotated); counts also feed the axo-axonic
    // weight updates at the next boundary
    for (int j = 0; j < 4; ++j) {
      if (!tb1_sources_[j].tick(slot, rng_)) continue;
      for (int c = 0; c < kNumCpu1; ++c) {
        if (connectome_.cpu1[c].tb1_source != j) continue;
        const int target = 8 + c;
        deliveries.push_back({delivery_step(), target,
                              static_cast<double>(connectome_.cpu1[c].w_tb1),
                              params_.neurons[target].gain_inh, false});
      }
    }
    // TN sources have no synaptic targets; only their counts matter
    for (auto& s : tn_sources_) s.tick(slot, rng_);
    // background -> CPU4 through the supersynapse
    for (int i = 0; i < kNumCpu4; ++i) {
      if (!bg_sources_[i].tick(slot, rng_)) continue;
      deliveries.push_back({delivery_step(), i,
                            static_cast<double>(connectome_.cpu4_input[i].total()),
                            params_.neurons[i].gain_exc, true});
    }

    for (int step = 0; step < steps; ++step) {
      const double now = t0 + slot * config_.schedule.dt_spike_slot_ms +
                         step * dt;
      for (const auto& d : deliveries)
        if (d.step == step)
          deliver_spike(neurons_[d.target], d.weight, d.exc, d.gain);
      // spikes from the previous step arrive before this one
      for (int id : pending_spikes_) deliver_neuron_spike(id);
      pending_spikes_.clear();
      for (int i = 0; i < kNumNeurons; ++i) {
        if (lif_step(neurons_[i], params_.neurons[i].lif, integrators_[i], dt,
                     now)) {
          pending_spikes_.push_back(i);
          spikes_.events.push_back({now, static_cast<std::int16_t>(i)});
        }
      }
    }
  }
}

std::pair<Trajectory, SpikeRecord> run_spiking_journey(
    const JourneyConfig& config, const Genome& genome, RngStream& rng) {
  return run_spiking_journey(config, genome, rng, SpikingParams::nominal());
}

std::pair<Trajectory, SpikeRecord> run_spiking_journey(
    const JourneyConfig& config, const Genome& genome, RngStream& rng,
    const SpikingParams& params) {
  config.validate();
  SpikingSimulation sim(config, genome, params, rng);
  const long n = config.n_updates();
  for (long w = 0; w < n; ++w) sim.run_update_cycle();
  return {sim.take_trajectory(), sim.take_spikes()};
}

}  // namespace beesim
