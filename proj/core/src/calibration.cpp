#include "beesim/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "beesim/lif.hpp"
#include "beesim/spike_source.hpp"

namespace beesim {

namespace {
constexpr double kCpu4NominalGain = 1.0 / kAccumulatorMax;

inline double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }
}  // namespace

RateNetworkParams CalibrationTable::rate_params() const {
  RateNetworkParams p = RateNetworkParams::nominal();
  for (int i = 0; i < kNumCpu4; ++i) {
    p.cpu4[i].gain =
        kCpu4NominalGain * noise[i].gain_mult * fit[i].gain_correction;
    p.cpu4[i].offset = -noise[i].threshold_add + fit[i].offset_correction;
  }
  for (int i = 0; i < kNumCpu1; ++i) {
    const int id = kNumCpu4 + i;
    p.cpu1[i].a *= noise[id].gain_mult * fit[id].gain_correction;
    p.cpu1[i].b += noise[id].threshold_add - fit[id].offset_correction;
  }
  for (int i = 0; i < kNumMotor; ++i) {
    const int id = kNumCpu4 + kNumCpu1 + i;
    p.motor[i].gain = noise[id].gain_mult * fit[id].gain_correction;
    p.motor[i].offset = -noise[id].threshold_add + fit[id].offset_correction;
  }
  return p;
}

SpikingParams CalibrationTable::spiking_params() const {
  SpikingParams p = SpikingParams::nominal();
  for (int i = 0; i < kNumNeurons; ++i) {
    auto& n = p.neurons[i];
    const double g = noise[i].gain_mult * fit[i].gain_correction;
    n.gain_exc *= g;
    n.gain_inh *= g;
    n.lif.v_th += noise[i].threshold_add * (n.lif.v_th - n.lif.v_reset);
    n.lif.v_th = std::max(n.lif.v_th, n.lif.v_reset + 0.1);
    n.lif.i_bias += fit[i].offset_correction;
  }
  return p;
}

CalibrationTable apply_fixed_pattern_noise(CalibrationTable table, double cv,
                                           std::uint64_t seed) {
  if (cv < 0.0)
    throw std::invalid_argument("apply_fixed_pattern_noise: cv must be >= 0");
  table.noise_cv = cv;
  table.noise_seed = seed;
  if (cv == 0.0) return table;
  RngStream rng(derive_seed(seed, {kNoiseStream}));
  for (auto& draw : table.noise) {
    draw.gain_mult = rng.gaussian(1.0, cv);
    draw.threshold_add = rng.gaussian(0.0, cv);
  }
  return table;
}

// --- isolated spiking rig ---------------------------------------------------

namespace {

// One neuron driven by periodic virtual sources; returns the normalized rate
// over the measurement windows and a settledness verdict.
struct RigResult {
  double rate = 0.0;
  bool settled = true;
};

RigResult rig_rate(const SpikingNeuronConfig& neuron,
                   const ScheduleConfig& sched, double exc_weight,
                   double exc_rate, double inh_weight, double inh_rate,
                   int settle_windows = 5, int measure_windows = 10) {
  const int slots = sched.slots_per_update();
  const int steps = sched.neuron_steps_per_slot();
  const double dt = sched.dt_neuron_ms;
  RngStream rng(1);  // periodic sources never draw from it
  SpikeSource exc(SourceMode::kPeriodic, slots);
  SpikeSource inh(SourceMode::kPeriodic, slots);
  exc.set_rate(exc_rate);
  inh.set_rate(inh_rate);
  NeuronState state;
  LifIntegrator integ(neuron.lif, dt);
  double now = 0.0;
  long first_half = 0, second_half = 0;
  for (int w = 0; w < settle_windows + measure_windows; ++w) {
    exc.begin_window();
    inh.begin_window();
    for (int slot = 0; slot < slots; ++slot) {
      if (exc.tick(slot, rng))
        deliver_spike(state, exc_weight, true, neuron.gain_exc);
      if (inh.tick(slot, rng))
        deliver_spike(state, inh_weight, false, neuron.gain_inh);
      for (int step = 0; step < steps; ++step) {
        if (lif_step(state, neuron.lif, integ, dt, now) && w >= settle_windows) {
          if (w < settle_windows + measure_windows / 2)
            ++first_half;
          else
            ++second_half;
        }
        now += dt;
      }
    }
  }
  RigResult r;
  const double per_window = 10.0;  // counts at the maximum rate
  r.rate = static_cast<double>(first_half + second_half) /
           (per_window * measure_windows);
  // settled when the two half-window counts agree to a couple of spikes
  const long diff = std::labs(first_half - second_half);
  r.settled = diff <= 2 + (first_half + second_half) / 10;
  return r;
}

// Deterministic pattern search over (gain_correction, offset_correction).
NeuronCalibration pattern_search(
    NeuronCalibration start,
    const std::function<double(const NeuronCalibration&)>& objective,
    double gain_step, double offset_step, double min_step_factor) {
  NeuronCalibration best = start;
  double best_obj = objective(best);
  double sg = gain_step, so = offset_step;
  const double sg_min = gain_step * min_step_factor;
  while (sg > sg_min) {
    bool improved = false;
    const double trials[4][2] = {{sg, 0.0}, {-sg, 0.0}, {0.0, so}, {0.0, -so}};
    for (const auto& t : trials) {
      NeuronCalibration cand = best;
      cand.gain_correction = std::max(1e-3, cand.gain_correction + t[0]);
      cand.offset_correction += t[1];
      const double obj = objective(cand);
      if (obj < best_obj - 1e-15) {
        best = cand;
        best_obj = obj;
        improved = true;
      }
    }
    if (!improved) {
      sg *= 0.5;
      so *= 0.5;
    }
  }
  best.fit_residual = best_obj;
  best.calibrated = true;
  return best;
}

std::array<double, 9> central_sweep() {
  return {252, 315, 378, 441, 504, 567, 630, 693, 756};
}

}  // namespace

std::vector<CurveSample> measure_transfer_curve(const JourneyConfig& config,
                                                const SpikingParams& params,
                                                int neuron_id,
                                                std::span<const double> sweep) {
  if (neuron_id < 0 || neuron_id >= kNumCpu4)
    throw std::invalid_argument("measure_transfer_curve: not a CPU4 neuron");
  std::vector<CurveSample> out;
  out.reserve(sweep.size());
  for (double w : sweep) {
    const RigResult r = rig_rate(params.neurons[neuron_id], config.schedule,
                                 w, 1.0, 0.0, 0.0);
    out.push_back({w, r.rate, r.settled});
  }
  return out;
}

NeuronCalibration calibrate_cpu4(const JourneyConfig& config,
                                 const CalibrationTable& table,
                                 int neuron_id) {
  if (neuron_id < 0 || neuron_id >= kNumCpu4)
    throw std::invalid_argument("calibrate_cpu4: not a CPU4 neuron");
  const auto sweep = central_sweep();

  auto objective = [&](const NeuronCalibration& cand) {
    CalibrationTable trial = table;
    trial.fit[neuron_id] = cand;
    double worst = 0.0;
    if (config.mode == SimMode::kRate) {
      const RateNetworkParams p = trial.rate_params();
      for (double w : sweep) {
        const double rate =
            clamp01(p.cpu4[neuron_id].gain * w + p.cpu4[neuron_id].offset);
        worst = std::max(worst, std::abs(rate - w / kAccumulatorMax));
      }
    } else {
      const SpikingParams p = trial.spiking_params();
      for (double w : sweep) {
        const RigResult r = rig_rate(p.neurons[neuron_id], config.schedule,
                                     w, 1.0, 0.0, 0.0);
        worst = std::max(worst, std::abs(r.rate - w / kAccumulatorMax));
      }
    }
    return worst;
  };

  const double min_factor = config.mode == SimMode::kRate ? 1e-8 : 2e-4;
  NeuronCalibration result = pattern_search(table.fit[neuron_id], objective,
                                            0.25, 0.1, min_factor);
  if (result.fit_residual > 0.05)
    throw CalibrationError(
        "calibrate_cpu4: neuron " + std::to_string(neuron_id) +
        " fit residual " + std::to_string(result.fit_residual));
  return result;
}

NeuronCalibration calibrate_cpu1_motor(const JourneyConfig& config,
                                       const CalibrationTable& table,
                                       int neuron_id) {
  if (neuron_id < kNumCpu4 || neuron_id >= kNumNeurons)
    throw std::invalid_argument("calibrate_cpu1_motor: not a CPU1/M neuron");
  const bool is_motor = neuron_id >= kNumCpu4 + kNumCpu1;

  // grid over the drive rates; motor neurons have no inhibitory afferent and
  // are fitted against the proportional r_inh = 0 slice
  std::vector<std::pair<double, double>> grid;
  const int steps_1d = config.mode == SimMode::kRate ? 9 : 5;
  for (int ei = 0; ei < steps_1d; ++ei) {
    const double e = static_cast<double>(ei) / (steps_1d - 1);
    if (is_motor) {
      grid.emplace_back(e, 0.0);
    } else {
      for (int ii = 0; ii < steps_1d; ++ii)
        grid.emplace_back(e, static_cast<double>(ii) / (steps_1d - 1));
    }
  }

  auto target = [](double e, double i) { return e * (1.0 - i); };
  auto weight_of = [&](double t) {
    return std::abs(t - 0.5) <= 0.25 ? 4.0 : 1.0;  // operating-point band
  };

  auto objective = [&](const NeuronCalibration& cand) {
    CalibrationTable trial = table;
    trial.fit[neuron_id] = cand;
    double num = 0.0, den = 0.0;
    if (config.mode == SimMode::kRate) {
      const RateNetworkParams p = trial.rate_params();
      for (const auto& [e, i] : grid) {
        double rate;
        if (is_motor) {
          const auto& m = p.motor[neuron_id - kNumCpu4 - kNumCpu1];
          rate = clamp01(m.gain * e + m.offset);
        } else {
          rate = logistic_response(e - i, p.cpu1[neuron_id - kNumCpu4]);
        }
        const double t = target(e, i);
        const double w = weight_of(t);
        num += w * (rate - t) * (rate - t);
        den += w;
      }
    } else {
      const SpikingParams p = trial.spiking_params();
      for (const auto& [e, i] : grid) {
        const RigResult r =
            rig_rate(p.neurons[neuron_id], config.schedule,
                     Genome::kWeightMax, e, Genome::kWeightMax, i);
        const double t = target(e, i);
        const double w = weight_of(t);
        num += w * (r.rate - t) * (r.rate - t);
        den += w;
      }
    }
    return std::sqrt(num / den);
  };

  const double min_factor = config.mode == SimMode::kRate ? 1e-8 : 2e-4;
  return pattern_search(table.fit[neuron_id], objective, 0.25, 0.5,
                        min_factor);
}

CalibrationTable calibrate_all(const JourneyConfig& config,
                               CalibrationTable table) {
  for (int i = 0; i < kNumCpu4; ++i)
    table.fit[i] = calibrate_cpu4(config, table, i);
  for (int i = kNumCpu4; i < kNumNeurons; ++i)
    table.fit[i] = calibrate_cpu1_motor(config, table, i);
  return table;
}

}  // namespace beesim
