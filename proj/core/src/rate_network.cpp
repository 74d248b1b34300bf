#include "beesim/rate_network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace beesim {

namespace {
inline double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

inline double linear_rate(double input, const LinearTransfer& t) {
  return clamp01(t.gain * input + t.offset);
}

// Preferred direction of cell j: d_j = pi/2 - j*pi/2.
constexpr std::array<double, 4> kDirX = {0.0, 1.0, 0.0, -1.0};
constexpr std::array<double, 4> kDirY = {1.0, 0.0, -1.0, 0.0};
}  // namespace

RateNetworkParams RateNetworkParams::nominal() {
  RateNetworkParams p;
  p.cpu4.fill({1.0 / kAccumulatorMax, 0.0});
  // Logistic placed so the primitive genome's operating input sits in the
  // compressive (concave) part of the curve; with the midpoint at the
  // operating input the two hemisphere sums are equal by symmetry for every
  // heading and the steering output vanishes identically.
  p.cpu1.fill({15.0, -2.667});
  p.motor.fill({1.0, 0.0});
  return p;
}

RateNetworkState::RateNetworkState() {
  cpu4_state.fill(kAccumulatorBaseline);
}

double synaptic_input(std::span<const double> weights,
                      std::span<const double> rates) {
  if (weights.size() != rates.size())
    throw std::invalid_argument("synaptic_input: length mismatch");
  double sum = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) sum += weights[i] * rates[i];
  return sum;
}

double logistic_response(double input, const RateNeuronParams& params) {
  return 1.0 / (1.0 + std::exp(-(params.a * input - params.b)));
}

double cpu4_state_update(double i_prev, double c_tn, double c_tb1, double h,
                         double k) {
  return std::clamp(i_prev + h * (c_tn - c_tb1 - k), 0.0, kAccumulatorMax);
}

std::array<double, 8> cpu1_rates(const std::array<double, 8>& cpu4_rates,
                                 const std::array<double, 4>& tb1,
                                 const Genome& genome,
                                 const RateNetworkParams& params) {
  std::array<double, 8> out;
  for (int j = 0; j < 4; ++j) {
    const double in_l =
        Genome::normalized(genome.cpu4_to_cpu1_exc[j]) * cpu4_rates[j] -
        Genome::normalized(genome.cpu4_to_cpu1_inh[j]) *
            cpu4_rates[4 + (j + 2) % 4] -
        Genome::normalized(genome.tb1_to_cpu1[j]) * tb1[(j + 1) % 4];
    const double in_r =
        Genome::normalized(genome.cpu4_to_cpu1_exc[4 + j]) *
            cpu4_rates[4 + j] -
        Genome::normalized(genome.cpu4_to_cpu1_inh[4 + j]) *
            cpu4_rates[(j + 2) % 4] -
        Genome::normalized(genome.tb1_to_cpu1[4 + j]) * tb1[(j + 3) % 4];
    out[j] = logistic_response(in_l, params.cpu1[j]);
    out[4 + j] = logistic_response(in_r, params.cpu1[4 + j]);
  }
  return out;
}

std::pair<double, double> motor_rates(const std::array<double, 8>& cpu1,
                                      const Genome& genome,
                                      const RateNetworkParams& params) {
  const double mean_l = (cpu1[0] + cpu1[1] + cpu1[2] + cpu1[3]) / 4.0;
  const double mean_r = (cpu1[4] + cpu1[5] + cpu1[6] + cpu1[7]) / 4.0;
  const double ml = Genome::normalized(genome.cpu1_to_m[0]) * mean_l;
  const double mr = Genome::normalized(genome.cpu1_to_m[1]) * mean_r;
  return {linear_rate(ml, params.motor[0]), linear_rate(mr, params.motor[1])};
}

std::array<double, 2> decode_home_vector(
    const std::array<double, 8>& cpu4_state, double baseline) {
  double x = 0.0, y = 0.0;
  for (int j = 0; j < 4; ++j) {
    const double both = (cpu4_state[j] - baseline) + (cpu4_state[4 + j] - baseline);
    x += both * kDirX[j];
    y += both * kDirY[j];
  }
  return {x, y};
}

RateNetwork::RateNetwork(const Genome& genome, const RateNetworkParams& params,
                         double h, double k)
    : genome_(genome), params_(params), h_(h), k_(k) {}

void RateNetwork::update_cpu4(double c_tn_l, double c_tn_r,
                              const std::array<double, 4>& c_tb1) {
  for (int j = 0; j < 4; ++j) {
    // crossed flow assignment: left block integrates the right sensor
    state_.cpu4_state[j] =
        cpu4_state_update(state_.cpu4_state[j], c_tn_r, c_tb1[j], h_, k_);
    state_.cpu4_state[4 + j] =
        cpu4_state_update(state_.cpu4_state[4 + j], c_tn_l, c_tb1[j], h_, k_);
  }
}

void RateNetwork::refresh_rates(const std::array<double, 4>& tb1) {
  for (int i = 0; i < 8; ++i)
    state_.cpu4_rates[i] = linear_rate(state_.cpu4_state[i], params_.cpu4[i]);
  state_.cpu1_rates = cpu1_rates(state_.cpu4_rates, tb1, genome_, params_);
  std::tie(state_.motor_rates[0], state_.motor_rates[1]) =
      motor_rates(state_.cpu1_rates, genome_, params_);
}

std::pair<Trajectory, RateLog> run_rate_journey(const JourneyConfig& config,
                                                const Genome& genome,
                                                RngStream& rng) {
  return run_rate_journey(config, genome, rng, RateNetworkParams::nominal());
}

std::pair<Trajectory, RateLog> run_rate_journey(
    const JourneyConfig& config, const Genome& genome, RngStream& rng,
    const RateNetworkParams& params) {
  config.validate();
  const long n = config.n_updates();
  const long n_ret = config.n_return_updates();

  RateNetwork net(genome, params, config.h, config.k);
  AgentState agent;
  Trajectory traj;
  traj.seed = config.seed;
  traj.mode = SimMode::kRate;
  traj.fidelity = config.fidelity;
  traj.genome_hash = genome.hash();
  RateLog log;
  log.entries.reserve(static_cast<size_t>(n));
  PositionRecorder recorder(config.fidelity, config.schedule.max_records);

  // Counts of the window that just elapsed; the network and motor see the
  // world with one update of latency, like the hardware scheduler.
  bool have_prev = false;
  double prev_tn_l = 0.0, prev_tn_r = 0.0;
  std::array<double, 4> prev_tb1{};
  std::array<double, 2> prev_motor{};

  for (long w = 0; w < n; ++w) {
    // move the agent: random walk while t < t_return, else motor-driven
    if (w < n_ret) {
      agent = step_outbound(agent, rng, config.world);
    } else {
      agent = apply_motor(agent, prev_motor[0], prev_motor[1], config.world);
    }

    // integrate the previous window's counts into the CPU4 accumulators
    if (have_prev) {
      std::array<double, 4> c_tb1;
      for (int j = 0; j < 4; ++j)
        c_tb1[j] = kCountsPerUnitRate * prev_tb1[j];
      net.update_cpu4(kCountsPerUnitRate * prev_tn_l,
                      kCountsPerUnitRate * prev_tn_r, c_tb1);
    }

    // encode the new state and evaluate the network for the next boundary
    const SensorRates sensors = sense(agent, config.world);
    net.refresh_rates(sensors.tb1);
    prev_tn_l = sensors.tn_l;
    prev_tn_r = sensors.tn_r;
    prev_tb1 = sensors.tb1;
    prev_motor = net.state().motor_rates;
    have_prev = true;

    const double t_ms = static_cast<double>(w) * config.schedule.dt_update_ms;
    const Phase phase = phase_of_update(w, config);
    const bool record_this =
        config.fidelity == FidelityMode::kFullPrecision ||
        (w % config.schedule.record_stride) == 0;
    if (record_this)
      recorder.record(traj, {agent.step_index, t_ms, agent.x, agent.y,
                             agent.phi, phase});

    RateLogEntry entry;
    entry.step = w;
    entry.sensors = sensors;
    entry.cpu4_state = net.state().cpu4_state;
    entry.motor_rates = net.state().motor_rates;
    log.entries.push_back(entry);
  }
  return {std::move(traj), std::move(log)};
}

}  // namespace beesim
