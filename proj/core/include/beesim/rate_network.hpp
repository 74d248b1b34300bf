#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "beesim/agent.hpp"
#include "beesim/config.hpp"
#include "beesim/genome.hpp"
#include "beesim/trajectory.hpp"

namespace beesim {

// Network index conventions, shared with the spiking core:
//  - each population splits into a left block [0..3] and right block [4..7];
//  - cell j of a block is tuned to direction d_j = pi/2 - j*pi/2, the
//    direction where TB1 cell j peaks;
//  - CPU1 cell j (left) gets excitation from CPU4 left j, inhibition from
//    CPU4 right (j+2)%4 and from TB1 (j+1)%4; the right hemisphere mirrors
//    this with TB1 offset (j-1)%4;
//  - flow-field modulation is crossed: the left TN sensor drives the right
//    CPU4 block and vice versa. With ipsilateral wiring the closed loop has
//    an unstable rotation integrator (turning inflates one hemisphere's
//    accumulators, which commands more turning); the crossed assignment makes
//    the same loop self-damping and leaves the stored home vector untouched.

struct RateNeuronParams {
  double a = 1.0;  // logistic slope, must be > 0
  double b = 0.0;  // logistic offset
};

// Linear transfer for the integrator cells and the motor aggregation:
// rate = clamp(gain * input + offset, 0, 1).
struct LinearTransfer {
  double gain = 1.0;
  double offset = 0.0;
};

// Effective per-neuron transfer parameters for the oracle network. These are
// the values after any fixed-pattern perturbation and calibration correction
// have been folded in (see calibration.hpp).
struct RateNetworkParams {
  std::array<LinearTransfer, 8> cpu4;   // input is the accumulator, [0, 1008]
  std::array<RateNeuronParams, 8> cpu1;
  std::array<LinearTransfer, 2> motor;  // input is the weighted CPU1 mean

  static RateNetworkParams nominal();
};

struct RateNetworkState {
  std::array<double, 8> cpu4_state;  // accumulators, clamped to [0, 1008]
  std::array<double, 8> cpu4_rates{};
  std::array<double, 8> cpu1_rates{};
  std::array<double, 2> motor_rates{};

  RateNetworkState();
};

inline constexpr double kAccumulatorMax = 1008.0;
inline constexpr double kAccumulatorBaseline = 504.0;
inline constexpr double kCountsPerUnitRate = 10.0;  // counts per update window

// Eq.-style weighted sum of presynaptic rates. Throws std::invalid_argument
// on length mismatch.
double synaptic_input(std::span<const double> weights,
                      std::span<const double> rates);

// r = 1 / (1 + exp(-(a*I - b))); strictly increasing in I.
double logistic_response(double input, const RateNeuronParams& params);

// One integrator step: clamp(I_prev + h*(c_tn - c_tb1 - k), 0, 1008).
// Counts are spike counts per update window (10x normalized rate).
double cpu4_state_update(double i_prev, double c_tn, double c_tb1, double h,
                         double k);

std::array<double, 8> cpu1_rates(const std::array<double, 8>& cpu4_rates,
                                 const std::array<double, 4>& tb1,
                                 const Genome& genome,
                                 const RateNetworkParams& params);

std::pair<double, double> motor_rates(const std::array<double, 8>& cpu1,
                                      const Genome& genome,
                                      const RateNetworkParams& params);

// Home vector encoded by the accumulators relative to the given baseline;
// for analysis and tests, not used by the closed loop.
std::array<double, 2> decode_home_vector(
    const std::array<double, 8>& cpu4_state,
    double baseline = kAccumulatorBaseline);

// Full oracle network stepped once per agent update.
class RateNetwork {
 public:
  RateNetwork(const Genome& genome, const RateNetworkParams& params,
              double h, double k);

  // Integrates the counts of the elapsed window (crossed TN assignment).
  void update_cpu4(double c_tn_l, double c_tn_r,
                   const std::array<double, 4>& c_tb1);
  // Recomputes cpu4/cpu1/motor rates from the accumulators and compass input.
  void refresh_rates(const std::array<double, 4>& tb1);

  const RateNetworkState& state() const { return state_; }
  RateNetworkState& state() { return state_; }

 private:
  Genome genome_;
  RateNetworkParams params_;
  double h_, k_;
  RateNetworkState state_;
};

// Per-update record of the oracle run, for cross-checking the spiking core.
struct RateLogEntry {
  long step = 0;
  SensorRates sensors;
  std::array<double, 8> cpu4_state;
  std::array<double, 2> motor_rates;
};

struct RateLog {
  std::vector<RateLogEntry> entries;
};

// Runs a full journey in rate mode: outbound random walk while
// t < t_return, then motor-driven return/looping. Deterministic in (config,
// genome, rng state).
std::pair<Trajectory, RateLog> run_rate_journey(const JourneyConfig& config,
                                                const Genome& genome,
                                                RngStream& rng);
std::pair<Trajectory, RateLog> run_rate_journey(const JourneyConfig& config,
                                                const Genome& genome,
                                                RngStream& rng,
                                                const RateNetworkParams& params);

}  // namespace beesim
