#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "beesim/config.hpp"
#include "beesim/connectome.hpp"
#include "beesim/rate_network.hpp"
#include "beesim/spiking_sim.hpp"

namespace beesim {

// Per-neuron fixed-pattern mismatch, drawn once per (cv, seed):
// a multiplicative gain factor and an additive threshold shift.
struct NoiseDraw {
  double gain_mult = 1.0;
  double threshold_add = 0.0;
};

// Fitted per-neuron corrections plus fit bookkeeping.
struct NeuronCalibration {
  double gain_correction = 1.0;
  double offset_correction = 0.0;
  double fit_residual = 0.0;  // objective value at the fitted point
  bool calibrated = false;
};

struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Static data bank combining the mismatch draws and the calibration results.
// rate_params()/spiking_params() fold both into the effective parameter sets
// the simulators consume. The table is meant to be filled once (noise, then
// calibration) and treated as immutable afterwards.
struct CalibrationTable {
  std::array<NoiseDraw, kNumNeurons> noise{};
  std::array<NeuronCalibration, kNumNeurons> fit{};
  double noise_cv = 0.0;
  std::uint64_t noise_seed = 0;

  static CalibrationTable nominal() { return {}; }

  RateNetworkParams rate_params() const;
  SpikingParams spiking_params() const;
};

// Draws the per-neuron perturbations; cv = 0 leaves the table unchanged.
// Deterministic in (cv, seed).
CalibrationTable apply_fixed_pattern_noise(CalibrationTable table, double cv,
                                           std::uint64_t seed);

struct CurveSample {
  double input = 0.0;
  double rate = 0.0;    // normalized
  bool settled = true;  // false when the measurement window disagreed
};

// Measures the weight -> rate transfer of one CPU4 neuron on an isolated
// spiking rig (background source + supersynapse only), one settled window
// mean per sweep point. Sweep inputs are supersynapse totals.
std::vector<CurveSample> measure_transfer_curve(const JourneyConfig& config,
                                                const SpikingParams& params,
                                                int neuron_id,
                                                std::span<const double> sweep);

// Calibrates one CPU4 neuron so its rate tracks input/1008 over the central
// half of the range (minimax over the sweep grid, 4x weight near the
// operating point). Works on the oracle's analytic transfer in rate mode and
// on the isolated spiking rig in spiking mode. Throws CalibrationError with
// the residual when the fit cannot reach the acceptance band.
NeuronCalibration calibrate_cpu4(const JourneyConfig& config,
                                 const CalibrationTable& table, int neuron_id);

// Calibrates one CPU1 neuron against r_exc * (1 - r_inh) over a (r_exc,
// r_inh) grid, errors near the mid-rate operating band weighted 4x. Motor
// neurons, which have no inhibitory afferent, are fitted against the
// proportional r_inh = 0 slice.
NeuronCalibration calibrate_cpu1_motor(const JourneyConfig& config,
                                       const CalibrationTable& table,
                                       int neuron_id);

// Runs all per-neuron calibrations for the configured mode and returns the
// completed table. Neuron fits are independent (safe to parallelize; done
// sequentially here, the rigs are cheap).
CalibrationTable calibrate_all(const JourneyConfig& config,
                               CalibrationTable table);

// JSON serialization (schema-tagged document).
std::string calibration_to_json(const CalibrationTable& table);
CalibrationTable calibration_from_json(const std::string& text);

}  // namespace beesim
