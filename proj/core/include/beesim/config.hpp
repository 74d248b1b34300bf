#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "beesim/agent.hpp"

namespace beesim {

enum class SimMode { kRate, kSpiking };
enum class FidelityMode { kFullPrecision, kHardware16Bit };

std::string to_string(SimMode mode);
std::string to_string(FidelityMode mode);

// Spiking-scheduler timing. All times are biological-equivalent; the 1000x
// hardware acceleration is reporting metadata only.
struct ScheduleConfig {
  double dt_update_ms = 100.0;    // agent update interval
  double dt_spike_slot_ms = 10.0; // minimum source inter-spike interval
  double dt_neuron_ms = 0.1;      // LIF integration step
  int record_stride = 2;          // fidelity mode records every 2nd cycle
  int max_records = 1000;         // on-chip trajectory memory

  int slots_per_update() const;
  int neuron_steps_per_slot() const;
  void validate() const;  // spike slot must divide update, neuron step the slot
};

// Seeded fixed-pattern mismatch, emulating analog manufacturing variation.
struct NoiseConfig {
  double cv = 0.0;          // relative std of per-neuron gain perturbations
  std::uint64_t seed = 42;
};

struct EsConfig {
  int population = 15;
  int generations = 320;
  double sigma = 0.3;          // fixed sampling step size
  int runs_per_eval = 3;       // journeys averaged into one fitness value
  int snapshot_every = 25;     // genome JSON dump interval, 0 = only final
};

// Everything needed to run one journey (and, with EsConfig, an evolution).
struct JourneyConfig {
  double t_stop_s = 200.0;
  double t_return_s = 50.0;
  double h = 0.0336;  // CPU4 update scaling
  double k = 2.0;     // CPU4 decay constant
  SimMode mode = SimMode::kRate;
  FidelityMode fidelity = FidelityMode::kFullPrecision;
  std::uint64_t seed = 1;
  NoiseConfig noise;
  WorldParams world;
  ScheduleConfig schedule;
  EsConfig es;

  long n_updates() const;        // t_stop / dt_update
  long n_return_updates() const; // t_return / dt_update
  void validate() const;

  // Nested-section key = value text format. Parsing rejects unknown sections
  // and keys. load_config throws std::runtime_error with a line diagnostic.
  static JourneyConfig load(std::istream& in);
  static JourneyConfig load_file(const std::string& path);
  void save(std::ostream& out) const;
};

}  // namespace beesim
