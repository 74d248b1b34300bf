#pragma once

namespace beesim {

// Current-based LIF with exponential synaptic kernels, integrated with the
// exponential-Euler scheme. Voltages are in units of the threshold gap
// (v_l = v_reset = 0, v_th = 1 nominally); time is biological ms.
struct LifParams {
  double c_m = 1.0;
  double g_l = 0.1;        // tau_m = c_m / g_l = 10 ms
  double v_l = 0.0;
  double v_th = 1.0;
  double v_reset = 0.0;
  double tau_syn_ms = 5.0;
  double t_ref_ms = 1.0;
  double i_bias = 0.0;     // constant drive, the leak-bias knob of calibration

  void validate() const;  // v_reset < v_th, positive constants
};

struct NeuronState {
  double v_m = 0.0;
  double i_syn_exc = 0.0;
  double i_syn_inh = 0.0;
  int spike_count = 0;          // incremented on spikes, reset by the reader
  double refractory_until_ms = -1.0;
};

// Integrator coefficients precomputed for a fixed dt.
struct LifIntegrator {
  double decay_m;    // exp(-dt/tau_m)
  double decay_syn;  // exp(-dt/tau_syn)
  double r_m;        // 1/g_l

  LifIntegrator(const LifParams& params, double dt_ms);
};

// Adds a synaptic current jump for one delivered spike; `weight` is the
// (integer) synaptic weight, `gain` the charge per weight unit. Inhibitory
// spikes accumulate on the separate inhibitory kernel.
void deliver_spike(NeuronState& state, double weight, bool excitatory,
                   double gain);

// Advances one dt step. Returns true if the neuron spiked in this step.
bool lif_step(NeuronState& state, const LifParams& params,
              const LifIntegrator& integ, double dt_ms, double now_ms);

}  // namespace beesim
