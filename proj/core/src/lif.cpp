#include "beesim/lif.hpp"

#include <cmath>
#include <stdexcept>

namespace beesim {

void LifParams::validate() const {
  if (!(c_m > 0 && g_l > 0 && tau_syn_ms > 0))
    throw std::invalid_argument("LifParams: c_m, g_l, tau_syn must be > 0");
  if (!(v_reset < v_th))
    throw std::invalid_argument("LifParams: need v_reset < v_th");
  if (!(t_ref_ms >= 0))
    throw std::invalid_argument("LifParams: t_ref must be >= 0");
}

LifIntegrator::LifIntegrator(const LifParams& params, double dt_ms)
    : decay_m(std::exp(-dt_ms * params.g_l / params.c_m)),
      decay_syn(std::exp(-dt_ms / params.tau_syn_ms)),
      r_m(1.0 / params.g_l) {}

void deliver_spike(NeuronState& state, double weight, bool excitatory,
                   double gain) {
  if (excitatory)
    state.i_syn_exc += gain * weight;
  else
    state.i_syn_inh += gain * weight;
}

bool lif_step(NeuronState& state, const LifParams& params,
              const LifIntegrator& integ, double dt_ms, double now_ms) {
  // synaptic currents held piecewise-constant over dt, then decayed
  const double i_net = state.i_syn_exc - state.i_syn_inh + params.i_bias;
  state.i_syn_exc *= integ.decay_syn;
  state.i_syn_inh *= integ.decay_syn;

  if (now_ms < state.refractory_until_ms) {
    state.v_m = params.v_reset;
    return false;
  }

  const double v_inf = params.v_l + integ.r_m * i_net;
  state.v_m = v_inf + (state.v_m - v_inf) * integ.decay_m;

  if (state.v_m >= params.v_th) {
    state.v_m = params.v_reset;
    state.spike_count += 1;
    state.refractory_until_ms = now_ms + dt_ms + params.t_ref_ms;
    return true;
  }
  return false;
}

}  // namespace beesim
