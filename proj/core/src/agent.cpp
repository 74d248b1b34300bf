#include "beesim/agent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace beesim {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }
}  // namespace

// (defaults live in the header; sigma_walk is tuned so the median outbound
// radius lands at the scale used for all relative homing statistics)

void WorldParams::validate() const {
  if (!(rho > 0.0)) throw std::invalid_argument("WorldParams: rho must be > 0");
  if (!(v_max > 0.0))
    throw std::invalid_argument("WorldParams: v_max must be > 0");
  if (!(sigma_walk >= 0.0))
    throw std::invalid_argument("WorldParams: sigma_walk must be >= 0");
  if (!(outbound_speed >= 0.0 && outbound_speed <= 1.0))
    throw std::invalid_argument("WorldParams: outbound_speed outside [0, 1]");
}

double wrap_angle(double theta) {
  if (!std::isfinite(theta))
    throw std::domain_error("wrap_angle: non-finite angle");
  double w = std::remainder(theta, kTwoPi);  // (-pi, pi], except -pi possible
  if (w == -kPi) w = kPi;
  return w;
}

std::array<double, 4> tb1_rates(double phi) {
  if (!std::isfinite(phi)) throw std::domain_error("tb1_rates: non-finite phi");
  const double r0 = 0.5 * (1.0 + std::sin(phi));
  const double r1 = 0.5 * (1.0 + std::sin(phi + 0.5 * kPi));
  // Opposing cells as exact complements (sin(x + pi) = -sin(x)).
  return {r0, r1, 1.0 - r0, 1.0 - r1};
}

std::pair<double, double> tn_rates(double v_mag, double dphi,
                                   const WorldParams& params) {
  const double base = v_mag * std::sin(params.phi_tn);
  return {clamp01(base + params.rho * dphi), clamp01(base - params.rho * dphi)};
}

std::pair<double, double> tn_rates_holonomic(double v_mag, double theta,
                                             double phi, double dphi,
                                             const WorldParams& params) {
  const double l = -v_mag * std::sin(theta - phi + params.phi_tn) +
                   params.rho * dphi;
  const double r = -v_mag * std::sin(theta - phi - params.phi_tn) -
                   params.rho * dphi;
  return {clamp01(l), clamp01(r)};
}

SensorRates sense(const AgentState& state, const WorldParams& params) {
  SensorRates rates;
  rates.tb1 = tb1_rates(state.phi);
  const double dphi = wrap_angle(state.phi - state.phi_prev);
  std::tie(rates.tn_l, rates.tn_r) = tn_rates(state.speed, dphi, params);
  return rates;
}

AgentState step_outbound(AgentState state, RngStream& rng,
                         const WorldParams& params) {
  const double delta =
      params.sigma_walk > 0.0 ? rng.gaussian(0.0, params.sigma_walk) : 0.0;
  state.phi_prev = state.phi;
  state.phi = wrap_angle(state.phi + delta);
  state.theta = state.phi;
  state.speed = params.outbound_speed;
  return integrate_position(state, params);
}

AgentState apply_motor(AgentState state, double r_ml, double r_mr,
                       const WorldParams& params) {
  const double dphi = params.mu * (r_ml - r_mr);
  state.phi_prev = state.phi;
  state.phi = wrap_angle(state.phi + dphi);
  state.theta = state.phi;  // speed stays constant
  return integrate_position(state, params);
}

AgentState integrate_position(AgentState state, const WorldParams& params) {
  const double step = params.v_max * state.speed;
  state.x += step * std::cos(state.theta);
  state.y += step * std::sin(state.theta);
  state.step_index += 1;
  return state;
}

}  // namespace beesim
