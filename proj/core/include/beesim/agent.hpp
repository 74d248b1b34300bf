#pragma once

#include <array>
#include <utility>

#include "beesim/rng.hpp"

namespace beesim {

// World and encoder constants. Rates everywhere are normalized to [0, 1] of
// the maximum rate (100 Hz biological); spike counts per 100 ms update window
// are 10x the normalized rate.
struct WorldParams {
  double rho = 2.0;              // flow-field rotation gain
  double phi_tn = 0.7853981633974483;  // sensor separation angle (pi/4)
  double mu = 1.6;               // steering gain, rad per unit rate difference
  double v_max = 70.0;           // step length at speed 1, unit steps/update
  double sigma_walk = 0.12;      // outbound heading-noise std, rad/update
  double outbound_speed = 1.0;   // normalized speed during the random walk

  void validate() const;  // throws std::invalid_argument on bad values
};

// Virtual insect state. Angles are wrapped to (-pi, pi]; in the closed loop
// the flight direction theta always equals the heading phi.
struct AgentState {
  double x = 0.0;
  double y = 0.0;
  double phi = 0.0;
  double phi_prev = 0.0;
  double theta = 0.0;
  double speed = 0.0;
  long step_index = 0;
};

struct SensorRates {
  std::array<double, 4> tb1{};
  double tn_l = 0.0;
  double tn_r = 0.0;
};

// Wraps an angle to (-pi, pi], with -pi mapping to +pi.
// Throws std::domain_error for non-finite input.
double wrap_angle(double theta);

// Compass encoder: r_j = (1 + sin(phi + j*pi/2)) / 2. Opposing cells are
// computed as exact complements so r0+r2 == 1 and r1+r3 == 1 bit-exactly.
std::array<double, 4> tb1_rates(double phi);

// Flow-field encoder used in the closed loop (theta == phi):
// r_{L/R} = v*sin(phi_tn) +/- rho*dphi, clamped to [0, 1].
std::pair<double, double> tn_rates(double v_mag, double dphi,
                                   const WorldParams& params);

// General holonomic form of the flow-field encoder, kept as a separate
// operation; the closed loop uses tn_rates above.
std::pair<double, double> tn_rates_holonomic(double v_mag, double theta,
                                             double phi, double dphi,
                                             const WorldParams& params);

// Sensor rates for the state's most recent update (phi, dphi = phi-phi_prev).
SensorRates sense(const AgentState& state, const WorldParams& params);

// One random-walk update: Gaussian heading increment, constant speed.
AgentState step_outbound(AgentState state, RngStream& rng,
                         const WorldParams& params);

// One motor-driven update: dphi = mu*(r_ml - r_mr), speed unchanged.
AgentState apply_motor(AgentState state, double r_ml, double r_mr,
                       const WorldParams& params);

// Advances the position by v_max*speed along theta and bumps step_index.
AgentState integrate_position(AgentState state, const WorldParams& params);

}  // namespace beesim
