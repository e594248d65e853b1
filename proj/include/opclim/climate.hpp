#pragma once

#include "opclim/params.hpp"

namespace opclim {

// Two-box energy balance state. Temperatures are anomalies in degC; carbon
// is the atmospheric stock above pre-industrial in GtCO2.
struct ClimateState {
  double t_deep = 0.0;
  double t_upper = 0.0;
  double carbon = 0.0;

  bool operator==(const ClimateState&) const = default;
};

// (f2x / ln 2) * ln((c0 + C) / c0). Throws std::domain_error for C < 0.
double radiative_forcing(double carbon, const ModelParams& params);

// One explicit yearly step of each box toward q_j * F with timescale d_j.
// Carbon is carried through unchanged.
ClimateState step_temperature(const ClimateState& state, double forcing, const ModelParams& params);

// C + emission_rate(mean_opinion) - delta * C, floored at zero.
double step_carbon(double carbon, double mean_opinion, const ModelParams& params);

double total_anomaly(const ClimateState& state);

// Carbon stock whose equilibrium anomaly (q1 + q2) * F equals `anomaly`:
// c0 * (2^(anomaly / ((q1 + q2) f2x)) - 1).
double carbon_for_equilibrium_anomaly(double anomaly, const ModelParams& params);

// Start-of-run state: carbon from params.initial_carbon, or else the stock in
// equilibrium with t_ref; both boxes at their equilibrium q_j * F(C).
ClimateState initial_climate(const ModelParams& params);

}  // namespace opclim
