#pragma once

#include "opclim/params.hpp"

namespace opclim {

struct ResponseParams {
  double m_cost = 0.778;
  double r_max = 1.37;
  double alpha = 5.7;
  double t_ref = 1.2;

  static ResponseParams from(const ModelParams& p) { return {p.m_cost, p.r_max, p.alpha, p.t_ref}; }
};

// Opinion response to warming: -m_cost + r_max / (1 + exp(-alpha (T - T_ref) / T_ref)).
// Ranges over (-m_cost, r_max - m_cost).
double temperature_response(double anomaly, const ResponseParams& p);

// Model emissions in GtCO2/yr: 0.5 * e0 * (1 - mean_opinion).
double emission_rate(double mean_opinion, double e0);

}  // namespace opclim
