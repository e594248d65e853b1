#include "opclim/climate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "opclim/coupling.hpp"

namespace opclim {

double radiative_forcing(double carbon, const ModelParams& params) {
  if (!(carbon >= 0.0)) {
    throw std::domain_error("radiative_forcing: carbon stock must be >= 0, got " +
                            std::to_string(carbon));
  }
  return params.f2x / std::numbers::ln2 * std::log((params.c0 + carbon) / params.c0);
}

ClimateState step_temperature(const ClimateState& state, double forcing, const ModelParams& params) {
  ClimateState next = state;
  next.t_deep = state.t_deep + (params.q1 * forcing - state.t_deep) / params.d1;
  next.t_upper = state.t_upper + (params.q2 * forcing - state.t_upper) / params.d2;
  return next;
}

double step_carbon(double carbon, double mean_opinion, const ModelParams& params) {
  const double next = carbon + emission_rate(mean_opinion, params.e0) - params.delta * carbon;
  return std::max(next, 0.0);
}

double total_anomaly(const ClimateState& state) { return state.t_deep + state.t_upper; }

double carbon_for_equilibrium_anomaly(double anomaly, const ModelParams& params) {
  const double forcing = anomaly / (params.q1 + params.q2);
  return params.c0 * (std::exp2(forcing / params.f2x) - 1.0);
}

ClimateState initial_climate(const ModelParams& params) {
  ClimateState state;
  state.carbon = params.initial_carbon ? *params.initial_carbon
                                       : carbon_for_equilibrium_anomaly(params.t_ref, params);
  const double forcing = radiative_forcing(state.carbon, params);
  state.t_deep = params.q1 * forcing;
  state.t_upper = params.q2 * forcing;
  return state;
}

}  // namespace opclim
