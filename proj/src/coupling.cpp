#include "opclim/coupling.hpp"

#include <cmath>

namespace opclim {

double temperature_response(double anomaly, const ResponseParams& p) {
  const double x = -p.alpha * (anomaly - p.t_ref) / p.t_ref;
  return -p.m_cost + p.r_max / (1.0 + std::exp(x));
}

double emission_rate(double mean_opinion, double e0) { return 0.5 * e0 * (1.0 - mean_opinion); }

}  // namespace opclim
