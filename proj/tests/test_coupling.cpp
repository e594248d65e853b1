#include <cmath>

#include "doctest.h"
#include "opclim/coupling.hpp"

using namespace opclim;

TEST_CASE("temperature response") {
  const ResponseParams p;
  CHECK(temperature_response(1.2, p) == doctest::Approx(-0.093).epsilon(1e-9));
  CHECK(temperature_response(1e6, p) == doctest::Approx(0.592).epsilon(1e-12));

  ResponseParams worst = p;
  worst.r_max = 0.0;
  for (double t : {-1.0, 0.0, 1.2, 3.0, 50.0}) CHECK(temperature_response(t, worst) == -worst.m_cost);

  double prev = temperature_response(-2.0, p);
  for (double t = -1.9; t < 6.0; t += 0.1) {
    const double r = temperature_response(t, p);
    CHECK(r > prev);
    prev = r;
  }
  CHECK(ResponseParams::from(ModelParams{}).r_max == 1.37);
}

TEST_CASE("emission rate") {
  CHECK(emission_rate(1.0, 4.8339) == 0.0);
  CHECK(emission_rate(0.0, 4.8339) == doctest::Approx(2.417).epsilon(1e-3));
  CHECK(emission_rate(-1.0, 4.8339) == 4.8339);
}
