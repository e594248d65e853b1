#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "opclim/params.hpp"
#include "opclim/rng.hpp"

namespace opclim {

struct AgentState {
  double opinion = 0.0;         // current stance in [-1, 1]
  double anchor = 0.0;          // initial stance, pulled toward with weight 1 - susceptibility
  double susceptibility = 0.0;  // lambda_i
};

using Population = std::vector<AgentState>;

// exp(-|o_j - o_i| / a). Symmetric, equals 1 at zero distance.
double influence_weight(double o_i, double o_j, double a);

// Weights over {self} U neighbors (self first, raw self weight 1) divided by
// their total, so they sum to one.
std::vector<double> normalized_weights(double self_opinion, std::span<const double> neighbor_opinions,
                                       double a);

// k distinct indices from {0..n-1} \ {self}, uniformly without replacement
// (Floyd's algorithm over n-1 slots). Consumes exactly k draws.
// Throws std::invalid_argument if k > n - 1.
std::vector<int> sample_neighbors(int self_index, int n, int k, SplitMix64& rng);

// One agent's opinion for next year:
//   clamp(psi * (w_self*o + lambda*(S + response) + (1-lambda)*anchor) + noise, -1, 1)
// with S the normalized-weight sum of neighbor opinions.
double update_opinion(const AgentState& agent, std::span<const double> neighbor_opinions,
                      double response, const ModelParams& params, double noise);

double draw_susceptibility(const LambdaMode& mode, SplitMix64& rng);

// Synchronous update of every agent from the year's opinion snapshot.
// Agent i draws from stream_seed(run_seed, update, year, i): k draws for its
// neighbors, then two for the noise when noise_sigma > 0. The result is
// therefore independent of `threads`.
std::vector<double> update_opinions(const Population& population, double response,
                                    const ModelParams& params, std::uint64_t run_seed, int year,
                                    int threads = 1);

// Each agent dies with probability death_rate (one draw per agent, in index
// order). Every dead agent is then replaced in place, in index order, by a
// newborn copying opinion and anchor from a uniformly chosen survivor (one
// draw) with a fresh susceptibility. Returns the number of deaths. If no
// agent survives, the population is left unchanged.
std::size_t vital_dynamics(Population& population, const ModelParams& params, SplitMix64& rng);

// Opinions from config.initial_opinion (truncated normal by rejection), the
// anchor equal to the initial opinion, susceptibility from lambda_mode.
// Opinions are drawn first for all agents, then susceptibilities.
Population init_population(const ScenarioConfig& config, SplitMix64& rng);

double mean_opinion(const Population& population);

}  // namespace opclim
