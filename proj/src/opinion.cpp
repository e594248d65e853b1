#include "opclim/opinion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "opclim/parallel.hpp"

namespace opclim {

namespace {

// Floyd's sampling of k distinct slots from [0, m). `marks` must be all zero
// on entry and is restored to all zero on exit.
void floyd_sample(int m, int k, SplitMix64& rng, std::vector<unsigned char>& marks,
                  std::vector<int>& out) {
  out.clear();
  for (int j = m - k; j < m; ++j) {
    const int t = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(j) + 1));
    const int pick = marks[t] ? j : t;
    marks[pick] = 1;
    out.push_back(pick);
  }
  for (const int s : out) marks[s] = 0;
}

void check_neighbor_count(int n, int k) {
  if (k < 0 || k > n - 1) {
    throw std::invalid_argument("sample_neighbors: k=" + std::to_string(k) +
                                " exceeds n-1=" + std::to_string(n - 1));
  }
}

}  // namespace

double influence_weight(double o_i, double o_j, double a) {
  return std::exp(-std::abs(o_j - o_i) / a);
}

std::vector<double> normalized_weights(double self_opinion, std::span<const double> neighbor_opinions,
                                       double a) {
  std::vector<double> w;
  w.reserve(neighbor_opinions.size() + 1);
  w.push_back(1.0);
  for (const double o : neighbor_opinions) w.push_back(influence_weight(self_opinion, o, a));
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return w;
}

std::vector<int> sample_neighbors(int self_index, int n, int k, SplitMix64& rng) {
  check_neighbor_count(n, k);
  std::vector<unsigned char> marks(static_cast<std::size_t>(std::max(n - 1, 0)), 0);
  std::vector<int> slots;
  floyd_sample(n - 1, k, rng, marks, slots);
  for (int& s : slots) s = s < self_index ? s : s + 1;
  return slots;
}

double update_opinion(const AgentState& agent, std::span<const double> neighbor_opinions,
                      double response, const ModelParams& params, double noise) {
  double total = 1.0;
  double social = 0.0;
  for (const double o : neighbor_opinions) {
    const double w = influence_weight(agent.opinion, o, params.a_influence);
    total += w;
    social += w * o;
  }
  social /= total;
  const double self_term = agent.opinion / total;
  const double lambda = agent.susceptibility;
  const double drift =
      params.psi * (self_term + lambda * (social + response) + (1.0 - lambda) * agent.anchor);
  return std::clamp(drift + noise, -1.0, 1.0);
}

double draw_susceptibility(const LambdaMode& mode, SplitMix64& rng) {
  return mode.kind == LambdaMode::Kind::fixed ? mode.value : uniform_open01(rng);
}

std::vector<double> update_opinions(const Population& population, double response,
                                    const ModelParams& params, std::uint64_t run_seed, int year,
                                    int threads) {
  const int n = static_cast<int>(population.size());
  const int k = params.k_neighbors;
  check_neighbor_count(n, k);
  std::vector<double> current(population.size());
  std::ranges::transform(population, current.begin(), &AgentState::opinion);
  std::vector<double> next(population.size());

  parallel_for(population.size(), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<unsigned char> marks(static_cast<std::size_t>(n - 1), 0);
    std::vector<int> slots;
    std::vector<double> neighbor_opinions(static_cast<std::size_t>(k));
    for (std::size_t i = begin; i < end; ++i) {
      SplitMix64 rng(stream_seed(run_seed, StreamPurpose::update, static_cast<std::uint64_t>(year), i));
      floyd_sample(n - 1, k, rng, marks, slots);
      const int self = static_cast<int>(i);
      for (int j = 0; j < k; ++j) {
        const int s = slots[j];
        neighbor_opinions[j] = current[s < self ? s : s + 1];
      }
      const double noise =
          params.noise_sigma > 0 ? params.noise_sigma * standard_normal(rng) : 0.0;
      next[i] = update_opinion(population[i], neighbor_opinions, response, params, noise);
    }
  });
  return next;
}

std::size_t vital_dynamics(Population& population, const ModelParams& params, SplitMix64& rng) {
  if (params.death_rate <= 0.0 || population.empty()) return 0;
  std::vector<std::size_t> dead;
  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < population.size(); ++i) {
    (uniform01(rng) < params.death_rate ? dead : survivors).push_back(i);
  }
  if (survivors.empty()) return 0;
  // Only dead slots are written, so donors are always this year's survivors.
  for (const std::size_t i : dead) {
    const auto donor = population[survivors[uniform_below(rng, survivors.size())]];
    population[i].opinion = donor.opinion;
    population[i].anchor = donor.anchor;
    population[i].susceptibility = draw_susceptibility(params.lambda_mode, rng);
  }
  return dead.size();
}

Population init_population(const ScenarioConfig& config, SplitMix64& rng) {
  const auto n = static_cast<std::size_t>(config.params.n_agents);
  Population population(n);
  std::visit(
      [&](const auto& mode) {
        using T = std::decay_t<decltype(mode)>;
        for (std::size_t i = 0; i < n; ++i) {
          double o;
          if constexpr (std::is_same_v<T, TruncatedNormal>) {
            do {
              o = mode.mean + mode.std * standard_normal(rng);
            } while (o < -1.0 || o > 1.0);
          } else if constexpr (std::is_same_v<T, AllFixed>) {
            o = mode.value;
          } else {
            o = mode.values[i];
          }
          population[i].opinion = o;
          population[i].anchor = o;
        }
      },
      config.initial_opinion);
  for (auto& agent : population) {
    agent.susceptibility = draw_susceptibility(config.params.lambda_mode, rng);
  }
  return population;
}

double mean_opinion(const Population& population) {
  if (population.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& a : population) sum += a.opinion;
  return sum / static_cast<double>(population.size());
}

}  // namespace opclim
