#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "lrw/chain.hpp"

namespace lrw {

struct SimConfig {
  Graph graph = build_cycle(3);
  std::vector<AgentClass> classes{{1, Role::generic}};
  LazinessPolicy policy{Laziness::constant(0.0)};
  Goal goal = Goal::distancing(1);
  StartSpec start = StartSpec::uniform();
  long trials = 5000;
  long max_steps = 1'000'000;
  std::uint64_t seed = 0;
  unsigned threads = 0;  ///< 0 = hardware concurrency
};

struct SimResult {
  double mean = 0.0;       ///< over uncensored trials
  double std_error = 0.0;
  long trials = 0;
  long censored = 0;       ///< trials that hit max_steps before absorbing
  std::map<long, long> histogram;
  std::string warning;     ///< non-empty when censored > 0
};

/// Seed of trial `index` under master seed `seed`.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index);

/// Independent trials of the walk until the goal holds at a period end. The result
/// depends only on the config (including seed), not on the thread count.
SimResult simulate(const SimConfig& config);

struct SweepRow {
  double p;
  SimResult result;
};

/// One simulate run per p with every class at constant laziness p. Row k uses
/// master seed seed + k * golden-gamma, so a single-row sweep equals simulate.
std::vector<SweepRow> sweep_p(const SimConfig& config, const std::vector<double>& p_values);

/// Header "p,mean,stderr,trials,censored", numbers at full precision.
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace lrw
