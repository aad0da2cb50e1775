#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "mchit/chain.hpp"
#include "mchit/state_set.hpp"

namespace mchit {

class StoppingRule;

// Seeding scheme: sample i of a run with seed s draws from its own
// std::mt19937_64 seeded with derive_seed(s, i), a splitmix64 mix of both.
// Results are stored per index and reduced in index order, so output is
// identical for any worker count.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Random source for one trajectory.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double exponential(double rate);
  /// Index drawn with probability proportional to weights (nonnegative).
  std::size_t categorical(const Eigen::Ref<const Eigen::VectorXd>& weights);

 private:
  std::mt19937_64 engine_;
};

struct PathSample {
  std::uint64_t seed = 0;
  std::vector<double> times;        // jump times (continuous) or step indices (discrete); times[0] = 0
  std::vector<std::size_t> states;  // state entered at times[i]
  double horizon = 0.0;
};

/// Trajectory from x0 up to `horizon`. Only actual state changes are recorded.
/// Throws BadHorizon unless horizon > 0.
PathSample sample_path(const MarkovChain& chain, std::size_t x0, double horizon, std::uint64_t seed);

/// Fraction of [0, horizon] spent in `state`.
double occupation_fraction(const PathSample& path, std::size_t state);

struct StopSample {
  double time = 0.0;
  std::size_t state = 0;
};

/// Draws X_0 ~ mu0 and the rule index independently, then runs to H_{A_i}.
StopSample sample_rule_stop(const MarkovChain& chain, const StoppingRule& rule, std::uint64_t seed);

/// One trajectory under the rule, continued to the first visit of the
/// halting state: returns (T, H_{a_n}) from the same path.
std::pair<double, double> sample_stop_and_halting(const MarkovChain& chain, const StoppingRule& rule,
                                                  std::uint64_t seed);

/// First hitting time of `target` from x0 along one simulated path.
double sample_hitting_time(const MarkovChain& chain, std::size_t x0, const StateSet& target, Stream& stream);

struct RuleSimulation {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double mean_time = 0.0;
  double std_error = 0.0;
  std::vector<std::size_t> counts;  // stop-state counts
  std::vector<double> law;          // counts / samples
};

RuleSimulation simulate_rule(const MarkovChain& chain, const StoppingRule& rule, std::size_t samples,
                             std::uint64_t seed, unsigned workers = 0);

struct HittingSimulation {
  std::size_t samples = 0;
  double mean = 0.0;
  double std_error = 0.0;
};

HittingSimulation simulate_hitting(const MarkovChain& chain, std::size_t x0, const StateSet& target,
                                   std::size_t samples, std::uint64_t seed, unsigned workers = 0);

}  // namespace mchit
