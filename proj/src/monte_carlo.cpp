#include "mchit/monte_carlo.hpp"

#include <algorithm>
#include <cmath>

#include "mchit/error.hpp"
#include "mchit/parallel.hpp"
#include "mchit/stopping_rule.hpp"

namespace mchit {
namespace {

using Index = Eigen::Index;

// Per-state cumulative jump weights and holding rates.
class Walker {
 public:
  explicit Walker(const MarkovChain& chain) : discrete_(chain.mode() == Mode::Discrete) {
    const Eigen::MatrixXd& m = chain.matrix();
    const auto n = static_cast<std::size_t>(m.rows());
    cumulative_.assign(n, std::vector<double>(n, 0.0));
    rate_.assign(n, 1.0);
    for (std::size_t x = 0; x < n; ++x) {
      double acc = 0.0;
      for (std::size_t y = 0; y < n; ++y) {
        double w = m(static_cast<Index>(x), static_cast<Index>(y));
        if (!discrete_ && x == y) w = 0.0;
        acc += std::max(w, 0.0);
        cumulative_[x][y] = acc;
      }
      if (!discrete_) rate_[x] = acc;
    }
  }

  // (holding time, next state)
  std::pair<double, std::size_t> step(std::size_t x, Stream& stream) const {
    const double dt = discrete_ ? 1.0 : stream.exponential(rate_[x]);
    const auto& cum = cumulative_[x];
    const double u = stream.uniform() * cum.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    if (it == cum.end()) --it;
    auto y = static_cast<std::size_t>(it - cum.begin());
    return {dt, y};
  }

 private:
  bool discrete_;
  std::vector<std::vector<double>> cumulative_;
  std::vector<double> rate_;
};

std::size_t draw_initial(const Distribution& mu0, Stream& stream) {
  return stream.categorical(mu0.weights());
}

std::size_t draw_index(const StoppingRule& rule, Stream& stream) {
  const std::vector<double>& p = rule.probs();
  Eigen::VectorXd w(static_cast<Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) w(static_cast<Index>(i)) = std::max(p[i], 0.0);
  return stream.categorical(w);
}

// position[a] = i such that ordering[i] = a; a lies in A_i iff position[a] >= i.
std::vector<std::size_t> positions(const StoppingRule& rule) {
  std::vector<std::size_t> pos(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) pos[rule.ordering()[i]] = i;
  return pos;
}

void check_rule(const MarkovChain& chain, const StoppingRule& rule) {
  if (rule.chain_fingerprint() != chain.fingerprint() || rule.size() != chain.size()) {
    throw Error(ErrorKind::ChainMismatch, "rule was built for a different chain");
  }
}

void mean_and_error(const std::vector<double>& xs, double& mean, double& se) {
  const auto n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  mean = sum / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  se = xs.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  auto splitmix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return splitmix(seed ^ splitmix(index));
}

double Stream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Stream::exponential(double rate) { return -std::log1p(-uniform()) / rate; }

std::size_t Stream::categorical(const Eigen::Ref<const Eigen::VectorXd>& weights) {
  const double u = uniform() * weights.sum();
  double acc = 0.0;
  Index last_positive = 0;
  for (Index i = 0; i < weights.size(); ++i) {
    if (weights(i) <= 0.0) continue;
    last_positive = i;
    acc += weights(i);
    if (u < acc) return static_cast<std::size_t>(i);
  }
  return static_cast<std::size_t>(last_positive);
}

PathSample sample_path(const MarkovChain& chain, std::size_t x0, double horizon, std::uint64_t seed) {
  if (!(horizon > 0.0)) throw Error(ErrorKind::BadHorizon, "horizon must be positive");
  if (x0 >= chain.size()) throw Error(ErrorKind::BadSize, "start state " + std::to_string(x0));
  const Walker walker(chain);
  Stream stream(seed);
  PathSample path;
  path.seed = seed;
  path.horizon = horizon;
  path.times.push_back(0.0);
  path.states.push_back(x0);
  double t = 0.0;
  std::size_t x = x0;
  for (;;) {
    const auto [dt, y] = walker.step(x, stream);
    if (t + dt > horizon) break;
    t += dt;
    if (y != x) {
      path.times.push_back(t);
      path.states.push_back(y);
    }
    x = y;
  }
  return path;
}

double occupation_fraction(const PathSample& path, std::size_t state) {
  double total = 0.0;
  for (std::size_t i = 0; i < path.states.size(); ++i) {
    const double end = i + 1 < path.times.size() ? path.times[i + 1] : path.horizon;
    if (path.states[i] == state) total += end - path.times[i];
  }
  return total / path.horizon;
}

double sample_hitting_time(const MarkovChain& chain, std::size_t x0, const StateSet& target, Stream& stream) {
  const Walker walker(chain);
  double t = 0.0;
  std::size_t x = x0;
  while (!target.contains(x)) {
    const auto [dt, y] = walker.step(x, stream);
    t += dt;
    x = y;
  }
  return t;
}

StopSample sample_rule_stop(const MarkovChain& chain, const StoppingRule& rule, std::uint64_t seed) {
  check_rule(chain, rule);
  const Walker walker(chain);
  const std::vector<std::size_t> pos = positions(rule);
  Stream stream(seed);
  std::size_t x = draw_initial(rule.initial(), stream);
  const std::size_t index = draw_index(rule, stream);
  double t = 0.0;
  while (pos[x] < index) {
    const auto [dt, y] = walker.step(x, stream);
    t += dt;
    x = y;
  }
  return {t, x};
}

std::pair<double, double> sample_stop_and_halting(const MarkovChain& chain, const StoppingRule& rule,
                                                  std::uint64_t seed) {
  check_rule(chain, rule);
  const Walker walker(chain);
  const std::vector<std::size_t> pos = positions(rule);
  const std::size_t halt = rule.halting_state();
  Stream stream(seed);
  std::size_t x = draw_initial(rule.initial(), stream);
  const std::size_t index = draw_index(rule, stream);
  double t = 0.0;
  double stop = pos[x] >= index ? 0.0 : -1.0;
  while (x != halt) {
    const auto [dt, y] = walker.step(x, stream);
    t += dt;
    x = y;
    if (stop < 0.0 && pos[x] >= index) stop = t;
  }
  return {stop, t};
}

RuleSimulation simulate_rule(const MarkovChain& chain, const StoppingRule& rule, std::size_t samples,
                             std::uint64_t seed, unsigned workers) {
  check_rule(chain, rule);
  if (samples == 0) throw Error(ErrorKind::BadSize, "need at least one sample");
  std::vector<StopSample> draws(samples);
  parallel_for(samples, workers, [&](std::size_t i) {
    draws[i] = sample_rule_stop(chain, rule, derive_seed(seed, i));
  });

  RuleSimulation sim;
  sim.samples = samples;
  sim.seed = seed;
  sim.counts.assign(chain.size(), 0);
  std::vector<double> times(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    times[i] = draws[i].time;
    ++sim.counts[draws[i].state];
  }
  mean_and_error(times, sim.mean_time, sim.std_error);
  sim.law.resize(chain.size());
  for (std::size_t a = 0; a < chain.size(); ++a) {
    sim.law[a] = static_cast<double>(sim.counts[a]) / static_cast<double>(samples);
  }
  return sim;
}

HittingSimulation simulate_hitting(const MarkovChain& chain, std::size_t x0, const StateSet& target,
                                   std::size_t samples, std::uint64_t seed, unsigned workers) {
  if (target.empty()) throw Error(ErrorKind::EmptyTargetSet, "target set is empty");
  if (samples == 0) throw Error(ErrorKind::BadSize, "need at least one sample");
  std::vector<double> times(samples);
  parallel_for(samples, workers, [&](std::size_t i) {
    Stream stream(derive_seed(seed, i));
    times[i] = sample_hitting_time(chain, x0, target, stream);
  });
  HittingSimulation sim;
  sim.samples = samples;
  mean_and_error(times, sim.mean, sim.std_error);
  return sim;
}

}  // namespace mchit
