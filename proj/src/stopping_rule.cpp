#include "mchit/stopping_rule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mchit/config.hpp"
#include "mchit/error.hpp"
#include "mchit/monte_carlo.hpp"

namespace mchit {
namespace {

// States with harmonic mass at or below this are not eligible for filling.
constexpr double kHarmonicFloor = 1e-13;

void check_rule(const MarkovChain& chain, const StoppingRule& rule) {
  if (rule.chain_fingerprint() != chain.fingerprint() || rule.size() != chain.size()) {
    throw Error(ErrorKind::ChainMismatch, "rule was built for a different chain");
  }
}

void check_laws(const MarkovChain& chain, const Distribution& mu0, const Distribution& target) {
  if (mu0.size() != chain.size() || target.size() != chain.size()) {
    throw Error(ErrorKind::LengthMismatch, "initial or target law does not match the chain size");
  }
}

}  // namespace

StateSet StoppingRule::set(std::size_t i) const {
  return StateSet(ordering_.size(), std::vector<std::size_t>(ordering_.begin() + static_cast<std::ptrdiff_t>(i),
                                                             ordering_.end()));
}

void StoppingRule::finish(const MarkovChain& chain) {
  fingerprint_ = chain.fingerprint();
  diagnostics_.probability_sum = 0.0;
  Eigen::VectorXd law = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size()));
  for (std::size_t i = 0; i < size(); ++i) {
    diagnostics_.probability_sum += probs_[i];
    law += probs_[i] * harmonics_[i].weights();
  }
  diagnostics_.law_error = tv_distance(law, target_.weights());

  // sum_{j<=k} p_j >= 1 - target(A_{k+1}), A_{n+1} empty.
  double partial = 0.0;
  double slack = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < size(); ++k) {
    partial += probs_[k];
    const double rest = k + 1 < size() ? target_.mass(set(k + 1)) : 0.0;
    slack = std::min(slack, partial - (1.0 - rest));
  }
  diagnostics_.min_partial_sum_slack = slack;
}

StoppingRule build_rule(const MarkovChain& chain, const Distribution& mu0) {
  return build_rule(chain, mu0, chain.stationary());
}

StoppingRule build_rule(const MarkovChain& chain, const Distribution& mu0, const Distribution& target) {
  check_laws(chain, mu0, target);
  const std::size_t n = chain.size();
  const double floor = -tolerances().rule_mass;

  StoppingRule rule(mu0, target);
  Eigen::VectorXd residual = target.weights();
  StateSet remaining = StateSet::all(n);

  for (std::size_t k = 0; k < n; ++k) {
    Distribution rho = harmonic_measure(chain, mu0, remaining);

    std::size_t pick = n;
    double p = std::numeric_limits<double>::infinity();
    for (std::size_t a : remaining.members()) {
      const double mass = rho[a];
      if (mass <= kHarmonicFloor) continue;
      const double ratio = std::max(residual(static_cast<Eigen::Index>(a)), 0.0) / mass;
      if (ratio < p) {
        p = ratio;
        pick = a;
      }
    }
    if (pick == n) {
      throw Error(ErrorKind::ConstructionFailure,
                  "no state of A_" + std::to_string(k + 1) + " carries harmonic mass");
    }
    if (p > 1.0 + tolerances().rule_mass) {
      throw Error(ErrorKind::ConstructionFailure,
                  "step " + std::to_string(k + 1) + " needs probability " + std::to_string(p));
    }
    p = std::min(p, 1.0);

    residual -= p * rho.weights();
    residual(static_cast<Eigen::Index>(pick)) = 0.0;
    const double low = residual.minCoeff();
    rule.diagnostics_.step_min_residual.push_back(low);
    if (low < floor) {
      throw Error(ErrorKind::ConstructionFailure, "residual " + std::to_string(low) + " after step " +
                                                      std::to_string(k + 1));
    }

    rule.ordering_.push_back(pick);
    rule.probs_.push_back(p);
    rule.harmonics_.push_back(std::move(rho));
    remaining = remaining.without(pick);
  }
  rule.finish(chain);
  return rule;
}

StoppingRule restore_rule(const MarkovChain& chain, const Distribution& mu0, const Distribution& target,
                          std::vector<std::size_t> ordering, std::vector<double> probs) {
  check_laws(chain, mu0, target);
  const std::size_t n = chain.size();
  if (ordering.size() != n || probs.size() != n) {
    throw Error(ErrorKind::ChainMismatch, "rule has " + std::to_string(ordering.size()) +
                                              " states, chain has " + std::to_string(n));
  }
  std::vector<bool> seen(n, false);
  for (std::size_t a : ordering) {
    if (a >= n || seen[a]) throw Error(ErrorKind::ChainMismatch, "rule ordering is not a permutation");
    seen[a] = true;
  }
  StoppingRule rule(mu0, target);
  rule.ordering_ = std::move(ordering);
  rule.probs_ = std::move(probs);
  for (std::size_t i = 0; i < n; ++i) rule.harmonics_.push_back(harmonic_measure(chain, mu0, rule.set(i)));
  rule.finish(chain);
  return rule;
}

Distribution rule_law(const MarkovChain& chain, const StoppingRule& rule) {
  check_rule(chain, rule);
  Eigen::VectorXd law = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(chain.size()));
  for (std::size_t i = 0; i < rule.size(); ++i) law += rule.probs()[i] * rule.harmonics()[i].weights();
  law /= law.sum();
  return Distribution(std::move(law));
}

double rule_mean(const MarkovChain& chain, const StoppingRule& rule) {
  check_rule(chain, rule);
  double mean = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    if (rule.probs()[i] == 0.0) continue;
    mean += rule.probs()[i] * rule.initial().weights().dot(expected_hitting(chain, rule.set(i)));
  }
  return mean;
}

double rule_tail(const MarkovChain& chain, const StoppingRule& rule, double t) {
  check_rule(chain, rule);
  if (t < 0.0) throw Error(ErrorKind::NegativeTime, "time " + std::to_string(t));
  double tail = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    if (rule.probs()[i] == 0.0) continue;
    tail += rule.probs()[i] * hit_survival(chain, rule.initial(), rule.set(i), t);
  }
  return std::clamp(tail, 0.0, 1.0);
}

std::vector<VerifyRecord> check_tail_bound(const MarkovChain& chain, const StoppingRule& rule,
                                           const std::vector<double>& eps_grid,
                                           const std::vector<double>& t_grid,
                                           const EnumerationOptions& options) {
  check_rule(chain, rule);
  for (double eps : eps_grid) {
    if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::BadAlpha, "epsilon " + std::to_string(eps));
  }
  for (double t : t_grid) {
    if (!(t > 0.0)) throw Error(ErrorKind::BadTime, "tail times must be positive");
  }
  // Orbit reduction assumes pi-invariant masses; other targets need every set.
  EnumerationOptions enumeration = options;
  if (tv_distance(rule.target(), chain.stationary()) > tolerances().rule_stationarity) {
    enumeration.use_symmetry = false;
  }
  const HittingTable table = HittingTable::build(chain, enumeration).with_measure(rule.target());
  const double t_hit = table.t_hit_product().value;

  std::vector<VerifyRecord> records;
  for (double t : t_grid) {
    const double tail = rule_tail(chain, rule, t);
    for (double eps : eps_grid) {
      const double t_hit_eps = table.t_hit_alpha(eps).value;
      records.push_back(make_record("eq1-tail", chain.name(), {{"eps", eps}, {"t", t}, {"t_hit_eps", t_hit_eps}},
                                    tail, eps + t_hit_eps / t,
                                    "stationary-time tail: P[T>t] <= eps + T_hit(eps)/t"));
    }
    records.push_back(make_record("remark-sqrt-tail", chain.name(), {{"t", t}, {"t_hit", t_hit}}, tail,
                                  std::sqrt(t_hit / t),
                                  "stationary-time tail optimized over eps: P[T>t] <= sqrt(T_hit/t)"));
  }
  return records;
}

VerifyRecord check_halting_state(const MarkovChain& chain, const StoppingRule& rule, std::uint64_t seed,
                                 std::size_t paths) {
  check_rule(chain, rule);
  const std::size_t halt = rule.halting_state();
  bool structural = true;
  for (std::size_t i = 0; i < rule.size(); ++i) structural = structural && rule.set(i).contains(halt);

  // Largest T - H_{a_n} over the sampled paths; must be <= 0.
  double excess = structural ? -std::numeric_limits<double>::infinity() : 1.0;
  for (std::size_t k = 0; k < paths; ++k) {
    const auto [stop, halting] = sample_stop_and_halting(chain, rule, derive_seed(seed, k));
    excess = std::max(excess, stop - halting);
  }
  if (paths == 0 && structural) excess = 0.0;
  return make_record("remark-halting", chain.name(),
                     {{"halting_state", static_cast<double>(halt)}, {"paths", static_cast<double>(paths)},
                      {"seed", static_cast<double>(seed)}},
                     excess, 0.0, "halting state: T <= first visit of a_n on every path");
}

}  // namespace mchit
