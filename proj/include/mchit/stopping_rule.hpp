#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mchit/chain.hpp"
#include "mchit/hitting.hpp"
#include "mchit/record.hpp"
#include "mchit/state_set.hpp"

namespace mchit {

/// Randomized stationary stopping time T = H_A, where A = A_i with
/// probability p_i and A_i = E \ {a_1, ..., a_{i-1}} is a decreasing chain of
/// sets. The index is drawn independently of the trajectory.
class StoppingRule {
 public:
  struct Diagnostics {
    std::vector<double> step_min_residual;  // min_a r(a) after each induction step
    double probability_sum = 0.0;
    double law_error = 0.0;                 // tv(law of X_T, target)
    double min_partial_sum_slack = 0.0;     // min_k sum_{j<=k} p_j - (1 - target(A_{k+1}))
  };

  const Distribution& initial() const noexcept { return mu0_; }
  const Distribution& target() const noexcept { return target_; }
  const std::vector<std::size_t>& ordering() const noexcept { return ordering_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  const std::vector<Distribution>& harmonics() const noexcept { return harmonics_; }
  const Diagnostics& diagnostics() const noexcept { return diagnostics_; }
  std::uint64_t chain_fingerprint() const noexcept { return fingerprint_; }
  std::size_t size() const noexcept { return ordering_.size(); }

  /// A_i for 0-based i.
  StateSet set(std::size_t i) const;
  /// a_n: contained in every A_i, so T <= H_{a_n} on every path.
  std::size_t halting_state() const { return ordering_.back(); }

 private:
  friend StoppingRule build_rule(const MarkovChain&, const Distribution&, const Distribution&);
  friend StoppingRule restore_rule(const MarkovChain&, const Distribution&, const Distribution&,
                                   std::vector<std::size_t>, std::vector<double>);
  StoppingRule(Distribution mu0, Distribution target) : mu0_(std::move(mu0)), target_(std::move(target)) {}
  void finish(const MarkovChain& chain);

  Distribution mu0_;
  Distribution target_;
  std::vector<std::size_t> ordering_;
  std::vector<double> probs_;
  std::vector<Distribution> harmonics_;
  Diagnostics diagnostics_;
  std::uint64_t fingerprint_ = 0;
};

/// Inductive construction: keep the residual r = target - sum_i p_i rho_{A_i};
/// at each step take the state of A_{k+1} with the smallest r(a) / rho(a)
/// (smallest index on ties) and fill it exactly. Throws ConstructionFailure
/// if no state has positive harmonic mass or a residual drops below the floor.
StoppingRule build_rule(const MarkovChain& chain, const Distribution& mu0);
StoppingRule build_rule(const MarkovChain& chain, const Distribution& mu0, const Distribution& target);

/// Rebuilds a persisted rule (ordering and probabilities) against `chain`,
/// recomputing the harmonic measures.
StoppingRule restore_rule(const MarkovChain& chain, const Distribution& mu0, const Distribution& target,
                          std::vector<std::size_t> ordering, std::vector<double> probs);

/// Law of X_T = sum_i p_i rho_{A_i}. Throws ChainMismatch.
Distribution rule_law(const MarkovChain& chain, const StoppingRule& rule);
/// E[T] = sum_i p_i E_mu0[H_{A_i}].
double rule_mean(const MarkovChain& chain, const StoppingRule& rule);
/// P[T > t] = sum_i p_i P_mu0[H_{A_i} > t].
double rule_tail(const MarkovChain& chain, const StoppingRule& rule, double t);

/// Records P[T > t] <= eps + T_hit(eps)/t for every (eps, t) and
/// P[T > t] <= sqrt(T_hit / t) for every t. Set masses use the rule's target.
std::vector<VerifyRecord> check_tail_bound(const MarkovChain& chain, const StoppingRule& rule,
                                           const std::vector<double>& eps_grid,
                                           const std::vector<double>& t_grid,
                                           const EnumerationOptions& options = {});

/// a_n lies in every A_i, and on `paths` simulated trajectories the stopping
/// time never exceeds the first visit to a_n.
VerifyRecord check_halting_state(const MarkovChain& chain, const StoppingRule& rule, std::uint64_t seed,
                                 std::size_t paths);

}  // namespace mchit
