#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mchit/chain.hpp"
#include "mchit/config.hpp"
#include "mchit/state_set.hpp"

namespace mchit {

/// E_x[H_A] for every start state x (zero on A). One linear solve on the
/// complement block. Throws EmptyTargetSet, SolverFailure.
Eigen::VectorXd expected_hitting(const MarkovChain& chain, const StateSet& target);

/// P_x[H_A > t] for every start state x. Discrete chains use floor(t) steps.
Eigen::VectorXd hit_survival_from_each(const MarkovChain& chain, const StateSet& target, double t);

/// P_mu0[H_A > t].
double hit_survival(const MarkovChain& chain, const Distribution& mu0, const StateSet& target, double t);

/// Row x is the law of X_{H_S} started from x; rows of states in S are point masses.
Eigen::MatrixXd absorption_matrix(const MarkovChain& chain, const StateSet& target);

/// rho_S = P_mu0[X_{H_S} = .].
Distribution harmonic_measure(const MarkovChain& chain, const Distribution& mu0, const StateSet& target);

struct HittingReport {
  double value = 0.0;
  StateSet witness_set;
  std::size_t witness_state = 0;
  std::optional<double> alpha;  // empty for the pi(A)-weighted functional
  bool exact = true;
};

struct EnumerationOptions {
  std::size_t max_exact = kDefaultMaxExact;
  bool heuristic = false;
  unsigned workers = 0;
  bool use_symmetry = true;  // enumerate one set per exchangeable-state orbit
};

/// Classes of states that can be permuted freely without changing the chain:
/// x ~ y iff swapping x and y is an automorphism of the transition matrix.
std::vector<std::vector<std::size_t>> exchangeable_classes(const MarkovChain& chain);

/// Number of nonempty candidate sets after symmetry reduction,
/// prod_j (|class_j| + 1) - 1 (equal to 2^n - 1 without symmetry).
double candidate_set_count(const MarkovChain& chain);

/// Every nonempty subset up to exchangeable-state symmetry, with the worst
/// expected hitting time over start states. Sets in one symmetry orbit share
/// pi(A) and a permuted hitting vector, so maxima over the table are exact.
class HittingTable {
 public:
  struct Entry {
    StateSet set;
    double mass = 0.0;
    double worst = 0.0;          // max_x E_x[H_set]
    std::size_t worst_state = 0; // smallest x attaining it (within the tie width)
  };

  /// Throws TooLargeForExact when the candidate count exceeds 2^max_exact.
  static HittingTable build(const MarkovChain& chain, const EnumerationOptions& options = {});

  const std::vector<Entry>& entries() const noexcept { return entries_; }

  /// Same sets with masses measured by `measure` instead of pi. Only valid
  /// when `measure` is invariant under the exchangeable-state symmetry.
  HittingTable with_measure(const Distribution& measure) const;

  /// sup { E_x[H_A] : pi(A) >= alpha }. Throws BadAlpha unless alpha in (0, 1].
  HittingReport t_hit_alpha(double alpha) const;
  /// sup { pi(A) E_x[H_A] }.
  HittingReport t_hit_product() const;

 private:
  std::vector<Entry> entries_;
};

HittingReport t_hit_alpha(const MarkovChain& chain, double alpha, const EnumerationOptions& options = {});
HittingReport t_hit_product(const MarkovChain& chain, const EnumerationOptions& options = {});

/// Greedy set growth with swap refinement, restarted from every state.
/// Produces a lower bound on T_hit(alpha); the report has exact = false.
HittingReport t_hit_alpha_heuristic(const MarkovChain& chain, double alpha);

}  // namespace mchit
