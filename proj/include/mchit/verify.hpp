#pragma once

#include <cstdint>
#include <vector>

#include "mchit/chain.hpp"
#include "mchit/hitting.hpp"
#include "mchit/record.hpp"

namespace mchit {

// Explicit constants read off the proofs.
namespace constants {
/// Horizon factor of the non-reversible upper bound: t(alpha) = c(alpha) T_hit(alpha).
double general_horizon(double alpha);  // 64 / (1 - 2 alpha)^2
/// Pairwise Cesaro distance bound at t(alpha): 1 - delta(alpha) = (1 + 2 alpha) / 2.
double general_distance(double alpha);
/// L / T_hit(alpha) = 8 / (1 - 2 alpha).
double main_lower_factor(double alpha);
/// U / T_hit(alpha) = 8 / (1 - 2 alpha) + (8 / (1 - 2 alpha))^2.
double main_upper_factor(double alpha);
/// d_bar(U) bound: sqrt((1 + 2 alpha) / 2).
double main_distance(double alpha);
/// T_mix(1/4) <= k U with k the least integer making main_distance^k <= 1/4.
double main_upper_constant(double alpha);
/// T_rmix(1/4) <= k t(alpha) with k the least integer making general_distance^k <= 1/4.
double general_upper_constant(double alpha);
/// T_hit(alpha) <= c_low(alpha) T_rmix(1/4), c_low = (2 / alpha)(log2(1 / alpha) + 1).
double lower_constant(double alpha);
}  // namespace constants

struct VerifyOptions {
  EnumerationOptions enumeration;
  std::uint64_t seed = 42;
  std::size_t halting_paths = 2000;
};

/// Builds the stopping rule for mu0 and emits its tail-bound records.
std::vector<VerifyRecord> verify_lemma(const MarkovChain& chain, const Distribution& mu0,
                                       const std::vector<double>& eps_grid, const std::vector<double>& t_grid,
                                       const VerifyOptions& options = {});

/// Pairwise Cesaro distances at t(alpha) against (1 + 2 alpha)/2, plus the
/// intermediate bound 2 alpha + 4 sqrt(T_hit(alpha)/t) at t >= T_hit(alpha).
/// Continuous chains only. Throws BadAlpha, WrongMode, TooLargeForExact.
std::vector<VerifyRecord> verify_theorem_general(const MarkovChain& chain, double alpha,
                                                 const VerifyOptions& options = {});

/// d_bar(U) <= sqrt((1 + 2 alpha)/2) for reversible continuous chains.
/// Throws NotReversible, BadAlpha, WrongMode.
std::vector<VerifyRecord> verify_theorem_main(const MarkovChain& chain, double alpha,
                                              const VerifyOptions& options = {});

/// With t* the Cesaro mixing time at alpha/2: P_x[H_A >= t*] <= 1 - alpha/2 and
/// E_x[H_A] <= (2/alpha) t* for every x and every A with pi(A) >= alpha, and
/// T_hit(alpha) <= (2/alpha) t*. Throws BadAlpha, TooLargeForExact.
std::vector<VerifyRecord> verify_appendix(const MarkovChain& chain, double alpha,
                                          const VerifyOptions& options = {});

/// Two-cliques chains of sizes n_list: T_hit(alpha) and T_mix(1/4) records,
/// and for alpha > 1/2 the must-pass requirement that the ratio
/// T_mix(1/4) / T_hit(alpha) grows by at least `growth` per step. For
/// alpha < 1/2 every record is informational. Throws BadSizes.
std::vector<VerifyRecord> verify_counterexample(const std::vector<std::size_t>& n_list, double alpha = 0.6,
                                                double growth = 1.3, const VerifyOptions& options = {});

struct ConstantsRow {
  double alpha = 0.0;
  std::size_t chains = 0;
  double min_mix_ratio = 0.0;  // T_mix(1/4) / T_hit(alpha) over reversible chains
  double max_mix_ratio = 0.0;
  double min_cesaro_ratio = 0.0;  // T_ces(1/4) / T_hit(alpha) over all chains
  double max_cesaro_ratio = 0.0;
  double lower_constant = 0.0;
  double main_upper_constant = 0.0;
  double general_upper_constant = 0.0;
};

struct ConstantsReport {
  std::vector<ConstantsRow> rows;
  std::vector<VerifyRecord> records;
};

/// Observed ratios against [1/c_low(alpha), c_up(alpha)]. The plain mixing
/// column uses the reversible upper constant and is bounded above only on
/// reversible chains; the Cesaro column is used for all chains.
ConstantsReport empirical_constants(const std::vector<MarkovChain>& suite, const std::vector<double>& alpha_grid,
                                    const VerifyOptions& options = {});

/// Named continuous-time chains used by `mchit verify --suite default`.
std::vector<MarkovChain> default_suite();

/// Every check above over a suite, in canonical order.
std::vector<VerifyRecord> run_suite(const std::vector<MarkovChain>& suite, const std::vector<double>& alpha_grid,
                                    const VerifyOptions& options = {});

}  // namespace mchit
