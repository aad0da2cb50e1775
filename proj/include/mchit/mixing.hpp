#pragma once

#include <utility>
#include <vector>

#include "mchit/chain.hpp"
#include "mchit/record.hpp"

namespace mchit {

enum class MixingKind { Plain, Cesaro };

std::string_view to_string(MixingKind kind);

struct MixingProfile {
  double delta = 0.0;
  double time = 0.0;
  MixingKind kind = MixingKind::Plain;
  std::vector<std::pair<double, double>> curve;  // (t, distance) points evaluated by the search, sorted by t
};

/// max_x d_TV(p_t(x, .), pi).
double d_worst(const MarkovChain& chain, double t);

/// max_{x,z} d_TV(p_t(x, .), p_t(z, .)).
double d_bar(const MarkovChain& chain, double t);

/// Largest pairwise total-variation distance between rows of a kernel.
double max_pair_distance(const Kernel& kernel);
/// Largest row distance to a reference law.
double max_row_distance(const Kernel& kernel, const Distribution& reference);

/// (1/t) int_0^t p_s ds in continuous mode (t > 0); the average of
/// P^0, ..., P^{t-1} in discrete mode (integer t >= 1). Throws BadTime.
Kernel cesaro_kernel(const MarkovChain& chain, double t);

/// max_x d_TV(Cesaro row x, pi); t = 0 is taken as the identity kernel.
double cesaro_distance(const MarkovChain& chain, double t);

/// Smallest t with d_worst(t) <= delta. Continuous: doubling bracket then
/// bisection to the relative tolerance. Discrete: doubling then integer
/// bisection. Throws BadDelta, NotMixing.
MixingProfile mixing_time(const MarkovChain& chain, double delta);

/// A t with cesaro_distance(t) <= delta, located by doubling, a 64-point scan
/// of (0, hi] for the first passing point, then bisection inside that cell.
/// The uniform averaging measure on [0, t] witnesses T_rmix(delta) <= t.
MixingProfile cesaro_mixing_time(const MarkovChain& chain, double delta);

/// d_bar(s + t) <= d_bar(s) d_bar(t) for every grid pair.
std::vector<VerifyRecord> check_submultiplicativity(const MarkovChain& chain, const std::vector<double>& s_grid,
                                                    const std::vector<double>& t_grid);

}  // namespace mchit
