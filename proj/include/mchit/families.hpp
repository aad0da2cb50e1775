#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mchit/chain.hpp"

namespace mchit {

/// Named chain generator. Sizes:
///   complete n >= 2 states; cycle n >= 3; biased-cycle n >= 3 (params cw, ccw);
///   two-cliques: two K_n joined by one edge, 2n states, n >= 2;
///   hypercube: dimension n >= 1, 2^n states (n <= 10);
///   birth-death: path of n >= 2 states (param up, default 0.6);
///   bipartite-plus-edge: K_{n,n} plus the edge (0, 1), n >= 2;
///   random: n >= 2 states from `seed`.
/// Continuous mode gives unit total exit rate walks (biased-cycle uses its
/// raw rates); discrete mode gives the corresponding transition matrices.
struct FamilySpec {
  std::string name;
  std::size_t n = 0;
  std::map<std::string, double> params;
  Mode mode = Mode::Continuous;
  std::uint64_t seed = 0;
};

const std::vector<std::string>& family_names();

/// Throws UnknownFamily, BadSize.
MarkovChain make_family(const FamilySpec& spec);

}  // namespace mchit
