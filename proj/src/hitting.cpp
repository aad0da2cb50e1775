#include "mchit/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mchit/error.hpp"
#include "mchit/parallel.hpp"
#include "mchit/uniformization.hpp"

namespace mchit {
namespace {

using Index = Eigen::Index;

void require_target(const MarkovChain& chain, const StateSet& target) {
  if (target.empty()) throw Error(ErrorKind::EmptyTargetSet, "target set is empty");
  if (target.universe() != chain.size()) {
    throw Error(ErrorKind::LengthMismatch, "target set over " + std::to_string(target.universe()) +
                                               " states, chain has " + std::to_string(chain.size()));
  }
}

Eigen::MatrixXd block(const Eigen::MatrixXd& m, const std::vector<std::size_t>& rows,
                      const std::vector<std::size_t>& cols) {
  Eigen::MatrixXd out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out(static_cast<Index>(i), static_cast<Index>(j)) =
          m(static_cast<Index>(rows[i]), static_cast<Index>(cols[j]));
    }
  }
  return out;
}

// Solves (I - M_BB) X = rhs and checks the residual.
Eigen::MatrixXd solve_complement(const Eigen::MatrixXd& step_bb, const Eigen::MatrixXd& rhs) {
  const Index b = step_bb.rows();
  const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(b, b) - step_bb;
  Eigen::MatrixXd x = system.partialPivLu().solve(rhs);
  if (!x.allFinite()) throw Error(ErrorKind::SolverFailure, "complement solve produced non-finite values");
  const double scale = 1.0 + x.cwiseAbs().maxCoeff();
  const double residual = (system * x - rhs).cwiseAbs().maxCoeff();
  if (residual > 1e-9 * scale) {
    throw Error(ErrorKind::SolverFailure, "complement solve residual " + std::to_string(residual));
  }
  return x;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::BadAlpha, "alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
}

bool within_tie(double a, double b) {
  return std::abs(a - b) <= tolerances().tie * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// Largest entry, smallest index among entries within the tie width of it.
std::pair<double, std::size_t> worst_entry(const Eigen::VectorXd& h) {
  const double top = h.maxCoeff();
  for (Index x = 0; x < h.size(); ++x) {
    if (within_tie(h(x), top)) return {h(x), static_cast<std::size_t>(x)};
  }
  return {top, 0};
}

struct Candidate {
  double value;
  const StateSet* set;
  std::size_t state;
};

// Larger value wins; values within the tie width go to the smaller set, then
// the smaller state.
bool better(const Candidate& c, const Candidate& best) {
  if (!within_tie(c.value, best.value)) return c.value > best.value;
  if (*c.set != *best.set) return *c.set < *best.set;
  return c.state < best.state;
}

}  // namespace

Eigen::VectorXd expected_hitting(const MarkovChain& chain, const StateSet& target) {
  require_target(chain, target);
  const std::vector<std::size_t> rest = target.complement();
  Eigen::VectorXd h = Eigen::VectorXd::Zero(static_cast<Index>(chain.size()));
  if (rest.empty()) return h;

  // Continuous: -Q_BB h = 1, i.e. (I - M_BB) h = 1/lambda. Discrete: (I - P_BB) h = 1.
  const Eigen::MatrixXd step_bb = block(chain.step_matrix(), rest, rest);
  const Eigen::VectorXd ones =
      Eigen::VectorXd::Constant(static_cast<Index>(rest.size()), 1.0 / chain.uniformization_rate());
  const Eigen::VectorXd hb = solve_complement(step_bb, ones);
  if (hb.minCoeff() < -1e-9 * (1.0 + hb.cwiseAbs().maxCoeff())) {
    throw Error(ErrorKind::SolverFailure, "negative expected hitting time");
  }
  for (std::size_t i = 0; i < rest.size(); ++i) {
    h(static_cast<Index>(rest[i])) = std::max(hb(static_cast<Index>(i)), 0.0);
  }
  return h;
}

Eigen::VectorXd hit_survival_from_each(const MarkovChain& chain, const StateSet& target, double t) {
  require_target(chain, target);
  if (t < 0.0) throw Error(ErrorKind::NegativeTime, "time " + std::to_string(t));
  const std::vector<std::size_t> rest = target.complement();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Index>(chain.size()));
  if (rest.empty()) return out;

  const Eigen::MatrixXd step_bb = block(chain.step_matrix(), rest, rest);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Index>(rest.size()));
  Eigen::VectorXd survive;
  if (chain.mode() == Mode::Continuous) {
    survive = uniformization::exp_apply(step_bb, chain.uniformization_rate() * t, ones,
                                        tolerances().poisson_tail);
  } else {
    const auto steps = static_cast<std::uint64_t>(std::floor(t));
    survive = uniformization::matrix_power(step_bb, steps) * ones;
  }
  for (std::size_t i = 0; i < rest.size(); ++i) {
    out(static_cast<Index>(rest[i])) = std::clamp(survive(static_cast<Index>(i)), 0.0, 1.0);
  }
  return out;
}

double hit_survival(const MarkovChain& chain, const Distribution& mu0, const StateSet& target, double t) {
  if (mu0.size() != chain.size()) throw Error(ErrorKind::LengthMismatch, "initial law length");
  return std::clamp(mu0.weights().dot(hit_survival_from_each(chain, target, t)), 0.0, 1.0);
}

Eigen::MatrixXd absorption_matrix(const MarkovChain& chain, const StateSet& target) {
  require_target(chain, target);
  const auto n = static_cast<Index>(chain.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t a : target.members()) out(static_cast<Index>(a), static_cast<Index>(a)) = 1.0;
  const std::vector<std::size_t> rest = target.complement();
  if (rest.empty()) return out;

  const std::vector<std::size_t>& members = target.members();
  const Eigen::MatrixXd absorbed = solve_complement(block(chain.step_matrix(), rest, rest),
                                                    block(chain.step_matrix(), rest, members));
  for (std::size_t i = 0; i < rest.size(); ++i) {
    const auto row = static_cast<Index>(i);
    const double total = absorbed.row(row).sum();
    if (std::abs(total - 1.0) > tolerances().mass_sum) {
      throw Error(ErrorKind::SolverFailure, "absorption probabilities from state " +
                                                std::to_string(rest[i]) + " sum to " + std::to_string(total));
    }
    for (std::size_t j = 0; j < members.size(); ++j) {
      out(static_cast<Index>(rest[i]), static_cast<Index>(members[j])) =
          std::max(absorbed(row, static_cast<Index>(j)), 0.0);
    }
  }
  return out;
}

Distribution harmonic_measure(const MarkovChain& chain, const Distribution& mu0, const StateSet& target) {
  if (mu0.size() != chain.size()) throw Error(ErrorKind::LengthMismatch, "initial law length");
  Eigen::VectorXd rho = absorption_matrix(chain, target).transpose() * mu0.weights();
  rho /= rho.sum();
  return Distribution(std::move(rho));
}

std::vector<std::vector<std::size_t>> exchangeable_classes(const MarkovChain& chain) {
  const Eigen::MatrixXd& m = chain.matrix();
  const auto n = static_cast<std::size_t>(m.rows());
  const double tol = 1e-13 * std::max(1.0, m.cwiseAbs().maxCoeff());

  // Swapping i and j is an automorphism iff rows/columns i and j match under the swap.
  auto swappable = [&](std::size_t i, std::size_t j) {
    auto swap_index = [&](std::size_t x) { return x == i ? j : (x == j ? i : x); };
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        const double lhs = m(static_cast<Index>(swap_index(x)), static_cast<Index>(swap_index(y)));
        if (std::abs(lhs - m(static_cast<Index>(x), static_cast<Index>(y))) > tol) return false;
      }
    }
    return true;
  };

  // The relation is an equivalence (a product of automorphisms is one), so
  // comparing each state against class representatives suffices.
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t x = 0; x < n; ++x) {
    bool placed = false;
    for (auto& cls : classes) {
      if (swappable(cls.front(), x)) {
        cls.push_back(x);
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({x});
  }
  return classes;
}

double candidate_set_count(const MarkovChain& chain) {
  double count = 1.0;
  for (const auto& cls : exchangeable_classes(chain)) count *= static_cast<double>(cls.size() + 1);
  return count - 1.0;
}

HittingTable HittingTable::build(const MarkovChain& chain, const EnumerationOptions& options) {
  std::vector<std::vector<std::size_t>> classes;
  if (options.use_symmetry) {
    classes = exchangeable_classes(chain);
  } else {
    for (std::size_t x = 0; x < chain.size(); ++x) classes.push_back({x});
  }
  double count = 1.0;
  for (const auto& cls : classes) count *= static_cast<double>(cls.size() + 1);
  count -= 1.0;
  const double cap = std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(options.max_exact, 62)));
  if (count > cap) {
    throw Error(ErrorKind::TooLargeForExact,
                std::to_string(static_cast<long long>(count)) + " candidate sets on " +
                    std::to_string(chain.size()) + " states exceed the exact-enumeration cap of 2^" +
                    std::to_string(options.max_exact) + "; pass --heuristic or raise --max-exact");
  }

  // Mixed-radix enumeration of per-class counts; a representative set takes
  // the first c_j members of class j.
  std::vector<std::vector<std::size_t>> sets;
  sets.reserve(static_cast<std::size_t>(count));
  std::vector<std::size_t> digits(classes.size(), 0);
  for (;;) {
    std::size_t pos = 0;
    while (pos < digits.size() && digits[pos] == classes[pos].size()) {
      digits[pos] = 0;
      ++pos;
    }
    if (pos == digits.size()) break;
    ++digits[pos];
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < classes.size(); ++j) {
      members.insert(members.end(), classes[j].begin(),
                     classes[j].begin() + static_cast<std::ptrdiff_t>(digits[j]));
    }
    sets.push_back(std::move(members));
  }

  HittingTable table;
  table.entries_.resize(sets.size());
  const Distribution& pi = chain.stationary();
  parallel_for(sets.size(), options.workers, [&](std::size_t i) {
    Entry& e = table.entries_[i];
    e.set = StateSet(chain.size(), std::move(sets[i]));
    e.mass = pi.mass(e.set);
    const auto [worst, state] = worst_entry(expected_hitting(chain, e.set));
    e.worst = worst;
    e.worst_state = state;
  });
  return table;
}

HittingTable HittingTable::with_measure(const Distribution& measure) const {
  HittingTable out = *this;
  for (Entry& e : out.entries_) e.mass = measure.mass(e.set);
  return out;
}

HittingReport HittingTable::t_hit_alpha(double alpha) const {
  check_alpha(alpha);
  const double floor = alpha - tolerances().set_mass;
  const Entry* best = nullptr;
  for (const Entry& e : entries_) {
    if (e.mass < floor) continue;
    if (!best || better({e.worst, &e.set, e.worst_state}, {best->worst, &best->set, best->worst_state})) {
      best = &e;
    }
  }
  if (!best) throw Error(ErrorKind::BadAlpha, "no admissible set");
  return {best->worst, best->set, best->worst_state, alpha, true};
}

HittingReport HittingTable::t_hit_product() const {
  const Entry* best = nullptr;
  for (const Entry& e : entries_) {
    if (!best || better({e.mass * e.worst, &e.set, e.worst_state},
                        {best->mass * best->worst, &best->set, best->worst_state})) {
      best = &e;
    }
  }
  return {best->mass * best->worst, best->set, best->worst_state, std::nullopt, true};
}

HittingReport t_hit_alpha(const MarkovChain& chain, double alpha, const EnumerationOptions& options) {
  check_alpha(alpha);
  const double cap = std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(options.max_exact, 62)));
  if (options.heuristic && candidate_set_count(chain) > cap) return t_hit_alpha_heuristic(chain, alpha);
  return HittingTable::build(chain, options).t_hit_alpha(alpha);
}

HittingReport t_hit_product(const MarkovChain& chain, const EnumerationOptions& options) {
  return HittingTable::build(chain, options).t_hit_product();
}

HittingReport t_hit_alpha_heuristic(const MarkovChain& chain, double alpha) {
  check_alpha(alpha);
  const std::size_t n = chain.size();
  const Distribution& pi = chain.stationary();
  const double floor = alpha - tolerances().set_mass;

  auto score = [&](const StateSet& s) { return worst_entry(expected_hitting(chain, s)); };

  std::optional<HittingReport> best;
  for (std::size_t start = 0; start < n; ++start) {
    StateSet current(n, {start});
    // Grow: add the state that keeps the worst hitting time largest.
    while (pi.mass(current) < floor) {
      std::optional<std::pair<double, std::size_t>> pick;
      for (std::size_t y = 0; y < n; ++y) {
        if (current.contains(y)) continue;
        std::vector<std::size_t> m = current.members();
        m.push_back(y);
        const double v = score(StateSet(n, m)).first;
        if (!pick || v > pick->first * (1.0 + tolerances().tie)) pick = {v, y};
      }
      std::vector<std::size_t> m = current.members();
      m.push_back(pick->second);
      current = StateSet(n, m);
    }
    // Refine: single-state removals and swaps that stay admissible and improve.
    auto [value, state] = score(current);
    bool improved = true;
    for (std::size_t round = 0; improved && round < n * n; ++round) {
      improved = false;
      const std::vector<std::size_t> members = current.members();
      for (std::size_t a : members) {
        const StateSet smaller = current.without(a);
        if (!smaller.empty() && pi.mass(smaller) >= floor) {
          const auto s = score(smaller);
          if (s.first > value * (1.0 + tolerances().tie)) {
            current = smaller;
            std::tie(value, state) = s;
            improved = true;
            break;
          }
        }
        for (std::size_t y = 0; y < n && !improved; ++y) {
          if (current.contains(y)) continue;
          std::vector<std::size_t> m = current.without(a).members();
          m.push_back(y);
          StateSet swapped(n, m);
          if (pi.mass(swapped) < floor) continue;
          const auto s = score(swapped);
          if (s.first > value * (1.0 + tolerances().tie)) {
            current = swapped;
            std::tie(value, state) = s;
            improved = true;
          }
        }
        if (improved) break;
      }
    }
    HittingReport candidate{value, current, state, alpha, false};
    if (!best || better({candidate.value, &candidate.witness_set, candidate.witness_state},
                        {best->value, &best->witness_set, best->witness_state})) {
      best = candidate;
    }
  }
  return *best;
}

}  // namespace mchit
