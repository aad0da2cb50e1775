#include "mchit/chain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>
#include <set>

#include "mchit/config.hpp"
#include "mchit/error.hpp"
#include "mchit/uniformization.hpp"

namespace mchit {
namespace {

std::string pair_name(std::size_t x, std::size_t y) {
  return "(" + std::to_string(x) + "," + std::to_string(y) + ")";
}

// States reachable from `source` along positive off-diagonal entries of m,
// or (reverse) states that can reach it.
std::vector<bool> reachable(const Eigen::MatrixXd& m, std::size_t source, bool reverse) {
  const auto n = static_cast<std::size_t>(m.rows());
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> frontier;
  seen[source] = true;
  frontier.push(source);
  while (!frontier.empty()) {
    const std::size_t x = frontier.front();
    frontier.pop();
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y || seen[y]) continue;
      const double w = reverse ? m(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x))
                               : m(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
      if (w > 0.0) {
        seen[y] = true;
        frontier.push(y);
      }
    }
  }
  return seen;
}

Distribution solve_stationary(const Eigen::MatrixXd& step) {
  const Eigen::Index n = step.rows();
  // pi (M - I) = 0 with the last equation replaced by sum(pi) = 1.
  Eigen::MatrixXd system = (step - Eigen::MatrixXd::Identity(n, n)).transpose();
  system.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::VectorXd pi = system.fullPivLu().solve(rhs);
  if (!pi.allFinite()) throw Error(ErrorKind::SolverFailure, "stationary solve produced non-finite values");

  const double tol = tolerances().stationary_residual;
  if (pi.minCoeff() < -tol) {
    throw Error(ErrorKind::SolverFailure, "stationary solve produced a negative weight");
  }
  pi = pi.cwiseMax(0.0);
  pi /= pi.sum();
  const double residual = (pi.transpose() * step - pi.transpose()).cwiseAbs().maxCoeff();
  if (residual > tol) {
    throw Error(ErrorKind::SolverFailure,
                "stationary residual " + std::to_string(residual) + " exceeds tolerance");
  }
  return Distribution(pi);
}

std::uint64_t fnv1a(Mode mode, const Eigen::MatrixXd& m) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(mode == Mode::Continuous ? 1 : 2);
  mix(static_cast<std::uint64_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) mix(std::bit_cast<std::uint64_t>(m(i, j)));
  }
  return h;
}

}  // namespace

std::string_view to_string(Mode mode) {
  return mode == Mode::Continuous ? "continuous" : "discrete";
}

Mode parse_mode(std::string_view text) {
  if (text == "continuous") return Mode::Continuous;
  if (text == "discrete") return Mode::Discrete;
  throw Error(ErrorKind::ParseError, "mode must be 'continuous' or 'discrete', got '" +
                                         std::string(text) + "'");
}

Distribution::Distribution(Eigen::VectorXd weights) : weights_(std::move(weights)) {
  const Tolerances& tol = tolerances();
  if (weights_.size() == 0) throw Error(ErrorKind::BadDistribution, "empty distribution");
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_(i)) || weights_(i) < -tol.negative_mass) {
      throw Error(ErrorKind::BadDistribution,
                  "weight " + std::to_string(i) + " is " + std::to_string(weights_(i)));
    }
    weights_(i) = std::max(weights_(i), 0.0);
  }
  const double total = weights_.sum();
  if (std::abs(total - 1.0) > tol.mass_sum) {
    throw Error(ErrorKind::BadDistribution, "weights sum to " + std::to_string(total));
  }
}

Distribution Distribution::point_mass(std::size_t n, std::size_t state) {
  if (state >= n) throw Error(ErrorKind::BadSize, "point mass at " + std::to_string(state));
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  w(static_cast<Eigen::Index>(state)) = 1.0;
  return Distribution(std::move(w));
}

Distribution Distribution::uniform(std::size_t n) {
  return Distribution(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n)));
}

Distribution Distribution::from_weights(std::span<const double> weights) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(weights.size()));
  for (std::size_t i = 0; i < weights.size(); ++i) w(static_cast<Eigen::Index>(i)) = weights[i];
  return Distribution(std::move(w));
}

double Distribution::mass(const StateSet& set) const {
  double total = 0.0;
  for (std::size_t m : set.members()) total += (*this)[m];
  return total;
}

std::vector<double> Distribution::to_vector() const {
  return {weights_.data(), weights_.data() + weights_.size()};
}

Kernel::Kernel(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  const Tolerances& tol = tolerances();
  for (Eigen::Index x = 0; x < matrix_.rows(); ++x) {
    for (Eigen::Index y = 0; y < matrix_.cols(); ++y) {
      if (!std::isfinite(matrix_(x, y)) || matrix_(x, y) < -tol.negative_mass) {
        throw Error(ErrorKind::BadDistribution, "kernel entry " + pair_name(x, y) + " is " +
                                                    std::to_string(matrix_(x, y)));
      }
      matrix_(x, y) = std::max(matrix_(x, y), 0.0);
    }
    const double total = matrix_.row(x).sum();
    if (std::abs(total - 1.0) > tol.mass_sum) {
      throw Error(ErrorKind::BadDistribution,
                  "kernel row " + std::to_string(x) + " sums to " + std::to_string(total));
    }
  }
}

Distribution Kernel::row(std::size_t x) const {
  return Distribution(matrix_.row(static_cast<Eigen::Index>(x)).transpose());
}

MarkovChain::MarkovChain(Mode mode, Eigen::MatrixXd matrix, std::vector<std::string> labels,
                         std::string name)
    : mode_(mode),
      matrix_(std::move(matrix)),
      labels_(std::move(labels)),
      name_(std::move(name)),
      stationary_(Distribution::uniform(1)) {
  const Eigen::Index n = matrix_.rows();
  if (mode_ == Mode::Continuous) {
    rate_ = 1.05 * matrix_.diagonal().cwiseAbs().maxCoeff();
    step_ = Eigen::MatrixXd::Identity(n, n) + matrix_ / rate_;
    step_ = step_.cwiseMax(0.0);
  } else {
    rate_ = 1.0;
    step_ = matrix_;
  }
  stationary_ = solve_stationary(step_);
  fingerprint_ = fnv1a(mode_, matrix_);
}

ChainSpec MarkovChain::to_spec() const {
  ChainSpec spec;
  spec.mode = mode_;
  spec.labels = labels_;
  spec.name = name_;
  spec.matrix.assign(size(), std::vector<double>(size()));
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      spec.matrix[i][j] = matrix_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return spec;
}

MarkovChain validate_chain(const ChainSpec& spec) {
  const std::size_t n = spec.matrix.size();
  if (n < 2) throw Error(ErrorKind::BadSize, "a chain needs at least 2 states, got " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (spec.matrix[i].size() != n) {
      throw Error(ErrorKind::NonSquare, "row " + std::to_string(i) + " has " +
                                            std::to_string(spec.matrix[i].size()) +
                                            " entries, expected " + std::to_string(n));
    }
  }

  std::vector<std::string> labels = spec.labels;
  if (labels.empty()) {
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != n) {
    throw Error(ErrorKind::ParseError, std::to_string(labels.size()) + " labels for " +
                                           std::to_string(n) + " states");
  }
  if (std::set<std::string>(labels.begin(), labels.end()).size() != n) {
    throw Error(ErrorKind::ParseError, "state labels are not distinct");
  }

  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m(ni, ni);
  double scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = spec.matrix[i][j];
      if (!std::isfinite(v)) throw Error(ErrorKind::ParseError, "entry " + pair_name(i, j) + " is not finite");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      scale = std::max(scale, std::abs(v));
    }
  }

  const double tol = tolerances().row_sum;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double v = m(ii, static_cast<Eigen::Index>(j));
      if (spec.mode == Mode::Continuous && i != j && v < 0.0) {
        throw Error(ErrorKind::NegativeRate, "rate " + pair_name(i, j) + " = " + std::to_string(v));
      }
      if (spec.mode == Mode::Discrete && v < 0.0) {
        throw Error(ErrorKind::NegativeRate, "probability " + pair_name(i, j) + " = " + std::to_string(v));
      }
      if (spec.mode == Mode::Discrete && v > 1.0 + tol) {
        throw Error(ErrorKind::BadRowSum, "row " + std::to_string(i) + " has entry " +
                                              std::to_string(v) + " above 1");
      }
    }
    const double target = spec.mode == Mode::Continuous ? 0.0 : 1.0;
    const double sum = m.row(ii).sum();
    if (std::abs(sum - target) > tol * scale) {
      throw Error(ErrorKind::BadRowSum, "row " + std::to_string(i) + " sums to " + std::to_string(sum));
    }
  }

  const std::vector<bool> forward = reachable(m, 0, false);
  const std::vector<bool> backward = reachable(m, 0, true);
  for (std::size_t i = 0; i < n; ++i) {
    if (!forward[i]) {
      throw Error(ErrorKind::Reducible, "state " + labels[i] + " is not reachable from state " + labels[0]);
    }
    if (!backward[i]) {
      throw Error(ErrorKind::Reducible, "state " + labels[0] + " is not reachable from state " + labels[i]);
    }
  }
  return MarkovChain(spec.mode, std::move(m), std::move(labels), spec.name);
}

Distribution stationary(const MarkovChain& chain) { return chain.stationary(); }

std::uint64_t step_count(double t) {
  if (t < 0.0) throw Error(ErrorKind::NegativeTime, "time " + std::to_string(t));
  if (!std::isfinite(t) || std::abs(t - std::round(t)) > 1e-9) {
    throw Error(ErrorKind::BadTime, "discrete time must be an integer, got " + std::to_string(t));
  }
  return static_cast<std::uint64_t>(std::llround(t));
}

Kernel kernel_at(const MarkovChain& chain, double t) {
  if (t < 0.0) throw Error(ErrorKind::NegativeTime, "time " + std::to_string(t));
  if (chain.mode() == Mode::Discrete) {
    return Kernel(uniformization::matrix_power(chain.step_matrix(), step_count(t)));
  }
  return Kernel(uniformization::exp_matrix(chain.step_matrix(), chain.uniformization_rate() * t,
                                           tolerances().poisson_tail));
}

double tv_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                   const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::LengthMismatch, "lengths " + std::to_string(a.size()) + " and " +
                                               std::to_string(b.size()));
  }
  return std::clamp(0.5 * (a - b).cwiseAbs().sum(), 0.0, 1.0);
}

double tv_distance(const Distribution& a, const Distribution& b) {
  return tv_distance(a.weights(), b.weights());
}

MarkovChain lazify(const MarkovChain& chain) {
  if (chain.mode() != Mode::Discrete) {
    throw Error(ErrorKind::WrongMode, "lazify applies to discrete chains only");
  }
  ChainSpec spec = chain.to_spec();
  for (std::size_t i = 0; i < spec.matrix.size(); ++i) {
    for (std::size_t j = 0; j < spec.matrix.size(); ++j) {
      spec.matrix[i][j] = 0.5 * spec.matrix[i][j] + (i == j ? 0.5 : 0.0);
    }
  }
  spec.name = chain.name() + "-lazy";
  return validate_chain(spec);
}

bool is_reversible(const MarkovChain& chain) {
  const Eigen::MatrixXd& m = chain.step_matrix();
  const Eigen::VectorXd& pi = chain.stationary().weights();
  const double tol = tolerances().reversibility;
  for (Eigen::Index x = 0; x < m.rows(); ++x) {
    for (Eigen::Index y = x + 1; y < m.cols(); ++y) {
      if (std::abs(pi(x) * m(x, y) - pi(y) * m(y, x)) > tol) return false;
    }
  }
  return true;
}

}  // namespace mchit
