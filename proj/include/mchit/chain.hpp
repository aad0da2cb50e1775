#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mchit/state_set.hpp"

namespace mchit {

enum class Mode { Continuous, Discrete };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

/// Raw, unvalidated chain description as read from a chain file.
/// `matrix` is the generator Q in continuous mode and the transition matrix P
/// in discrete mode. Empty `labels` means "0".."n-1".
struct ChainSpec {
  Mode mode = Mode::Continuous;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> matrix;
  std::string name = "chain";
};

/// Probability vector. Entries within the negative-mass tolerance of zero are
/// clamped; the total must be within the mass tolerance of one.
class Distribution {
 public:
  explicit Distribution(Eigen::VectorXd weights);

  static Distribution point_mass(std::size_t n, std::size_t state);
  static Distribution uniform(std::size_t n);
  static Distribution from_weights(std::span<const double> weights);

  std::size_t size() const noexcept { return static_cast<std::size_t>(weights_.size()); }
  double operator[](std::size_t i) const { return weights_[static_cast<Eigen::Index>(i)]; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  double mass(const StateSet& set) const;
  std::vector<double> to_vector() const;

 private:
  Eigen::VectorXd weights_;
};

/// Row-stochastic matrix, row x holding the law started from x.
class Kernel {
 public:
  explicit Kernel(Eigen::MatrixXd matrix);

  std::size_t size() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  Distribution row(std::size_t x) const;

 private:
  Eigen::MatrixXd matrix_;
};

/// A validated irreducible finite chain. Immutable after construction.
class MarkovChain {
 public:
  Mode mode() const noexcept { return mode_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& name() const noexcept { return name_; }

  /// Q in continuous mode, P in discrete mode.
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  /// I + Q/lambda in continuous mode, P in discrete mode.
  const Eigen::MatrixXd& step_matrix() const noexcept { return step_; }
  /// lambda in continuous mode; 1 in discrete mode (one step per unit time).
  double uniformization_rate() const noexcept { return rate_; }
  const Distribution& stationary() const noexcept { return stationary_; }
  /// Hash of mode and matrix entries, used to tie persisted rules to a chain.
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }

  ChainSpec to_spec() const;

 private:
  friend MarkovChain validate_chain(const ChainSpec& spec);
  MarkovChain(Mode mode, Eigen::MatrixXd matrix, std::vector<std::string> labels, std::string name);

  Mode mode_;
  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd step_;
  std::vector<std::string> labels_;
  std::string name_;
  double rate_ = 1.0;
  Distribution stationary_;
  std::uint64_t fingerprint_ = 0;
};

/// Throws Error{NonSquare, NegativeRate, BadRowSum, Reducible} naming the offending row.
MarkovChain validate_chain(const ChainSpec& spec);

/// Unique stationary law; throws SolverFailure if the residual check fails.
Distribution stationary(const MarkovChain& chain);

/// p_t. Continuous mode uses uniformization; discrete mode requires integral t.
Kernel kernel_at(const MarkovChain& chain, double t);

double tv_distance(const Distribution& a, const Distribution& b);
double tv_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                   const Eigen::Ref<const Eigen::VectorXd>& b);

/// (I + P) / 2.
MarkovChain lazify(const MarkovChain& chain);

bool is_reversible(const MarkovChain& chain);

/// Converts a discrete time argument to a step count; throws BadTime for
/// non-integral values and NegativeTime for negative ones.
std::uint64_t step_count(double t);

}  // namespace mchit
