#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

// Poisson-mixture evaluation of exp(lambda t (M - I)) for a nonnegative step
// matrix M, which keeps every intermediate entrywise nonnegative.
namespace mchit::uniformization {

/// Poisson(mean) probabilities for k in [left, left + weights.size()); the
/// mass outside the window is below `tail`.
struct PoissonWindow {
  std::size_t left = 0;
  std::vector<double> weights;
};

PoissonWindow poisson_window(double mean, double tail);

/// w_k = P[N > k] / mean for N ~ Poisson(mean), k = 0, 1, ...; the weights of
/// the time average (1/t) int_0^t exp(s lambda (M - I)) ds with mean = lambda t.
/// Truncated once the dropped weight is below `tail`.
std::vector<double> cesaro_weights(double mean, double tail);

/// sum_k Poisson(mean; k) M^k.
Eigen::MatrixXd exp_matrix(const Eigen::MatrixXd& step, double mean, double tail);

/// sum_k Poisson(mean; k) M^k v, by repeated matrix-vector products.
Eigen::VectorXd exp_apply(const Eigen::MatrixXd& step, double mean, const Eigen::VectorXd& v,
                          double tail);

/// sum_k w_k M^k with the Cesaro weights above.
Eigen::MatrixXd average_matrix(const Eigen::MatrixXd& step, double mean, double tail);

/// M^k by repeated squaring.
Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& step, std::uint64_t k);

/// (1/k) sum_{j<k} M^j, k >= 1.
Eigen::MatrixXd power_average(const Eigen::MatrixXd& step, std::uint64_t k);

}  // namespace mchit::uniformization
