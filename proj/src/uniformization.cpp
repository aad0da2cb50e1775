#include "mchit/uniformization.hpp"

#include <algorithm>
#include <cmath>

namespace mchit::uniformization {
namespace {

// Below this mean the series is summed directly; above it the horizon is
// halved until it fits and the result is squared back up.
constexpr double kDirectMean = 32.0;
// exp_apply switches to the matrix route above this mean.
constexpr double kVectorMean = 4096.0;

double log_pmf(double mean, std::size_t k) {
  const auto kd = static_cast<double>(k);
  return -mean + kd * std::log(mean) - std::lgamma(kd + 1.0);
}

int halvings(double mean) {
  if (mean <= kDirectMean) return 0;
  return static_cast<int>(std::ceil(std::log2(mean / kDirectMean)));
}

}  // namespace

PoissonWindow poisson_window(double mean, double tail) {
  PoissonWindow window;
  if (mean <= 0.0) {
    window.weights = {1.0};
    return window;
  }
  const auto mode = static_cast<std::size_t>(std::floor(mean));
  const double budget = tail / 4.0;

  // Left end: sum_{j<k} pmf(j) <= pmf(k) k / (mean - k) for k < mean.
  std::size_t left = mode;
  while (left > 0) {
    const double p = std::exp(log_pmf(mean, left));
    const auto kd = static_cast<double>(left);
    if (kd < mean && p * kd / (mean - kd) < budget) break;
    --left;
  }
  // Right end: sum_{j>k} pmf(j) <= pmf(k) mean / (k + 1 - mean) for k + 1 > mean.
  std::size_t right = mode;
  for (;;) {
    const double p = std::exp(log_pmf(mean, right));
    const auto kd = static_cast<double>(right);
    if (kd + 1.0 > mean && p * mean / (kd + 1.0 - mean) < budget) break;
    ++right;
  }
  // Ratios from the mode outward, then normalization: lgamma's absolute error
  // at large arguments would otherwise bias every weight by the same factor.
  window.left = left;
  window.weights.assign(right - left + 1, 0.0);
  window.weights[mode - left] = 1.0;
  for (std::size_t k = mode; k < right; ++k) {
    window.weights[k + 1 - left] = window.weights[k - left] * mean / static_cast<double>(k + 1);
  }
  for (std::size_t k = mode; k > left; --k) {
    window.weights[k - 1 - left] = window.weights[k - left] * static_cast<double>(k) / mean;
  }
  double total = 0.0;
  for (double w : window.weights) total += w;
  for (double& w : window.weights) w /= total;
  return window;
}

std::vector<double> cesaro_weights(double mean, double tail) {
  if (mean <= 0.0) return {1.0};
  // Full pmf from k = 0 so that P[N > k] is available for every k.
  const PoissonWindow window = poisson_window(mean, tail * 1e-6);
  const std::size_t right = window.left + window.weights.size() - 1;
  std::vector<double> pmf(right + 1);
  for (std::size_t k = 0; k <= right; ++k) {
    pmf[k] = k >= window.left ? window.weights[k - window.left] : std::exp(log_pmf(mean, k));
  }
  std::vector<double> weights(right + 1);
  double above = 0.0;
  for (std::size_t k = right + 1; k-- > 0;) {
    weights[k] = above / mean;
    above += pmf[k];
  }
  // Drop the trailing weights whose total is below the tail budget.
  double dropped = 0.0;
  std::size_t keep = weights.size();
  while (keep > 1 && dropped + weights[keep - 1] < tail) {
    dropped += weights[keep - 1];
    --keep;
  }
  weights.resize(keep);
  return weights;
}

Eigen::MatrixXd exp_matrix(const Eigen::MatrixXd& step, double mean, double tail) {
  const Eigen::Index n = step.rows();
  const int s = halvings(mean);
  const double base_mean = std::ldexp(mean, -s);
  const PoissonWindow window = poisson_window(base_mean, std::ldexp(tail, -s));

  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
  const std::size_t right = window.left + window.weights.size();
  for (std::size_t k = 0; k < right; ++k) {
    if (k >= window.left) acc += window.weights[k - window.left] * power;
    if (k + 1 < right) power = power * step;
  }
  for (int i = 0; i < s; ++i) acc = acc * acc;
  return acc;
}

Eigen::VectorXd exp_apply(const Eigen::MatrixXd& step, double mean, const Eigen::VectorXd& v,
                          double tail) {
  if (mean > kVectorMean) return exp_matrix(step, mean, tail) * v;
  const PoissonWindow window = poisson_window(mean, tail);
  Eigen::VectorXd current = v;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(v.size());
  const std::size_t right = window.left + window.weights.size();
  for (std::size_t k = 0; k < right; ++k) {
    if (k >= window.left) acc += window.weights[k - window.left] * current;
    if (k + 1 < right) current = step * current;
  }
  return acc;
}

Eigen::MatrixXd average_matrix(const Eigen::MatrixXd& step, double mean, double tail) {
  const Eigen::Index n = step.rows();
  const int s = halvings(mean);
  const double base_mean = std::ldexp(mean, -s);
  const double base_tail = std::ldexp(tail, -s);

  const std::vector<double> weights = cesaro_weights(base_mean, base_tail);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < weights.size(); ++k) {
    avg += weights[k] * power;
    if (k + 1 < weights.size()) power = power * step;
  }
  if (s == 0) return avg;

  // avg(2 tau) = (avg(tau) + K(tau) avg(tau)) / 2, K(2 tau) = K(tau)^2.
  Eigen::MatrixXd kernel = exp_matrix(step, base_mean, base_tail);
  for (int i = 0; i < s; ++i) {
    avg = 0.5 * (avg + kernel * avg);
    if (i + 1 < s) kernel = kernel * kernel;
  }
  return avg;
}

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& step, std::uint64_t k) {
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(step.rows(), step.cols());
  Eigen::MatrixXd base = step;
  while (k > 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

Eigen::MatrixXd power_average(const Eigen::MatrixXd& step, std::uint64_t k) {
  const Eigen::Index n = step.rows();
  // sum_{j<a} M^j and M^a, built over the bits of k from the top:
  // S(2a) = S(a) + M^a S(a), S(a + 1) = S(a) + M^a.
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  int top = 63;
  while (top >= 0 && !((k >> top) & 1U)) --top;
  for (int bit = top; bit >= 0; --bit) {
    sum = sum + power * sum;
    power = power * power;
    if ((k >> bit) & 1U) {
      sum += power;
      power = power * step;
    }
  }
  return sum / static_cast<double>(k);
}

}  // namespace mchit::uniformization
