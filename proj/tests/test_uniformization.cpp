#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <numeric>

#include "mchit/parallel.hpp"
#include "mchit/uniformization.hpp"
#include "oracles.hpp"

using namespace mchit;
namespace un = mchit::uniformization;

TEST(Poisson, WindowHoldsAlmostAllMass) {
  for (double mean : {0.0, 1e-4, 0.5, 3.0, 30.0, 700.0, 5000.0}) {
    const un::PoissonWindow w = un::poisson_window(mean, 1e-13);
    const double total = std::accumulate(w.weights.begin(), w.weights.end(), 0.0);
    EXPECT_NEAR(total, 1.0, 1e-12) << mean;
    // Spot check against the direct pmf.
    const std::size_t k = w.left + w.weights.size() / 2;
    const double direct = std::exp(-mean + static_cast<double>(k) * std::log(mean > 0 ? mean : 1.0) -
                                   std::lgamma(static_cast<double>(k) + 1.0));
    if (mean > 0) EXPECT_NEAR(w.weights[k - w.left], direct, 1e-12 + 1e-9 * direct);
  }
}

TEST(Poisson, CesaroWeightsTelescope) {
  for (double mean : {0.01, 1.0, 12.0, 31.0}) {
    const std::vector<double> w = un::cesaro_weights(mean, 1e-13);
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12) << mean;
    for (std::size_t k = 1; k < w.size(); ++k) EXPECT_LE(w[k], w[k - 1] + 1e-18);
  }
}

TEST(Powers, MatchRepeatedProducts) {
  const MarkovChain c = oracle::random_chain(5, 6, Mode::Discrete);
  const Eigen::MatrixXd& p = c.matrix();
  Eigen::MatrixXd direct = Eigen::MatrixXd::Identity(6, 6);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(6, 6);
  for (std::uint64_t k = 0; k <= 37; ++k) {
    EXPECT_LT((un::matrix_power(p, k) - direct).cwiseAbs().maxCoeff(), 1e-13) << k;
    sum += direct;
    EXPECT_LT((un::power_average(p, k + 1) - sum / static_cast<double>(k + 1)).cwiseAbs().maxCoeff(), 1e-13)
        << k;
    direct = direct * p;
  }
}

TEST(Exp, ApplyAgreesWithMatrix) {
  const MarkovChain c = oracle::random_chain(9, 7, Mode::Continuous);
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(7, 0.0, 1.0);
  for (double mean : {0.3, 20.0, 90.0, 6000.0}) {
    const Eigen::VectorXd a = un::exp_apply(c.step_matrix(), mean, v, 1e-13);
    const Eigen::VectorXd b = un::exp_matrix(c.step_matrix(), mean, 1e-13) * v;
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-10) << mean;
  }
}

TEST(Exp, AverageMatchesSimpson) {
  const MarkovChain c = oracle::random_chain(2, 4, Mode::Continuous);
  for (double t : {0.2, 1.0, 7.5, 60.0}) {
    const Eigen::MatrixXd avg = un::average_matrix(c.step_matrix(), c.uniformization_rate() * t, 1e-13);
    const Eigen::MatrixXd ref = oracle::cesaro(c, t, 800);
    EXPECT_LT((avg - ref).cwiseAbs().maxCoeff(), 1e-8) << t;
  }
}

TEST(Parallel, VisitsEachIndexOnceAndRethrows) {
  for (unsigned workers : {1u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), workers, [&](std::size_t i) { hits[i]++; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
    EXPECT_THROW(parallel_for(100, workers,
                              [](std::size_t i) {
                                if (i == 17) throw std::runtime_error("boom");
                              }),
                 std::runtime_error);
  }
  EXPECT_GE(resolve_workers(0), 1u);
  EXPECT_EQ(resolve_workers(5), 5u);
}
