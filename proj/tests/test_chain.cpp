#include <gtest/gtest.h>

#include <cmath>

#include "mchit/chain.hpp"
#include "mchit/error.hpp"
#include "mchit/families.hpp"
#include "expect_error.hpp"
#include "oracles.hpp"

using namespace mchit;

TEST(Validate, AcceptsTwoStateChain) {
  const MarkovChain c = oracle::c2();
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(c.mode(), Mode::Continuous);
  EXPECT_DOUBLE_EQ(c.uniformization_rate(), 1.05 * 2.0);
  EXPECT_EQ(c.labels(), (std::vector<std::string>{"0", "1"}));
}

TEST(Validate, RejectsNegativeRate) {
  ChainSpec spec{Mode::Continuous, {}, {{1.0, -1.0}, {2.0, -2.0}}, "bad"};
  try {
    validate_chain(spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NegativeRate);
    EXPECT_NE(std::string(e.what()).find("(0,1)"), std::string::npos) << e.what();
  }
}

TEST(Validate, RejectsUnreachableAbsorbingState) {
  ChainSpec spec{Mode::Discrete, {}, {{0.5, 0.5, 0.0}, {0.5, 0.5, 0.0}, {0.0, 0.0, 1.0}}, "split"};
  EXPECT_EQ(kind_of([&] { validate_chain(spec); }), ErrorKind::Reducible);
  ChainSpec absorbing{Mode::Discrete, {}, {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.0, 0.0, 1.0}}, "trap"};
  EXPECT_EQ(kind_of([&] { validate_chain(absorbing); }), ErrorKind::Reducible);
}

TEST(Validate, RejectsShapeAndSums) {
  ChainSpec ragged{Mode::Continuous, {}, {{-1.0, 1.0}, {2.0}}, "r"};
  EXPECT_EQ(kind_of([&] { validate_chain(ragged); }), ErrorKind::NonSquare);
  ChainSpec rows{Mode::Continuous, {}, {{-1.0, 1.0}, {2.0, -1.0}}, "r"};
  EXPECT_EQ(kind_of([&] { validate_chain(rows); }), ErrorKind::BadRowSum);
  ChainSpec stoch{Mode::Discrete, {}, {{0.5, 0.6}, {0.5, 0.5}}, "r"};
  EXPECT_EQ(kind_of([&] { validate_chain(stoch); }), ErrorKind::BadRowSum);
  ChainSpec big{Mode::Discrete, {}, {{1.5, -0.5}, {0.5, 0.5}}, "r"};
  EXPECT_NE(kind_of([&] { validate_chain(big); }), ErrorKind::UsageError);
  ChainSpec one{Mode::Continuous, {}, {{0.0}}, "r"};
  EXPECT_EQ(kind_of([&] { validate_chain(one); }), ErrorKind::BadSize);
}

TEST(Stationary, ClosedForms) {
  const Distribution pi = oracle::c2().stationary();
  EXPECT_NEAR(pi[0], 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(pi[1], 1.0 / 3.0, 1e-14);

  const MarkovChain sym = oracle::from_rows(Mode::Continuous, {{-1, 1}, {1, -1}});
  EXPECT_NEAR(sym.stationary()[0], 0.5, 1e-14);

  const MarkovChain cycle = make_family({"cycle", 5, {}, Mode::Continuous, 0});
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(cycle.stationary()[i], 0.2, 1e-14);
}

TEST(Stationary, MatchesEliminationOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (Mode mode : {Mode::Continuous, Mode::Discrete}) {
      const MarkovChain c = oracle::random_chain(seed, 3 + seed % 8, mode);
      const std::vector<double> ref = oracle::stationary_law(c);
      for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(c.stationary()[i], ref[i], 1e-12);
    }
  }
}

TEST(Kernel, IdentityAtZero) {
  const MarkovChain c = oracle::random_chain(3, 5, Mode::Continuous);
  EXPECT_TRUE(kernel_at(c, 0.0).matrix().isApprox(Eigen::MatrixXd::Identity(5, 5)));
  const MarkovChain d = oracle::random_chain(3, 5, Mode::Discrete);
  EXPECT_TRUE(kernel_at(d, 0.0).matrix().isApprox(Eigen::MatrixXd::Identity(5, 5)));
}

TEST(Kernel, TwoStateClosedForm) {
  const MarkovChain c = oracle::c2();
  for (double t : {0.1, 1.0, 10.0}) {
    const Eigen::MatrixXd k = kernel_at(c, t).matrix();
    const double e = std::exp(-3.0 * t);
    EXPECT_NEAR(k(0, 0), 2.0 / 3.0 + e / 3.0, 1e-10);
    EXPECT_NEAR(k(0, 1), 1.0 / 3.0 - e / 3.0, 1e-10);
    EXPECT_NEAR(k(1, 0), 2.0 / 3.0 - 2.0 * e / 3.0, 1e-10);
    EXPECT_NEAR(k(1, 1), 1.0 / 3.0 + 2.0 * e / 3.0, 1e-10);
  }
}

TEST(Kernel, DiscreteStepIsMatrix) {
  const MarkovChain flip = oracle::from_rows(Mode::Discrete, {{0, 1}, {1, 0}});
  const MarkovChain lazy = lazify(flip);
  EXPECT_TRUE(kernel_at(lazy, 1.0).matrix().isApprox(lazy.matrix()));
  EXPECT_EQ(kind_of([&] { kernel_at(lazy, 1.5); }), ErrorKind::BadTime);
  EXPECT_EQ(kind_of([&] { kernel_at(lazy, -1.0); }), ErrorKind::NegativeTime);
  EXPECT_EQ(kind_of([&] { kernel_at(oracle::c2(), -0.5); }), ErrorKind::NegativeTime);
}

TEST(Kernel, MatchesPadeOracleOnLogGrid) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const MarkovChain c = oracle::random_chain(seed, 3 + seed % 9, Mode::Continuous);
    const double unit = 1.0 / c.uniformization_rate();
    for (double f = 1e-3; f <= 1e3 * 1.0001; f *= 10.0) {
      const double t = f * unit;
      const Eigen::MatrixXd k = kernel_at(c, t).matrix();
      const Eigen::MatrixXd ref = oracle::kernel(c, t);
      EXPECT_LT((k - ref).cwiseAbs().maxCoeff(), 1e-10) << "seed " << seed << " t " << t;
      EXPECT_GE(k.minCoeff(), -1e-12);
      for (Eigen::Index r = 0; r < k.rows(); ++r) EXPECT_NEAR(k.row(r).sum(), 1.0, 1e-10);
    }
  }
}

TEST(Kernel, LongHorizonsStayStochastic) {
  const MarkovChain c = make_family({"two-cliques", 8, {}, Mode::Continuous, 0});
  const Eigen::MatrixXd k = kernel_at(c, 5000.0).matrix();
  EXPECT_GE(k.minCoeff(), 0.0);
  for (Eigen::Index r = 0; r < k.rows(); ++r) {
    EXPECT_NEAR(k.row(r).sum(), 1.0, 1e-10);
    EXPECT_LT(oracle::tv(k.row(r).transpose(), c.stationary().weights()), 1e-9);
  }
}

TEST(Kernel, Semigroup) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const MarkovChain c = oracle::random_chain(seed, 6, Mode::Continuous);
    for (double s : {0.05, 0.7, 3.0}) {
      for (double t : {0.2, 1.3, 9.0}) {
        const Eigen::MatrixXd lhs = kernel_at(c, s + t).matrix();
        const Eigen::MatrixXd rhs = kernel_at(c, s).matrix() * kernel_at(c, t).matrix();
        for (Eigen::Index r = 0; r < lhs.rows(); ++r) {
          EXPECT_LE(oracle::tv(lhs.row(r).transpose(), rhs.row(r).transpose()), 1e-9);
        }
      }
    }
  }
}

TEST(Kernel, StationaryIsFixed) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    for (Mode mode : {Mode::Continuous, Mode::Discrete}) {
      const MarkovChain c = oracle::random_chain(seed, 7, mode);
      const Eigen::VectorXd pi = c.stationary().weights();
      for (double t : {1.0, 4.0, 25.0}) {
        const Eigen::VectorXd moved = kernel_at(c, t).matrix().transpose() * pi;
        EXPECT_LE(tv_distance(moved, pi), 1e-9);
      }
    }
  }
}

TEST(TotalVariation, Examples) {
  EXPECT_DOUBLE_EQ(tv_distance(Distribution::point_mass(3, 0), Distribution::point_mass(3, 0)), 0.0);
  EXPECT_DOUBLE_EQ(tv_distance(Distribution::point_mass(3, 0), Distribution::point_mass(3, 1)), 1.0);
  const std::vector<double> a{2.0 / 3.0, 1.0 / 3.0};
  EXPECT_NEAR(tv_distance(Distribution::from_weights(a), Distribution::uniform(2)), 1.0 / 6.0, 1e-15);
  EXPECT_EQ(kind_of([] { tv_distance(Distribution::uniform(2), Distribution::uniform(3)); }),
            ErrorKind::LengthMismatch);
}

TEST(DistributionTest, ValidatesAndClamps) {
  Eigen::VectorXd w(3);
  w << 0.5, 0.5 + 1e-13, -1e-13;
  const Distribution d(w);
  EXPECT_EQ(d[2], 0.0);
  Eigen::VectorXd bad(2);
  bad << 0.7, 0.2;
  EXPECT_EQ(kind_of([&] { Distribution{bad}; }), ErrorKind::BadDistribution);
  Eigen::VectorXd neg(2);
  neg << 1.1, -0.1;
  EXPECT_EQ(kind_of([&] { Distribution{neg}; }), ErrorKind::BadDistribution);
}

TEST(Lazify, Examples) {
  const MarkovChain flip = oracle::from_rows(Mode::Discrete, {{0, 1}, {1, 0}});
  EXPECT_TRUE(lazify(flip).matrix().isApprox(Eigen::MatrixXd::Constant(2, 2, 0.5)));

  const MarkovChain lazy = lazify(lazify(flip));
  EXPECT_GE(lazy.matrix().diagonal().minCoeff(), 0.5);

  const MarkovChain rot = oracle::from_rows(Mode::Discrete, {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  const MarkovChain lr = lazify(rot);
  for (Eigen::Index j = 0; j < 3; ++j) EXPECT_NEAR(lr.matrix().col(j).sum(), 1.0, 1e-15);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(lr.stationary()[i], 1.0 / 3.0, 1e-14);

  EXPECT_EQ(kind_of([] { lazify(oracle::c2()); }), ErrorKind::WrongMode);
}

TEST(Reversibility, Examples) {
  EXPECT_TRUE(is_reversible(oracle::c2()));
  EXPECT_FALSE(is_reversible(make_family({"biased-cycle", 3, {}, Mode::Continuous, 0})));
  EXPECT_TRUE(is_reversible(make_family({"hypercube", 3, {}, Mode::Continuous, 0})));
  EXPECT_TRUE(is_reversible(make_family({"two-cliques", 5, {}, Mode::Discrete, 0})));
  for (std::uint64_t seed = 0; seed < 5; ++seed) EXPECT_TRUE(is_reversible(oracle::reversible_chain(seed, 6)));
}

TEST(Fingerprint, DistinguishesChains) {
  EXPECT_EQ(oracle::c2().fingerprint(), oracle::c2().fingerprint());
  EXPECT_NE(oracle::c2().fingerprint(),
            oracle::from_rows(Mode::Continuous, {{-1, 1}, {1, -1}}).fingerprint());
}
