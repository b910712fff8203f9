#include "corpus.hpp"
#include "oracles.hpp"
#include "revwalk/markov.hpp"

#include <gtest/gtest.h>

#include <functional>

using namespace revwalk;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::DomainError;
}

}  // namespace

TEST(KernelConstruction, ValidRowsAccepted) {
  const Kernel k = corpus::from({{0.9, 0.1}, {0.2, 0.8}});
  EXPECT_EQ(k.size(), 2);
  EXPECT_DOUBLE_EQ(k(0, 1), 0.1);
}

TEST(KernelConstruction, IdentityIsNotIrreducible) {
  const Kernel k = corpus::from({{1, 0}, {0, 1}});
  EXPECT_FALSE(classify(k).irreducible);
  EXPECT_FALSE(classify(k).ergodic);
}

TEST(KernelConstruction, RejectsBadRows) {
  EXPECT_EQ(code_of([] { corpus::from({{0.5, 0.6}, {0.2, 0.8}}); }), ErrorCode::NotStochastic);
  EXPECT_EQ(code_of([] { corpus::from({{1.1, -0.1}, {0.2, 0.8}}); }), ErrorCode::NotStochastic);
  EXPECT_EQ(code_of([] { corpus::from({{1.0}}); }), ErrorCode::InvalidParameter);
}

TEST(KernelConstruction, TinyNegativesClampedToZero) {
  const Kernel k = corpus::from({{1.0 + 5e-13, -5e-13}, {0.5, 0.5}});
  EXPECT_GE(k.matrix().minCoeff(), 0.0);
}

TEST(KernelConstruction, EveryCorpusKernelIsStochastic) {
  for (const auto& [name, k] : corpus::all()) {
    EXPECT_GE(k.matrix().minCoeff(), 0.0) << name;
    EXPECT_LE((k.matrix().rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-9) << name;
  }
}

TEST(CircleWalk, ClockwiseOrStay) {
  const Kernel k = circle_walk(5, 0.5, 0.0);
  for (Index x = 0; x < 5; ++x) {
    EXPECT_DOUBLE_EQ(k(x, x), 0.5);
    EXPECT_DOUBLE_EQ(k(x, (x + 1) % 5), 0.5);
  }
}

TEST(CircleWalk, PureRotationIsPeriodic) {
  const KernelClass c = classify(circle_walk(3, 1.0, 0.0));
  EXPECT_TRUE(c.irreducible);
  ASSERT_TRUE(c.aperiodic.has_value());
  EXPECT_FALSE(*c.aperiodic);
  EXPECT_EQ(c.period, 3);
  EXPECT_FALSE(c.ergodic);
}

TEST(CircleWalk, NonreversibleRowsSumToOne) {
  const Kernel k = circle_walk(4, 0.75, 0.25);
  EXPECT_LE((k.matrix().rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-15);
  // bipartite, so check against the uniform law directly
  EXPECT_EQ(classify(k).period, 2);
  EXPECT_FALSE(*classify(k, Distribution::uniform(4)).reversible);
}

TEST(Bottleneck, Sizes) {
  EXPECT_EQ(bottleneck_graph(31).size(), 63);
  const Kernel k = bottleneck_graph(3);
  EXPECT_EQ(k.size(), 7);
  EXPECT_LE((k.matrix().rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-15);
  EXPECT_EQ(code_of([] { bottleneck_graph(4); }), ErrorCode::InvalidParameter);
}

TEST(Bottleneck, N31ErgodicNotReversible) {
  const Kernel k = bottleneck_graph(31);
  const Distribution pi = stationary_distribution(k);
  const KernelClass c = classify(k, pi);
  EXPECT_TRUE(c.ergodic);
  EXPECT_FALSE(*c.reversible);
}

TEST(Bottleneck, BridgeCarriesLittleMass) {
  const Index n = 31;
  const Kernel k = bottleneck_graph(n);
  const Distribution pi = stationary_distribution(k);
  const Vector ref = oracle::stationary(k.matrix());
  EXPECT_LE((pi.probs() - ref).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT(pi(bottleneck_bridge(n)), 0.01 / (2.0 * n));
}

TEST(GroupWalk, CyclicUniformStationary) {
  const Kernel k = cyclic_walk(5, {{1, 0.75}, {-1, 0.25}});
  EXPECT_TRUE(k.is_group_walk());
  const Distribution pi = stationary_distribution(k);
  EXPECT_LE((pi.probs().array() - 0.2).abs().maxCoeff(), 1e-12);
  // circulant: P(x, x+1) = 3/4
  EXPECT_DOUBLE_EQ(k(2, 3), 0.75);
  EXPECT_DOUBLE_EQ(k(3, 2), 0.25);
}

TEST(GroupWalk, IdentityLawNotErgodic) {
  Vector law(2);
  law << 1.0, 0.0;
  const Kernel k = group_walk(cyclic_group_table(2), Distribution::from_probs(law));
  EXPECT_TRUE(k.matrix().isApprox(Matrix::Identity(2, 2)));
  EXPECT_FALSE(classify(k).ergodic);
}

TEST(GroupWalk, MissingInverseRejected) {
  Eigen::MatrixXi t(3, 3);
  t << 0, 1, 2, 1, 1, 1, 2, 1, 0;
  EXPECT_EQ(code_of([&] { group_walk(t, Distribution::uniform(3)); }), ErrorCode::NotAGroup);
}

TEST(GroupWalk, ReversibleIffSymmetricLaw) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (Index n = 3; n <= 24; ++n) {
    for (bool symmetric : {true, false}) {
      Vector law(n);
      for (Index g = 0; g < n; ++g) law(g) = u(rng);
      if (symmetric) {
        for (Index g = 1; g < n; ++g) law(g) = law(n - g) = std::max(law(g), law(n - g));
      }
      law /= law.sum();
      const Kernel k = group_walk(cyclic_group_table(n), Distribution::from_probs(law));
      bool brute = true;
      for (Index g = 0; g < n; ++g) brute = brute && std::abs(law(g) - law((n - g) % n)) <= 1e-15;
      const Distribution pi = stationary_distribution(k);
      EXPECT_EQ(*classify(k, pi).reversible, brute) << "n=" << n;
    }
  }
}

TEST(PerfectlyMixed, RowsEqualPi) {
  const Kernel half = perfectly_mixed(Distribution::uniform(2));
  EXPECT_TRUE(half.matrix().isApprox(Matrix::Constant(2, 2, 0.5)));
  Vector w(2);
  w << 2.0 / 3.0, 1.0 / 3.0;
  const Kernel k = perfectly_mixed(Distribution::from_probs(w));
  for (Index x = 0; x < 2; ++x) EXPECT_LE((k.matrix().row(x).transpose() - w).norm(), 1e-15);
  Vector degenerate(2);
  degenerate << 1.0, 0.0;
  EXPECT_EQ(code_of([&] { perfectly_mixed(Distribution::from_probs(degenerate)); }),
            ErrorCode::InvalidParameter);
}

TEST(Lazy, Examples) {
  EXPECT_TRUE(lazy(corpus::from({{1, 0}, {0, 1}})).matrix().isApprox(Matrix::Identity(2, 2)));
  const Kernel l = lazy(circle_walk(3, 1.0, 0.0));
  for (Index x = 0; x < 3; ++x) {
    EXPECT_DOUBLE_EQ(l(x, x), 0.5);
    EXPECT_DOUBLE_EQ(l(x, (x + 1) % 3), 0.5);
  }
  Matrix expect(2, 2);
  expect << 0.75, 0.25, 0.25, 0.75;
  EXPECT_LE((lazy(perfectly_mixed(Distribution::uniform(2))).matrix() - expect).norm(), 1e-15);
}

TEST(Stationary, TwoStateClosedForm) {
  const Distribution pi = stationary_distribution(corpus::from({{0.9, 0.1}, {0.2, 0.8}}));
  EXPECT_NEAR(pi(0), 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(pi(1), 1.0 / 3.0, 1e-14);
}

TEST(Stationary, DoublyStochasticIsUniform) {
  for (const Kernel& k : {circle_walk(7, 0.6, 0.3), circle_walk(5, 0.75, 0.25),
                          cyclic_walk(9, {{2, 0.5}, {-1, 0.3}, {0, 0.2}})}) {
    const Distribution pi = stationary_distribution(k);
    EXPECT_LE((pi.probs().array() - 1.0 / k.size()).abs().maxCoeff(), 1e-10);
  }
}

TEST(Stationary, MatchesPowerIterationOnCorpus) {
  for (const auto& [name, k] : corpus::all()) {
    const Distribution pi = stationary_distribution(k);
    EXPECT_LE((pi.probs() - oracle::stationary(k.matrix())).cwiseAbs().maxCoeff(), 1e-10) << name;
    EXPECT_LE(stationarity_residual(k, pi), 1e-12) << name;
    EXPECT_NEAR(pi.amplitudes().norm(), 1.0, 1e-12) << name;
  }
}

TEST(Stationary, NonErgodicRejected) {
  EXPECT_EQ(code_of([] { stationary_distribution(circle_walk(3, 1.0, 0.0)); }), ErrorCode::NotErgodic);
}

TEST(TimeReversal, CounterclockwiseUnderUniformPi) {
  const Kernel k = circle_walk(5, 0.5, 0.0);
  const Kernel r = time_reversal(k, Distribution::uniform(5));
  for (Index x = 0; x < 5; ++x) {
    EXPECT_DOUBLE_EQ(r(x, (x + 4) % 5), 0.5);
    EXPECT_DOUBLE_EQ(r(x, x), 0.5);
  }
}

TEST(TimeReversal, TwoStateIsReversible) {
  const Kernel k = corpus::from({{0.9, 0.1}, {0.2, 0.8}});
  const Distribution pi = stationary_distribution(k);
  EXPECT_LE((time_reversal(k, pi).matrix() - k.matrix()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE(detailed_balance_residual(k, pi), 1e-15);
}

TEST(TimeReversal, InvolutionAndOracle) {
  for (const auto& [name, k] : corpus::all()) {
    const Distribution pi = stationary_distribution(k);
    const Kernel r = time_reversal(k, pi);
    EXPECT_LE((r.matrix() - oracle::reversal(k.matrix(), pi.probs())).cwiseAbs().maxCoeff(), 1e-12) << name;
    EXPECT_LE((time_reversal(r, pi).matrix() - k.matrix()).cwiseAbs().maxCoeff(), 1e-12) << name;
  }
}

TEST(KernelPower, Examples) {
  const Kernel k = circle_walk(5, 0.75, 0.25);
  EXPECT_TRUE(kernel_power(k, 1).matrix().isApprox(k.matrix()));
  EXPECT_LE((kernel_power(circle_walk(3, 1.0, 0.0), 3).matrix() - Matrix::Identity(3, 3)).norm(), 1e-15);
  Vector w(3);
  w << 0.2, 0.3, 0.5;
  const Kernel m = perfectly_mixed(Distribution::from_probs(w));
  for (long j : {2L, 5L, 17L}) EXPECT_LE((kernel_power(m, j).matrix() - m.matrix()).norm(), 1e-14);
}

TEST(KernelPower, SemigroupProperty) {
  const Kernel k = bottleneck_graph(5);
  for (long a : {1L, 3L, 8L, 32L})
    for (long b : {1L, 7L, 32L}) {
      const Matrix lhs = kernel_power(k, a + b).matrix();
      const Matrix rhs = kernel_power(k, a).matrix() * kernel_power(k, b).matrix();
      EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10) << a << "+" << b;
      EXPECT_LE((lhs - oracle::matpow(k.matrix(), a + b)).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Classify, ErgodicIffIrreducibleAndAperiodic) {
  std::vector<Kernel> ks = {circle_walk(3, 1.0, 0.0), circle_walk(4, 0.5, 0.5), corpus::from({{1, 0}, {0, 1}}),
                            corpus::from({{0, 1}, {1, 0}}), corpus::from({{0.5, 0.5}, {0, 1}})};
  for (const auto& [name, k] : corpus::all()) ks.push_back(k);
  for (const Kernel& k : ks) {
    const KernelClass c = classify(k);
    EXPECT_EQ(c.ergodic, c.irreducible && c.aperiodic.value_or(false));
    if (!c.irreducible) EXPECT_FALSE(c.aperiodic.has_value());
  }
  EXPECT_EQ(classify(circle_walk(4, 0.5, 0.5)).period, 2);
}

TEST(Classify, LazyFlag) {
  EXPECT_TRUE(classify(lazy(circle_walk(5, 1.0, 0.0))).lazy);
  EXPECT_FALSE(classify(circle_walk(5, 1.0, 0.0)).lazy);
}

TEST(Distribution, Validation) {
  Vector bad(2);
  bad << 0.7, 0.4;
  EXPECT_EQ(code_of([&] { Distribution::from_probs(bad); }), ErrorCode::InvalidProbability);
  bad << 1.2, -0.2;
  EXPECT_EQ(code_of([&] { Distribution::from_probs(bad); }), ErrorCode::InvalidProbability);
  EXPECT_NEAR(Distribution::uniform(9).amplitudes().norm(), 1.0, 1e-12);
}
