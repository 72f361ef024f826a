#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "slce/error.hpp"
#include "slce/lce.hpp"
#include "slce/optim.hpp"
#include "support/random_instance.hpp"

using namespace slce;
using testdata::random_instance;
using testdata::relative_error;
using testdata::uniform_matrix;

namespace {

// Independent oracle: explicit triple loops, no matrix products.
double elementwise_cost(const Eigen::MatrixXd& A, const Eigen::MatrixXd& X,
                        const Eigen::MatrixXd& C) {
  const auto d = A.rows(), k = A.cols(), n = X.cols();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index r = 0; r < d; ++r) {
      double rec = 0.0;
      for (Eigen::Index s = 0; s < d; ++s) {
        double p = 0.0;
        for (Eigen::Index l = 0; l < k; ++l) p += A(r, l) * A(s, l);
        rec += p * X(s, i);
      }
      const double diff = C(r, i) - rec;
      total += diff * diff;
    }
  }
  return 0.5 * total;
}

Eigen::VectorXd numeric_lce_gradient(const Eigen::MatrixXd& A, const Eigen::MatrixXd& X,
                                     const Eigen::MatrixXd& C) {
  const auto d = A.rows(), k = A.cols();
  const Eigen::VectorXd flat = Eigen::Map<const Eigen::VectorXd>(A.data(), A.size());
  return finite_diff_gradient(
      [&](const Eigen::VectorXd& p) {
        return lce_cost(Eigen::Map<const Eigen::MatrixXd>(p.data(), d, k), X, C);
      },
      flat, 1e-5);
}

Eigen::VectorXd flat(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

// Two tight 2-D clusters at +-(3, 3), ten points each.
void easy_instance(Eigen::MatrixXd& X, Eigen::MatrixXd& C) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 0.1);
  X.resize(2, 20);
  for (int i = 0; i < 20; ++i) {
    const double s = i < 10 ? 3.0 : -3.0;
    X(0, i) = s + noise(rng);
    X(1, i) = s + noise(rng);
  }
  const Eigen::Vector2d c0 = X.leftCols(10).rowwise().mean();
  const Eigen::Vector2d c1 = X.rightCols(10).rowwise().mean();
  C.resize(2, 20);
  for (int i = 0; i < 20; ++i) C.col(i) = i < 10 ? c0 : c1;
}

}  // namespace

TEST(LceCost, ZeroEncoderGivesHalfTargetNorm) {
  std::mt19937_64 rng(1);
  const auto X = uniform_matrix(5, 4, rng);
  const auto C = uniform_matrix(5, 4, rng);
  EXPECT_DOUBLE_EQ(lce_cost(Eigen::MatrixXd::Zero(5, 2), X, C), 0.5 * C.squaredNorm());
}

TEST(LceCost, ExactReconstructionIsZero) {
  Eigen::MatrixXd X(3, 1);
  X << 0.0, 0.6, 0.8;
  Eigen::MatrixXd A(3, 1);
  A << 0.0, 0.6, 0.8;
  EXPECT_NEAR(lce_cost(A, X, X), 0.0, 1e-30);
}

TEST(LceCost, MatchesElementwiseOracle) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const auto A = uniform_matrix(6, 2, rng);
    const auto X = uniform_matrix(6, 4, rng);
    const auto C = uniform_matrix(6, 4, rng);
    const double oracle = elementwise_cost(A, X, C);
    EXPECT_NEAR(lce_cost(A, X, C), oracle, 1e-12 * std::max(1.0, oracle));
  }
}

TEST(LceCost, DimensionMismatchThrows) {
  EXPECT_THROW(lce_cost(Eigen::MatrixXd::Zero(3, 2), Eigen::MatrixXd::Zero(4, 2),
                        Eigen::MatrixXd::Zero(4, 2)),
               std::invalid_argument);
  EXPECT_THROW(lce_cost(Eigen::MatrixXd::Zero(3, 2), Eigen::MatrixXd::Zero(3, 2),
                        Eigen::MatrixXd::Zero(3, 3)),
               std::invalid_argument);
}

TEST(LceGradient, ZeroEncoderIsStationary) {
  std::mt19937_64 rng(3);
  const auto X = uniform_matrix(4, 3, rng);
  const auto C = uniform_matrix(4, 3, rng);
  EXPECT_TRUE(lce_gradient(Eigen::MatrixXd::Zero(4, 2), X, C).isZero());
}

TEST(LceGradient, MatchesFiniteDifferencesOnFixedInstance) {
  std::mt19937_64 rng(4);
  const auto A = uniform_matrix(8, 3, rng);
  const auto X = uniform_matrix(8, 6, rng);
  const auto C = uniform_matrix(8, 6, rng);
  EXPECT_LE(relative_error(flat(lce_gradient(A, X, C)), numeric_lce_gradient(A, X, C)), 1e-5);
}

TEST(LceGradient, OrthonormalSpanOfDataIsStationary) {
  std::mt19937_64 rng(6);
  const auto X = uniform_matrix(7, 3, rng);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
  const Eigen::MatrixXd A = qr.householderQ() * Eigen::MatrixXd::Identity(7, 3);
  EXPECT_NEAR(lce_cost(A, X, X), 0.0, 1e-25);
  EXPECT_LT(lce_gradient(A, X, X).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LceProperty, GradientMatchesFiniteDifferencesOnRandomInstances) {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 20; ++t) {
    const auto g = random_instance(rng);
    const double err =
        relative_error(flat(lce_gradient(g.A, g.X, g.C)), numeric_lce_gradient(g.A, g.X, g.C));
    EXPECT_LE(err, 1e-5) << "instance " << t;
  }
}

TEST(LceProperty, CostInvariantUnderRightRotation) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 10; ++t) {
    const auto g = random_instance(rng);
    const Eigen::MatrixXd Q =
        Eigen::HouseholderQR<Eigen::MatrixXd>(uniform_matrix(g.A.cols(), g.A.cols(), rng))
            .householderQ();
    const double base = lce_cost(g.A, g.X, g.C);
    EXPECT_NEAR(lce_cost(g.A * Q, g.X, g.C), base, 1e-12 * std::max(1.0, base));
  }
}

TEST(LceProperty, ZeroDataCostIndependentOfEncoder) {
  std::mt19937_64 rng(9);
  const auto C = uniform_matrix(5, 3, rng);
  const auto A = uniform_matrix(5, 2, rng);
  for (double alpha : {0.0, 0.5, 1.0, 7.0, -3.0}) {
    EXPECT_DOUBLE_EQ(lce_cost(alpha * A, Eigen::MatrixXd::Zero(5, 3), C), 0.5 * C.squaredNorm());
  }
}

TEST(FitLce, EasyTwoClassDropsNinetyNinePercent) {
  Eigen::MatrixXd X, C;
  easy_instance(X, C);
  LceConfig cfg;
  cfg.embedding_dim = 2;
  cfg.init_seed = 1;
  const auto model = fit_lce(X, C, cfg);
  ASSERT_GE(model.cost_trace.size(), 2u);
  const double first = model.cost_trace.front();
  const double last = model.cost_trace.back();
  EXPECT_LE(last, first);
  EXPECT_LE(last, 0.01 * first);
  EXPECT_DOUBLE_EQ(last, lce_cost(model.A, X, C));
  const double scatter = 0.5 * (X - C).squaredNorm();
  EXPECT_LE(last, scatter + 1e-3);
  EXPECT_TRUE(model.converged);
}

TEST(FitLce, FinalCostNeverExceedsInitialCost) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 10; ++t) {
    const auto g = random_instance(rng);
    LceConfig cfg;
    cfg.embedding_dim = static_cast<int>(g.A.cols());
    cfg.init_seed = static_cast<std::uint64_t>(t);
    cfg.max_iterations = 3000;
    const auto model = fit_lce(g.X, g.C, cfg);
    EXPECT_LE(model.cost_trace.back(), model.cost_trace.front()) << t;
  }
}

TEST(FitLce, SameSeedIsBitwiseReproducible) {
  std::mt19937_64 rng(11);
  const auto X = uniform_matrix(9, 7, rng);
  const auto C = uniform_matrix(9, 7, rng);
  LceConfig cfg;
  cfg.embedding_dim = 3;
  cfg.init_seed = 42;
  const auto a = fit_lce(X, C, cfg);
  const auto b = fit_lce(X, C, cfg);
  EXPECT_EQ(a.cost_trace, b.cost_trace);
  EXPECT_EQ(a.A, b.A);
  cfg.init_seed = 43;
  EXPECT_NE(fit_lce(X, C, cfg).A, a.A);
}

TEST(FitLce, InfiniteToleranceStopsAfterOneIteration) {
  std::mt19937_64 rng(12);
  const auto X = uniform_matrix(4, 5, rng);
  LceConfig cfg;
  cfg.embedding_dim = 2;
  cfg.convergence_tol = std::numeric_limits<double>::infinity();
  const auto model = fit_lce(X, X, cfg);
  EXPECT_EQ(model.iterations_run, 1u);
  EXPECT_TRUE(model.converged);
}

TEST(FitLce, IterationCapReportsNotConverged) {
  std::mt19937_64 rng(13);
  const auto X = uniform_matrix(6, 5, rng);
  LceConfig cfg;
  cfg.embedding_dim = 2;
  cfg.convergence_tol = 0.0;
  cfg.max_iterations = 7;
  const auto model = fit_lce(X, X, cfg);
  EXPECT_FALSE(model.converged);
  EXPECT_EQ(model.iterations_run, 7u);
  EXPECT_EQ(model.cost_trace.size(), 8u);
}

TEST(FitLce, EmbeddingLargerThanFeatureCountIsRejected) {
  const Eigen::MatrixXd X = Eigen::MatrixXd::Ones(2, 3);
  LceConfig cfg;
  cfg.embedding_dim = 3;
  EXPECT_THROW(fit_lce(X, X, cfg), std::invalid_argument);
}

TEST(FitLce, NonFiniteCostIsNumericalError) {
  Eigen::MatrixXd X = Eigen::MatrixXd::Constant(3, 2, 1e200);
  LceConfig cfg;
  cfg.embedding_dim = 2;
  EXPECT_THROW(fit_lce(X, X, cfg), NumericalError);
}

TEST(InitialEncoder, ScaledGaussianAndSeeded) {
  LceConfig cfg;
  cfg.embedding_dim = 4;
  cfg.init_seed = 3;
  const auto a = initial_encoder(400, cfg);
  EXPECT_EQ(a.rows(), 400);
  EXPECT_EQ(a.cols(), 4);
  const double sd = std::sqrt(a.squaredNorm() / static_cast<double>(a.size()));
  EXPECT_NEAR(sd, 1.0 / std::sqrt(400.0), 0.005);
  EXPECT_EQ(initial_encoder(400, cfg), a);
}
