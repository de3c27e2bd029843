#include "scfa/kernels.hpp"
#include "scfa/parallel.hpp"

#include <gtest/gtest.h>

#include <random>

namespace scfa {
namespace {

Eigen::MatrixXd random_matrix(int n, int p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(n, p);
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < n; ++i) x(i, j) = normal(rng);
  }
  return x;
}

std::vector<int> random_labels(int p, int blocks, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(0, blocks - 1);
  std::vector<int> labels(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) labels[static_cast<std::size_t>(j)] = j < blocks ? j : dist(rng);
  return labels;
}

class KernelThreads : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override {
    saved_ = thread_limit();
    set_thread_limit(GetParam());
  }
  void TearDown() override { set_thread_limit(saved_); }

 private:
  int saved_ = 1;
};

TEST_P(KernelThreads, RowSumsMatchSerialBitwise) {
  const Eigen::MatrixXd x = random_matrix(301, 37, 1);
  const auto labels = random_labels(37, 4, 2);
  EXPECT_EQ(community_row_sums(x, labels, 4), serial::community_row_sums(x, labels, 4));
  const std::vector<double> w{0.5, 2.0, 1.5, 3.0};
  EXPECT_EQ(community_row_sums(x, labels, 4, w), serial::community_row_sums(x, labels, 4, w));
}

TEST_P(KernelThreads, CrossProductMatchesSerialBitwise) {
  const Eigen::MatrixXd x = random_matrix(130, 29, 3);
  EXPECT_EQ(cross_product(x, 130.0), serial::cross_product(x, 130.0));
}

TEST_P(KernelThreads, BlockSummariesMatchDenseReference) {
  const Eigen::MatrixXd x = random_matrix(257, 41, 4);
  const auto labels = random_labels(41, 5, 5);
  const BlockSummaries fast = data_block_summaries(x, labels, 5, 257.0);
  const BlockSummaries ref = serial::data_block_summaries(x, labels, 5, 257.0);
  const double scale = ref.sum.cwiseAbs().maxCoeff() + ref.trace.cwiseAbs().maxCoeff();
  EXPECT_LT((fast.trace - ref.trace).cwiseAbs().maxCoeff(), 1e-12 * scale);
  EXPECT_LT((fast.sum - ref.sum).cwiseAbs().maxCoeff(), 1e-12 * scale);
  EXPECT_EQ(fast.sum, fast.sum.transpose());
}

TEST_P(KernelThreads, ResultsIndependentOfThreadCount) {
  const Eigen::MatrixXd x = random_matrix(1000, 60, 6);
  const auto labels = random_labels(60, 3, 7);
  const int current = thread_limit();
  const BlockSummaries here = data_block_summaries(x, labels, 3, 1000.0);
  set_thread_limit(1);
  const BlockSummaries one = data_block_summaries(x, labels, 3, 1000.0);
  set_thread_limit(current);
  EXPECT_EQ(here.trace, one.trace);
  EXPECT_EQ(here.sum, one.sum);
}

INSTANTIATE_TEST_SUITE_P(Threads, KernelThreads, ::testing::Values(1, 2, 8));

TEST(Kernels, ColumnSumSquaresAndCentering) {
  Eigen::MatrixXd x(3, 2);
  x << 1, 4, 2, 4, 3, 4;
  EXPECT_EQ(column_sum_squares(x), Eigen::Vector2d(14, 48));
  const Eigen::MatrixXd c = center_columns(x);
  EXPECT_EQ(c.col(0), Eigen::Vector3d(-1, 0, 1));
  EXPECT_EQ(c.col(1), Eigen::Vector3d::Zero());
}

TEST(Kernels, LabelChecks) {
  const Eigen::MatrixXd x = Eigen::MatrixXd::Ones(3, 3);
  const std::vector<int> short_labels{0, 1};
  EXPECT_THROW(community_row_sums(x, short_labels, 2), std::runtime_error);
  const std::vector<int> bad{0, 1, 5};
  EXPECT_THROW(community_row_sums(x, bad, 2), std::runtime_error);
}

TEST(Parallel, ThreadLimitFromEnv) {
  setenv("SCFA_THREADS", "3", 1);
  EXPECT_EQ(thread_limit_from_env(), 3);
  setenv("SCFA_THREADS", "zero", 1);
  EXPECT_FALSE(thread_limit_from_env().has_value());
  setenv("SCFA_THREADS", "0", 1);
  EXPECT_FALSE(thread_limit_from_env().has_value());
  unsetenv("SCFA_THREADS");
  EXPECT_FALSE(thread_limit_from_env().has_value());
}

}  // namespace
}  // namespace scfa
