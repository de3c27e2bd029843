#include "scfa/kernels.hpp"
#include "scfa/parallel.hpp"
#include "scfa/ub_matrix.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace {

using namespace scfa;

Eigen::MatrixXd random_matrix(int n, int p) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) x(i, j) = normal(rng);
  }
  return x;
}

std::vector<int> labels_for(int p, int blocks) {
  std::vector<int> labels(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) labels[static_cast<std::size_t>(j)] = j * blocks / p;
  return labels;
}

void BM_RowSumsSerial(benchmark::State& state) {
  const Eigen::MatrixXd x = random_matrix(static_cast<int>(state.range(0)), 400);
  const auto labels = labels_for(400, 8);
  for (auto _ : state) benchmark::DoNotOptimize(serial::community_row_sums(x, labels, 8));
}

void BM_RowSumsParallel(benchmark::State& state) {
  const Eigen::MatrixXd x = random_matrix(static_cast<int>(state.range(0)), 400);
  const auto labels = labels_for(400, 8);
  for (auto _ : state) benchmark::DoNotOptimize(community_row_sums(x, labels, 8));
}

void BM_CrossProductSerial(benchmark::State& state) {
  const Eigen::MatrixXd x = random_matrix(120, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::cross_product(x, 120.0));
}

void BM_CrossProductParallel(benchmark::State& state) {
  const Eigen::MatrixXd x = random_matrix(120, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cross_product(x, 120.0));
}

void BM_BlockSummariesSerial(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const Eigen::MatrixXd x = random_matrix(120, p);
  const auto labels = labels_for(p, 5);
  for (auto _ : state) benchmark::DoNotOptimize(serial::data_block_summaries(x, labels, 5, 120.0));
}

void BM_BlockSummariesParallel(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const Eigen::MatrixXd x = random_matrix(120, p);
  const auto labels = labels_for(p, 5);
  for (auto _ : state) benchmark::DoNotOptimize(data_block_summaries(x, labels, 5, 120.0));
}

UniformBlockMatrix bench_ub(int p) {
  const int k = 5;
  std::vector<int> sizes(k, p / k);
  Eigen::MatrixXd b = Eigen::MatrixXd::Constant(k, k, 0.3);
  b.diagonal().array() += 1.0;
  return UniformBlockMatrix(Eigen::VectorXd::Constant(k, 0.5), b, PartitionVector(sizes));
}

void BM_LogDetUniformBlock(benchmark::State& state) {
  const UniformBlockMatrix m = bench_ub(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(log_determinant(m));
}

void BM_LogDetDenseCholesky(benchmark::State& state) {
  const Eigen::MatrixXd dense = to_dense(bench_ub(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    const Eigen::LLT<Eigen::MatrixXd> llt(dense);
    benchmark::DoNotOptimize(2.0 * llt.matrixLLT().diagonal().array().log().sum());
  }
}

BENCHMARK(BM_RowSumsSerial)->Arg(1000)->Arg(10000);
BENCHMARK(BM_RowSumsParallel)->Arg(1000)->Arg(10000);
BENCHMARK(BM_CrossProductSerial)->Arg(200)->Arg(500);
BENCHMARK(BM_CrossProductParallel)->Arg(200)->Arg(500);
BENCHMARK(BM_BlockSummariesSerial)->Arg(200)->Arg(1000);
BENCHMARK(BM_BlockSummariesParallel)->Arg(200)->Arg(1000);
BENCHMARK(BM_LogDetUniformBlock)->Arg(100)->Arg(500)->Arg(2000);
BENCHMARK(BM_LogDetDenseCholesky)->Arg(100)->Arg(500)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
