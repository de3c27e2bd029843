#include "oracles.hpp"
#include "scfa/errors.hpp"
#include "scfa/ub_matrix.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace scfa {
namespace {

using oracle::dense_ub;

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

UniformBlockMatrix ub(std::initializer_list<double> a, const Eigen::MatrixXd& b,
                      std::vector<int> sizes) {
  Eigen::VectorXd av(static_cast<Eigen::Index>(a.size()));
  Eigen::Index i = 0;
  for (double v : a) av(i++) = v;
  return UniformBlockMatrix(av, b, PartitionVector(std::move(sizes)));
}

Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an scfa::Error";
  return ErrorKind::InternalConsistency;
}

TEST(UniformBlockMatrix, ConstructorValidates) {
  EXPECT_EQ(kind_of([] { ub({1.0}, Eigen::MatrixXd::Zero(2, 2), {3}); }),
            ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([] { ub({1.0, 1.0}, mat({{1, 0.5}, {0.4, 1}}), {2, 2}); }),
            ErrorKind::NotSymmetric);
}

TEST(ToDense, IdentityPlusOnes) {
  const Eigen::MatrixXd d = to_dense(ub({1.0}, mat({{1}}), {3}));
  Eigen::MatrixXd expected = Eigen::MatrixXd::Ones(3, 3);
  expected.diagonal().setConstant(2.0);
  EXPECT_EQ(d, expected);
}

TEST(ToDense, ZeroB) {
  const Eigen::MatrixXd d = to_dense(ub({2.0, 3.0}, Eigen::MatrixXd::Zero(2, 2), {2, 2}));
  EXPECT_EQ(d, Eigen::Vector4d(2, 2, 3, 3).asDiagonal().toDenseMatrix());
}

TEST(ToDense, HandExpanded) {
  const Eigen::MatrixXd d = to_dense(ub({1.0, 1.5}, mat({{1, 0.5}, {0.5, 1.5}}), {2, 2}));
  const Eigen::MatrixXd expected =
      mat({{2, 1, 0.5, 0.5}, {1, 2, 0.5, 0.5}, {0.5, 0.5, 3, 1.5}, {0.5, 0.5, 1.5, 3}});
  EXPECT_EQ(d, expected);
}

TEST(FromDense, Identity) {
  const UniformBlockMatrix n = from_dense(Eigen::MatrixXd::Identity(4, 4), PartitionVector({2, 2}));
  EXPECT_EQ(n.a(), Eigen::Vector2d(1, 1));
  EXPECT_EQ(n.b(), Eigen::MatrixXd::Zero(2, 2));
}

TEST(FromDense, RoundTripExample) {
  const UniformBlockMatrix n = ub({1.0, 2.0}, mat({{0.5, 0.1}, {0.1, 0.3}}), {2, 3});
  const UniformBlockMatrix back = from_dense(to_dense(n), n.partition(), 0.0);
  EXPECT_EQ(back.b(), n.b());
  EXPECT_NEAR(back.a()(0), 1.0, 4e-16);
  EXPECT_NEAR(back.a()(1), 2.0, 4e-16);
  EXPECT_EQ(back.partition(), n.partition());
}

TEST(FromDense, ToleratesTinyPerturbation) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
  m(0, 1) = m(1, 0) = 1e-12;
  m(2, 3) = m(3, 2) = -1e-12;
  m(0, 2) = m(2, 0) = 1e-12;
  const UniformBlockMatrix n = from_dense(m, PartitionVector({2, 2}), 1e-8);
  EXPECT_NEAR(n.a()(0), 1.0, 1e-11);
  EXPECT_NEAR(n.a()(1), 1.0, 1e-11);
  EXPECT_LT(max_abs(n.b()), 1e-11);
}

TEST(FromDense, StrictRejectsStructureViolation) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
  m(0, 3) = m(3, 0) = 0.2;
  try {
    from_dense(m, PartitionVector({2, 2}), 1e-8);
    FAIL() << "expected StructureViolation";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StructureViolation);
  }
  EXPECT_EQ(kind_of([] { from_dense(Eigen::MatrixXd::Identity(4, 4), PartitionVector({2, 3})); }),
            ErrorKind::DimensionMismatch);
}

TEST(FromDense, ProjectAveragesBlocks) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
  m(0, 2) = m(2, 0) = 0.2;
  m(1, 3) = m(3, 1) = 0.4;
  const UniformBlockMatrix n =
      from_dense(m, PartitionVector({2, 2}), 1e-8, FromDenseMode::Project);
  EXPECT_NEAR(n.b()(0, 1), 0.15, 1e-15);
  EXPECT_NEAR(n.a()(0), 1.0, 1e-15);
}

TEST(FromDense, RoundTripPropertyRandom) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const PartitionVector part = oracle::random_partition(rng, 6, 60);
    const UniformBlockMatrix n = oracle::random_symmetric_ub(rng, part);
    const UniformBlockMatrix back = from_dense(to_dense(n), part, 0.0);
    EXPECT_EQ(back.b(), n.b());
    for (int k = 0; k < n.num_blocks(); ++k) {
      EXPECT_NEAR(back.a()(k), n.a()(k), 8 * std::numeric_limits<double>::epsilon() *
                                             (std::abs(n.a()(k)) + std::abs(n.b()(k, k))));
    }
  }
}

TEST(Add, AdditiveInverseAndDisjoint) {
  std::mt19937_64 rng(3);
  const UniformBlockMatrix n = oracle::random_pd_ub(rng, PartitionVector({3, 4}));
  const UniformBlockMatrix z = add(n, scale(n, -1.0));
  EXPECT_EQ(z.a(), Eigen::VectorXd::Zero(2));
  EXPECT_EQ(z.b(), Eigen::MatrixXd::Zero(2, 2));

  const UniformBlockMatrix n1 = ub({1.0, 1.0}, Eigen::MatrixXd::Zero(2, 2), {2, 2});
  const UniformBlockMatrix n2 = ub({0.0, 0.0}, Eigen::MatrixXd::Constant(2, 2, 0.5), {2, 2});
  const UniformBlockMatrix s = add(n1, n2);
  EXPECT_EQ(s.a(), Eigen::Vector2d(1, 1));
  EXPECT_EQ(s.b(), Eigen::MatrixXd::Constant(2, 2, 0.5));
}

TEST(Add, DenseOracleAndMismatch) {
  std::mt19937_64 rng(4);
  const PartitionVector part({3, 4});
  const UniformBlockMatrix n1 = oracle::random_symmetric_ub(rng, part);
  const UniformBlockMatrix n2 = oracle::random_symmetric_ub(rng, part);
  EXPECT_EQ(to_dense(add(n1, n2)), to_dense(n1) + to_dense(n2));
  EXPECT_LT(max_abs(to_dense(subtract(n1, n2)) - (to_dense(n1) - to_dense(n2))), 1e-15);
  const UniformBlockMatrix other = UniformBlockMatrix::identity(PartitionVector({4, 3}));
  EXPECT_EQ(kind_of([&] { add(n1, other); }), ErrorKind::PartitionMismatch);
  EXPECT_EQ(kind_of([&] { multiply(n1, other); }), ErrorKind::PartitionMismatch);
}

TEST(Square, Examples) {
  const UniformBlockMatrix id = UniformBlockMatrix::identity(PartitionVector({3, 2}));
  EXPECT_EQ(square(id), id);
  const UniformBlockMatrix j = ub({0.0}, mat({{1}}), {3});
  const UniformBlockMatrix j2 = square(j);
  EXPECT_EQ(j2.a()(0), 0.0);
  EXPECT_EQ(j2.b()(0, 0), 3.0);
  EXPECT_EQ(to_dense(j2), to_dense(j) * to_dense(j));
}

TEST(Square, DenseOracle) {
  std::mt19937_64 rng(5);
  const UniformBlockMatrix n = oracle::random_symmetric_ub(rng, PartitionVector({3, 3, 4}));
  const Eigen::MatrixXd d = to_dense(n);
  EXPECT_LT(max_abs(to_dense(square(n)) - d * d), 1e-10);
  EXPECT_TRUE(square(n).symmetric());
}

TEST(Multiply, IdentityAndSquareConsistency) {
  std::mt19937_64 rng(6);
  const PartitionVector part({3, 3, 4});
  const UniformBlockMatrix n = oracle::random_symmetric_ub(rng, part);
  EXPECT_EQ(multiply(n, UniformBlockMatrix::identity(part)), n);
  const UniformBlockMatrix m = multiply(n, n);
  const UniformBlockMatrix s = square(n);
  EXPECT_LT(max_abs(m.a() - s.a()), 1e-13 * (1 + max_abs(s.a())));
  EXPECT_LT(max_abs(m.b() - s.b()), 1e-13 * (1 + max_abs(s.b())));
}

TEST(Multiply, DenseOracleNonCommuting) {
  std::mt19937_64 rng(7);
  const PartitionVector part({3, 5});
  const UniformBlockMatrix n1 = oracle::random_symmetric_ub(rng, part);
  const UniformBlockMatrix n2 = oracle::random_symmetric_ub(rng, part);
  EXPECT_LT(max_abs(to_dense(multiply(n1, n2)) - to_dense(n1) * to_dense(n2)), 1e-10);
}

TEST(Eigenvalues, Examples) {
  const Eigen::VectorXd e = eigenvalues(ub({1.0}, mat({{1}}), {3}));
  ASSERT_EQ(e.size(), 3);
  EXPECT_NEAR(e(0), 1.0, 1e-14);
  EXPECT_NEAR(e(1), 1.0, 1e-14);
  EXPECT_NEAR(e(2), 4.0, 1e-14);

  const Eigen::VectorXd diag = eigenvalues(ub({2.0, 0.5}, Eigen::MatrixXd::Zero(2, 2), {2, 3}));
  ASSERT_EQ(diag.size(), 5);
  EXPECT_EQ(diag, (Eigen::VectorXd(5) << 0.5, 0.5, 0.5, 2, 2).finished());
}

TEST(Eigenvalues, DenseOracle) {
  std::mt19937_64 rng(8);
  const UniformBlockMatrix n = oracle::random_pd_ub(rng, PartitionVector({3, 4, 5}));
  const Eigen::VectorXd ours = eigenvalues(n);
  const Eigen::VectorXd dense = oracle::dense_eigenvalues(to_dense(n));
  EXPECT_LT((ours - dense).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(LogDeterminant, Examples) {
  const LogDeterminant d1 = log_determinant(ub({2.0, 3.0}, Eigen::MatrixXd::Zero(2, 2), {2, 2}));
  EXPECT_EQ(d1.sign, 1.0);
  EXPECT_NEAR(std::exp(d1.log_abs), 36.0, 1e-12);
  const LogDeterminant d2 = log_determinant(ub({1.0}, mat({{1}}), {3}));
  EXPECT_NEAR(std::exp(d2.log_abs), 4.0, 1e-13);
  EXPECT_EQ(log_determinant(UniformBlockMatrix::identity(PartitionVector({3, 4}))).log_abs, 0.0);
}

TEST(LogDeterminant, SignForIndefinite) {
  const UniformBlockMatrix n = ub({-1.0, 2.0}, Eigen::MatrixXd::Zero(2, 2), {3, 2});
  const LogDeterminant d = log_determinant(n);
  EXPECT_EQ(d.sign, -1.0);
  const Eigen::MatrixXd dense = to_dense(n);
  EXPECT_NEAR(d.sign * std::exp(d.log_abs), dense.determinant(), 1e-12);

  const UniformBlockMatrix odd = ub({-1.0, 2.0}, Eigen::MatrixXd::Zero(2, 2), {2, 2});
  const LogDeterminant od = log_determinant(odd);
  EXPECT_NEAR(od.sign * std::exp(od.log_abs), to_dense(odd).determinant(), 1e-12);
}

TEST(LogDeterminant, Singular) {
  EXPECT_EQ(kind_of([] { log_determinant(ub({0.0, 1.0}, Eigen::MatrixXd::Identity(2, 2), {2, 2})); }),
            ErrorKind::SingularMatrix);
  // a = 1, b = -1/3 on a 3-block: Δ = 1 + 3(-1/3) = 0.
  EXPECT_EQ(kind_of([] { log_determinant(ub({1.0}, mat({{-1.0 / 3.0}}), {3})); }),
            ErrorKind::SingularMatrix);
}

TEST(Inverse, Examples) {
  const UniformBlockMatrix inv = inverse(ub({1.0}, mat({{1}}), {2}));
  EXPECT_NEAR(inv.a()(0), 1.0, 1e-15);
  EXPECT_NEAR(inv.b()(0, 0), -1.0 / 3.0, 1e-15);
  const Eigen::MatrixXd d = to_dense(inv);
  EXPECT_NEAR(d(0, 0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(d(0, 1), -1.0 / 3.0, 1e-15);
  const UniformBlockMatrix id = UniformBlockMatrix::identity(PartitionVector({2, 4}));
  EXPECT_EQ(inverse(id), id);
}

TEST(Inverse, DenseOracleAndInvolution) {
  std::mt19937_64 rng(9);
  const UniformBlockMatrix n = oracle::random_pd_ub(rng, PartitionVector({6, 6, 8}));
  const UniformBlockMatrix inv = inverse(n);
  EXPECT_TRUE(inv.symmetric());
  EXPECT_LT(max_abs(to_dense(inv) * to_dense(n) - Eigen::MatrixXd::Identity(20, 20)), 1e-8);
  const UniformBlockMatrix back = inverse(inv);
  EXPECT_LT(max_abs(back.a() - n.a()), 1e-8);
  EXPECT_LT(max_abs(back.b() - n.b()), 1e-8);
  EXPECT_EQ(kind_of([] { inverse(ub({0.0}, mat({{1}}), {3})); }), ErrorKind::SingularMatrix);
}

TEST(PositiveDefinite, MatchesDenseCholesky) {
  std::mt19937_64 rng(10);
  int positives = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const PartitionVector part = oracle::random_partition(rng, 4, 20);
    UniformBlockMatrix n = oracle::random_symmetric_ub(rng, part);
    if (trial % 2 == 0) n = oracle::random_pd_ub(rng, part);
    const bool dense_pd = Eigen::LLT<Eigen::MatrixXd>(to_dense(n)).info() == Eigen::Success &&
                          oracle::dense_eigenvalues(to_dense(n)).minCoeff() > 0.0;
    EXPECT_EQ(is_positive_definite(n), dense_pd) << "trial " << trial;
    positives += dense_pd;
  }
  EXPECT_GT(positives, 40);
  EXPECT_LT(positives, 100);
}

TEST(UbAlgebra, RandomizedDenseEquivalence) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> kd(1, 6);
    std::uniform_int_distribution<int> sd(2, 50);
    const int k = kd(rng);
    std::vector<int> sizes(static_cast<std::size_t>(k));
    for (int& s : sizes) s = sd(rng);
    const PartitionVector part(sizes);
    const UniformBlockMatrix n1 = oracle::random_pd_ub(rng, part);
    const UniformBlockMatrix n2 = oracle::random_symmetric_ub(rng, part);
    const Eigen::MatrixXd d1 = to_dense(n1);
    const Eigen::MatrixXd d2 = to_dense(n2);

    EXPECT_LT(max_abs(to_dense(add(n1, n2)) - (d1 + d2)), 1e-8);
    EXPECT_LT(max_abs(to_dense(square(n2)) - d2 * d2), 1e-8 * std::max(1.0, max_abs(d2 * d2)));
    EXPECT_LT(max_abs(to_dense(multiply(n1, n2)) - d1 * d2),
              1e-8 * std::max(1.0, max_abs(d1 * d2)));
    const Eigen::VectorXd eig = eigenvalues(n1);
    EXPECT_LT((eig - oracle::dense_eigenvalues(d1)).cwiseAbs().maxCoeff(),
              1e-8 * std::max(1.0, eig.cwiseAbs().maxCoeff()));
    const double ld = log_determinant(n1).log_abs;
    EXPECT_NEAR(ld, oracle::dense_cholesky_log_det(d1), 1e-8 * std::max(1.0, std::abs(ld)));
    EXPECT_NEAR(ld, eig.array().log().sum(), 1e-8 * std::max(1.0, std::abs(ld)));
    EXPECT_LT(max_abs(to_dense(inverse(n1)) - oracle::dense_inverse(d1)), 1e-8);
  }
}

TEST(BlockSummaries, Examples) {
  const BlockSummaries s = block_summaries(Eigen::MatrixXd::Identity(6, 6), PartitionVector({3, 3}));
  EXPECT_EQ(s.trace, Eigen::Vector2d(3, 3));
  EXPECT_EQ(s.sum, Eigen::Vector2d(3, 3).asDiagonal().toDenseMatrix());

  const BlockSummaries ones = block_summaries(Eigen::MatrixXd::Ones(5, 5), PartitionVector({2, 3}));
  EXPECT_EQ(ones.trace, Eigen::Vector2d(2, 3));
  EXPECT_EQ(ones.sum(0, 0), 4.0);
  EXPECT_EQ(ones.sum(1, 1), 9.0);
  EXPECT_EQ(ones.sum(0, 1), 6.0);
  EXPECT_EQ(ones.sum(1, 0), 6.0);
  EXPECT_EQ(kind_of([] { block_summaries(Eigen::MatrixXd::Ones(4, 4), PartitionVector({2, 3})); }),
            ErrorKind::DimensionMismatch);
}

TEST(BlockSummaries, NaiveLoopExact) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(7, 7);
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) m(i, j) = normal(rng);
  }
  const PartitionVector part({3, 4});
  const BlockSummaries s = block_summaries(m, part);
  for (int k = 0; k < 2; ++k) {
    double tr = 0.0;
    for (int i = part.offset(k); i < part.offset(k + 1); ++i) tr += m(i, i);
    EXPECT_EQ(s.trace(k), tr);
    for (int l = 0; l < 2; ++l) {
      double sum = 0.0;
      for (int j = part.offset(l); j < part.offset(l + 1); ++j) {
        for (int i = part.offset(k); i < part.offset(k + 1); ++i) sum += m(i, j);
      }
      EXPECT_EQ(s.sum(k, l), sum);
    }
  }
}

}  // namespace
}  // namespace scfa
