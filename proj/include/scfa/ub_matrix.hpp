#ifndef SCFA_UB_MATRIX_HPP
#define SCFA_UB_MATRIX_HPP

#include "scfa/partition.hpp"

#include <Eigen/Dense>

namespace scfa {

/// Uniform-block matrix A∘I(p) + B∘J(p).
///
/// Diagonal block k is a_k I + b_kk J and off-diagonal block (k, k') is the
/// constant b_kk'. Everything is computed on the K×K coordinates; to_dense()
/// exists for oracles and I/O.
///
/// The public constructor requires B to be exactly symmetric. Products of two
/// UB matrices that do not commute have a non-symmetric B; those are only
/// produced by multiply() through general().
class UniformBlockMatrix {
 public:
  UniformBlockMatrix(Eigen::VectorXd a, Eigen::MatrixXd b,
                     PartitionVector partition);

  static UniformBlockMatrix general(Eigen::VectorXd a, Eigen::MatrixXd b,
                                    PartitionVector partition);
  static UniformBlockMatrix identity(const PartitionVector& partition);

  const Eigen::VectorXd& a() const noexcept { return a_; }
  const Eigen::MatrixXd& b() const noexcept { return b_; }
  const PartitionVector& partition() const noexcept { return partition_; }
  int num_blocks() const noexcept { return partition_.num_blocks(); }
  int dim() const noexcept { return partition_.total(); }
  bool symmetric() const;

  // Δ = A + B P.
  Eigen::MatrixXd delta() const;
  // A + P^{1/2} B P^{1/2}; similar to Δ and symmetric when B is.
  Eigen::MatrixXd symmetric_delta() const;

  bool operator==(const UniformBlockMatrix& other) const;

 private:
  struct Unchecked {};
  UniformBlockMatrix(Unchecked, Eigen::VectorXd a, Eigen::MatrixXd b,
                     PartitionVector partition);

  Eigen::VectorXd a_;
  Eigen::MatrixXd b_;
  PartitionVector partition_;
};

enum class FromDenseMode { Strict, Project };

UniformBlockMatrix from_dense(const Eigen::MatrixXd& m,
                              const PartitionVector& partition,
                              double tol = 1e-8,
                              FromDenseMode mode = FromDenseMode::Strict);
Eigen::MatrixXd to_dense(const UniformBlockMatrix& n);

UniformBlockMatrix add(const UniformBlockMatrix& lhs,
                       const UniformBlockMatrix& rhs);
UniformBlockMatrix subtract(const UniformBlockMatrix& lhs,
                            const UniformBlockMatrix& rhs);
UniformBlockMatrix scale(const UniformBlockMatrix& n, double factor);
UniformBlockMatrix square(const UniformBlockMatrix& n);
UniformBlockMatrix multiply(const UniformBlockMatrix& lhs,
                            const UniformBlockMatrix& rhs);

// All p eigenvalues, ascending: each a_k repeated p_k - 1 times plus the K
// eigenvalues of Δ. Requires symmetric B.
Eigen::VectorXd eigenvalues(const UniformBlockMatrix& n);
// The K eigenvalues of Δ, ascending.
Eigen::VectorXd delta_eigenvalues(const UniformBlockMatrix& n);

struct LogDeterminant {
  double sign = 1.0;
  double log_abs = 0.0;
};

// Σ_k (p_k - 1) log|a_k| + log|det Δ|. Throws SingularMatrix when some a_k or
// det Δ vanishes relative to 1e-12 of the largest coordinate scale.
LogDeterminant log_determinant(const UniformBlockMatrix& n);

// (A^{-1}, -Δ^{-1} B A^{-1}); B* is symmetrized for symmetric inputs.
UniformBlockMatrix inverse(const UniformBlockMatrix& n);

bool is_positive_definite(const UniformBlockMatrix& n);

// Block traces tr(M_kk) and block element sums sum(M_kk').
struct BlockSummaries {
  Eigen::VectorXd trace;
  Eigen::MatrixXd sum;
};

BlockSummaries block_summaries(const Eigen::MatrixXd& m,
                               const PartitionVector& partition);

}  // namespace scfa

#endif  // SCFA_UB_MATRIX_HPP
