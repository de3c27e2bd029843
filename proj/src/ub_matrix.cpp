#include "scfa/ub_matrix.hpp"

#include "scfa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace scfa {

namespace {

constexpr double kSingularTol = 1e-12;
constexpr double kAsymmetryTol = 1e-8;

void check_shapes(const Eigen::VectorXd& a, const Eigen::MatrixXd& b,
                  const PartitionVector& partition) {
  const int k = partition.num_blocks();
  if (a.size() != k || b.rows() != k || b.cols() != k) {
    throw Error(ErrorKind::DimensionMismatch,
                "coordinate matrices must be K×K with K = " +
                    std::to_string(k));
  }
  if (!a.allFinite() || !b.allFinite()) {
    throw Error(ErrorKind::InvalidSpec, "coordinates must be finite");
  }
}

void require_same_partition(const UniformBlockMatrix& lhs,
                            const UniformBlockMatrix& rhs) {
  if (!(lhs.partition() == rhs.partition())) {
    throw Error(ErrorKind::PartitionMismatch,
                "operands have different partitions");
  }
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

double largest_scale(const UniformBlockMatrix& n, const Eigen::MatrixXd& delta) {
  return std::max(n.a().cwiseAbs().maxCoeff(), delta.cwiseAbs().maxCoeff());
}

void require_nonzero_a(const UniformBlockMatrix& n, double scale) {
  for (int k = 0; k < n.num_blocks(); ++k) {
    if (std::abs(n.a()(k)) <= kSingularTol * scale) {
      throw Error(ErrorKind::SingularMatrix,
                  "a_" + std::to_string(k + 1) + " is zero");
    }
  }
}

}  // namespace

UniformBlockMatrix::UniformBlockMatrix(Eigen::VectorXd a, Eigen::MatrixXd b,
                                       PartitionVector partition)
    : a_(std::move(a)), b_(std::move(b)), partition_(std::move(partition)) {
  check_shapes(a_, b_, partition_);
  if (b_ != b_.transpose()) {
    throw Error(ErrorKind::NotSymmetric, "B must be symmetric");
  }
}

UniformBlockMatrix::UniformBlockMatrix(Unchecked, Eigen::VectorXd a,
                                       Eigen::MatrixXd b,
                                       PartitionVector partition)
    : a_(std::move(a)), b_(std::move(b)), partition_(std::move(partition)) {
  check_shapes(a_, b_, partition_);
}

UniformBlockMatrix UniformBlockMatrix::general(Eigen::VectorXd a,
                                               Eigen::MatrixXd b,
                                               PartitionVector partition) {
  return UniformBlockMatrix(Unchecked{}, std::move(a), std::move(b),
                            std::move(partition));
}

UniformBlockMatrix UniformBlockMatrix::identity(
    const PartitionVector& partition) {
  const int k = partition.num_blocks();
  return UniformBlockMatrix(Eigen::VectorXd::Ones(k),
                            Eigen::MatrixXd::Zero(k, k), partition);
}

bool UniformBlockMatrix::symmetric() const { return b_ == b_.transpose(); }

Eigen::MatrixXd UniformBlockMatrix::delta() const {
  Eigen::MatrixXd d = b_ * partition_.size_vector().asDiagonal();
  d.diagonal() += a_;
  return d;
}

Eigen::MatrixXd UniformBlockMatrix::symmetric_delta() const {
  const Eigen::VectorXd root = partition_.size_vector().cwiseSqrt();
  Eigen::MatrixXd d = root.asDiagonal() * b_ * root.asDiagonal();
  d.diagonal() += a_;
  return d;
}

bool UniformBlockMatrix::operator==(const UniformBlockMatrix& other) const {
  return partition_ == other.partition_ && a_ == other.a_ && b_ == other.b_;
}

UniformBlockMatrix from_dense(const Eigen::MatrixXd& m,
                              const PartitionVector& partition, double tol,
                              FromDenseMode mode) {
  const int p = partition.total();
  const int nb = partition.num_blocks();
  if (m.rows() != p || m.cols() != p) {
    throw Error(ErrorKind::DimensionMismatch,
                "matrix is " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + " but partition sums to " +
                    std::to_string(p));
  }

  Eigen::VectorXd a(nb);
  Eigen::MatrixXd b(nb, nb);

  if (mode == FromDenseMode::Project) {
    const BlockSummaries s = block_summaries(m, partition);
    for (int k = 0; k < nb; ++k) {
      const double pk = partition.size(k);
      const double off_mean = (s.sum(k, k) - s.trace(k)) / (pk * (pk - 1.0));
      b(k, k) = off_mean;
      a(k) = s.trace(k) / pk - off_mean;
      for (int l = k + 1; l < nb; ++l) {
        const double v = 0.5 * (s.sum(k, l) + s.sum(l, k)) /
                         (pk * partition.size(l));
        b(k, l) = v;
        b(l, k) = v;
      }
    }
    return UniformBlockMatrix(std::move(a), std::move(b), partition);
  }

  double worst = 0.0;
  int worst_r = 0;
  int worst_c = 0;
  auto note = [&](double dev, int r, int c) {
    if (dev > worst) {
      worst = dev;
      worst_r = r;
      worst_c = c;
    }
  };

  for (int k = 0; k < nb; ++k) {
    const int r0 = partition.offset(k);
    const int r1 = partition.offset(k + 1);
    for (int l = 0; l < nb; ++l) {
      const int c0 = partition.offset(l);
      const int c1 = partition.offset(l + 1);
      const double diag_ref = m(r0, c0);
      const double off_ref = (k == l) ? m(r0 + 1, c0) : m(r0, c0);
      for (int j = c0; j < c1; ++j) {
        for (int i = r0; i < r1; ++i) {
          const double ref = (k == l && i - r0 == j - c0) ? diag_ref : off_ref;
          note(std::abs(m(i, j) - ref), k, l);
          note(std::abs(m(i, j) - m(j, i)), k, l);
        }
      }
      if (k == l) {
        b(k, k) = off_ref;
        a(k) = diag_ref - off_ref;
      } else {
        b(k, l) = off_ref;
      }
    }
  }
  if (worst > tol) throw StructureViolation(worst, worst_r, worst_c);
  return UniformBlockMatrix(std::move(a), symmetrized(b), partition);
}

Eigen::MatrixXd to_dense(const UniformBlockMatrix& n) {
  const PartitionVector& part = n.partition();
  const int p = part.total();
  Eigen::MatrixXd m(p, p);
  for (int l = 0; l < part.num_blocks(); ++l) {
    for (int k = 0; k < part.num_blocks(); ++k) {
      m.block(part.offset(k), part.offset(l), part.size(k), part.size(l))
          .setConstant(n.b()(k, l));
    }
    for (int j = part.offset(l); j < part.offset(l + 1); ++j) {
      m(j, j) = n.a()(l) + n.b()(l, l);
    }
  }
  return m;
}

UniformBlockMatrix add(const UniformBlockMatrix& lhs,
                       const UniformBlockMatrix& rhs) {
  require_same_partition(lhs, rhs);
  return UniformBlockMatrix::general(lhs.a() + rhs.a(), lhs.b() + rhs.b(),
                                     lhs.partition());
}

UniformBlockMatrix subtract(const UniformBlockMatrix& lhs,
                            const UniformBlockMatrix& rhs) {
  require_same_partition(lhs, rhs);
  return UniformBlockMatrix::general(lhs.a() - rhs.a(), lhs.b() - rhs.b(),
                                     lhs.partition());
}

UniformBlockMatrix scale(const UniformBlockMatrix& n, double factor) {
  return UniformBlockMatrix::general(factor * n.a(), factor * n.b(),
                                     n.partition());
}

UniformBlockMatrix square(const UniformBlockMatrix& n) {
  const Eigen::VectorXd pv = n.partition().size_vector();
  const auto a = n.a().asDiagonal();
  Eigen::MatrixXd b = a * n.b() + n.b() * a + n.b() * pv.asDiagonal() * n.b();
  if (n.symmetric()) b = symmetrized(b);
  return UniformBlockMatrix::general(n.a().cwiseProduct(n.a()), std::move(b),
                                     n.partition());
}

UniformBlockMatrix multiply(const UniformBlockMatrix& lhs,
                            const UniformBlockMatrix& rhs) {
  require_same_partition(lhs, rhs);
  const Eigen::VectorXd pv = lhs.partition().size_vector();
  Eigen::MatrixXd b = lhs.a().asDiagonal() * rhs.b() +
                      lhs.b() * rhs.a().asDiagonal() +
                      lhs.b() * pv.asDiagonal() * rhs.b();
  return UniformBlockMatrix::general(lhs.a().cwiseProduct(rhs.a()),
                                     std::move(b), lhs.partition());
}

Eigen::VectorXd delta_eigenvalues(const UniformBlockMatrix& n) {
  if (!n.symmetric()) {
    throw Error(ErrorKind::NotSymmetric,
                "eigenvalues require a symmetric UB matrix");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      n.symmetric_delta(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

Eigen::VectorXd eigenvalues(const UniformBlockMatrix& n) {
  const Eigen::VectorXd d = delta_eigenvalues(n);
  Eigen::VectorXd out(n.dim());
  Eigen::Index pos = 0;
  for (int k = 0; k < n.num_blocks(); ++k) {
    for (int r = 0; r < n.partition().size(k) - 1; ++r) out(pos++) = n.a()(k);
  }
  out.tail(d.size()) = d;
  std::sort(out.begin(), out.end());
  return out;
}

LogDeterminant log_determinant(const UniformBlockMatrix& n) {
  const Eigen::MatrixXd delta = n.delta();
  const double scale = largest_scale(n, delta);
  require_nonzero_a(n, scale);

  LogDeterminant out;
  for (int k = 0; k < n.num_blocks(); ++k) {
    const double ak = n.a()(k);
    const int mult = n.partition().size(k) - 1;
    out.log_abs += mult * std::log(std::abs(ak));
    if (ak < 0.0 && mult % 2 == 1) out.sign = -out.sign;
  }

  if (n.symmetric()) {
    const Eigen::VectorXd d = delta_eigenvalues(n);
    for (Eigen::Index k = 0; k < d.size(); ++k) {
      if (std::abs(d(k)) <= kSingularTol * scale) {
        throw Error(ErrorKind::SingularMatrix, "Δ is singular");
      }
      out.log_abs += std::log(std::abs(d(k)));
      if (d(k) < 0.0) out.sign = -out.sign;
    }
    return out;
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(delta);
  const Eigen::VectorXd piv = lu.matrixLU().diagonal();
  for (Eigen::Index k = 0; k < piv.size(); ++k) {
    if (std::abs(piv(k)) <= kSingularTol * scale) {
      throw Error(ErrorKind::SingularMatrix, "Δ is singular");
    }
    out.log_abs += std::log(std::abs(piv(k)));
    if (piv(k) < 0.0) out.sign = -out.sign;
  }
  if (lu.permutationP().determinant() < 0) out.sign = -out.sign;
  return out;
}

UniformBlockMatrix inverse(const UniformBlockMatrix& n) {
  const Eigen::MatrixXd delta = n.delta();
  const double scale = largest_scale(n, delta);
  require_nonzero_a(n, scale);

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(delta);
  const Eigen::VectorXd piv = lu.matrixLU().diagonal();
  if (piv.cwiseAbs().minCoeff() <= kSingularTol * scale) {
    throw Error(ErrorKind::SingularMatrix, "Δ is singular");
  }

  const Eigen::VectorXd a_inv = n.a().cwiseInverse();
  Eigen::MatrixXd b_star = -lu.solve(n.b() * a_inv.asDiagonal());

  if (n.symmetric()) {
    const double asym = (b_star - b_star.transpose()).cwiseAbs().maxCoeff();
    const double mag = std::max(1.0, b_star.cwiseAbs().maxCoeff());
    if (asym > kAsymmetryTol * mag) {
      throw Error(ErrorKind::InternalConsistency,
                  "inverse coordinate matrix is not symmetric (asymmetry " +
                      std::to_string(asym) + ")");
    }
    return UniformBlockMatrix(a_inv, symmetrized(b_star), n.partition());
  }
  return UniformBlockMatrix::general(a_inv, std::move(b_star), n.partition());
}

bool is_positive_definite(const UniformBlockMatrix& n) {
  if ((n.a().array() <= 0.0).any()) return false;
  return (delta_eigenvalues(n).array() > 0.0).all();
}

BlockSummaries block_summaries(const Eigen::MatrixXd& m,
                               const PartitionVector& partition) {
  const int p = partition.total();
  if (m.rows() != p || m.cols() != p) {
    throw Error(ErrorKind::DimensionMismatch,
                "matrix dimension does not match partition total " +
                    std::to_string(p));
  }
  const std::vector<int> label = partition.labels();
  const int nb = partition.num_blocks();
  BlockSummaries out{Eigen::VectorXd::Zero(nb), Eigen::MatrixXd::Zero(nb, nb)};
  for (int j = 0; j < p; ++j) {
    const int l = label[static_cast<std::size_t>(j)];
    for (int i = 0; i < p; ++i) {
      out.sum(label[static_cast<std::size_t>(i)], l) += m(i, j);
    }
    out.trace(l) += m(j, j);
  }
  return out;
}

}  // namespace scfa
