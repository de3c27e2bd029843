#include "scfa/kernels.hpp"

#include "scfa/errors.hpp"

#include <string>

namespace scfa {

namespace {

constexpr Eigen::Index kRowChunk = 64;

void check_labels(const Eigen::MatrixXd& x, std::span<const int> labels,
                  int blocks, std::span<const double> weights) {
  if (static_cast<Eigen::Index>(labels.size()) != x.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                "membership covers " + std::to_string(labels.size()) +
                    " variables but data has " + std::to_string(x.cols()));
  }
  if (!weights.empty() && static_cast<int>(weights.size()) != blocks) {
    throw Error(ErrorKind::DimensionMismatch, "one weight per community");
  }
  for (int l : labels) {
    if (l < 0 || l >= blocks) {
      throw Error(ErrorKind::DimensionMismatch, "community label out of range");
    }
  }
}

void row_sums_chunk(const Eigen::MatrixXd& x, std::span<const int> labels,
                    std::span<const double> weights, Eigen::Index r0,
                    Eigen::Index r1, Eigen::MatrixXd& out) {
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const int k = labels[static_cast<std::size_t>(j)];
    const double w = weights.empty() ? 1.0 : weights[static_cast<std::size_t>(k)];
    const double* col = x.col(j).data();
    double* dst = out.col(k).data();
    if (weights.empty()) {
      for (Eigen::Index i = r0; i < r1; ++i) dst[i] += col[i];
    } else {
      for (Eigen::Index i = r0; i < r1; ++i) dst[i] += w * col[i];
    }
  }
}

double column_dot(const Eigen::MatrixXd& x, Eigen::Index a, Eigen::Index b) {
  const double* ca = x.col(a).data();
  const double* cb = x.col(b).data();
  double acc = 0.0;
  for (Eigen::Index r = 0; r < x.rows(); ++r) acc += ca[r] * cb[r];
  return acc;
}

BlockSummaries summaries_from_row_sums(const Eigen::MatrixXd& rows,
                                       const Eigen::VectorXd& squares,
                                       std::span<const int> labels, int blocks,
                                       double divisor) {
  BlockSummaries out{Eigen::VectorXd::Zero(blocks),
                     Eigen::MatrixXd::Zero(blocks, blocks)};
  for (std::size_t j = 0; j < labels.size(); ++j) {
    out.trace(labels[j]) += squares(static_cast<Eigen::Index>(j));
  }
  out.trace /= divisor;
  for (int k = 0; k < blocks; ++k) {
    for (int l = k; l < blocks; ++l) {
      const double v = column_dot(rows, k, l) / divisor;
      out.sum(k, l) = v;
      out.sum(l, k) = v;
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd community_row_sums(const Eigen::MatrixXd& x,
                                   std::span<const int> labels, int blocks,
                                   std::span<const double> weights) {
  check_labels(x, labels, blocks, weights);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.rows(), blocks);
  const Eigen::Index chunks = (x.rows() + kRowChunk - 1) / kRowChunk;
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < chunks; ++c) {
    const Eigen::Index r0 = c * kRowChunk;
    const Eigen::Index r1 = std::min(x.rows(), r0 + kRowChunk);
    row_sums_chunk(x, labels, weights, r0, r1, out);
  }
  return out;
}

Eigen::VectorXd column_sum_squares(const Eigen::MatrixXd& x) {
  Eigen::VectorXd out(x.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < x.cols(); ++j) out(j) = column_dot(x, j, j);
  return out;
}

Eigen::MatrixXd center_columns(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd out(x.rows(), x.cols());
  const double n = static_cast<double>(x.rows());
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double* src = x.col(j).data();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) acc += src[i];
    const double mean = acc / n;
    double* dst = out.col(j).data();
    for (Eigen::Index i = 0; i < x.rows(); ++i) dst[i] = src[i] - mean;
  }
  return out;
}

BlockSummaries data_block_summaries(const Eigen::MatrixXd& x,
                                    std::span<const int> labels, int blocks,
                                    double divisor) {
  const Eigen::MatrixXd rows = community_row_sums(x, labels, blocks);
  const Eigen::VectorXd squares = column_sum_squares(x);
  return summaries_from_row_sums(rows, squares, labels, blocks, divisor);
}

Eigen::MatrixXd cross_product(const Eigen::MatrixXd& x, double divisor) {
  const Eigen::Index p = x.cols();
  Eigen::MatrixXd s(p, p);
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double v = column_dot(x, i, j) / divisor;
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

namespace serial {

Eigen::MatrixXd community_row_sums(const Eigen::MatrixXd& x,
                                   std::span<const int> labels, int blocks,
                                   std::span<const double> weights) {
  check_labels(x, labels, blocks, weights);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.rows(), blocks);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const int k = labels[static_cast<std::size_t>(j)];
      const double w =
          weights.empty() ? 1.0 : weights[static_cast<std::size_t>(k)];
      out(i, k) += weights.empty() ? x(i, j) : w * x(i, j);
    }
  }
  return out;
}

Eigen::MatrixXd cross_product(const Eigen::MatrixXd& x, double divisor) {
  const Eigen::Index p = x.cols();
  Eigen::MatrixXd s(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      double acc = 0.0;
      for (Eigen::Index r = 0; r < x.rows(); ++r) acc += x(r, i) * x(r, j);
      s(i, j) = acc / divisor;
    }
  }
  return s;
}

BlockSummaries data_block_summaries(const Eigen::MatrixXd& x,
                                    std::span<const int> labels, int blocks,
                                    double divisor) {
  check_labels(x, labels, blocks, {});
  const Eigen::MatrixXd s = cross_product(x, divisor);
  BlockSummaries out{Eigen::VectorXd::Zero(blocks),
                     Eigen::MatrixXd::Zero(blocks, blocks)};
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    const int k = labels[static_cast<std::size_t>(i)];
    out.trace(k) += s(i, i);
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
      out.sum(k, labels[static_cast<std::size_t>(j)]) += s(i, j);
    }
  }
  return out;
}

}  // namespace serial
}  // namespace scfa
