#include "gibbs/linalg.hpp"

#include <cmath>

#include "gibbs/error.hpp"

namespace gibbs {

void require_dense_cap(int n_sites, int cap) {
  if (n_sites > cap) throw DimensionCapError(n_sites, cap);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

Matrix kron_all(std::span<const Matrix> factors) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

Matrix identity(int n_sites) {
  return Matrix::Identity(dimension(n_sites), dimension(n_sites));
}

Matrix z_operator(int n_sites, int site) {
  if (site < 0 || site >= n_sites) {
    throw InvalidArgument("site " + std::to_string(site) + " out of range");
  }
  const auto dim = dimension(n_sites);
  Matrix z = Matrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    z(k, k) = site_bit(k, n_sites, site) ? -1.0 : 1.0;
  }
  return z;
}

cplx trace_product(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw InvalidArgument("trace_product: dimension mismatch");
  }
  // Tr[AB] = sum_ij A_ij B_ji
  return (a.array() * b.transpose().array()).sum();
}

Matrix partial_trace_tail(const Matrix& op, int n_kept, int n_traced) {
  const auto keep = dimension(n_kept);
  const auto tr = dimension(n_traced);
  if (op.rows() != keep * tr || op.cols() != keep * tr) {
    throw InvalidArgument("partial_trace_tail: dimension mismatch");
  }
  Matrix out = Matrix::Zero(keep, keep);
  for (Eigen::Index i = 0; i < keep; ++i) {
    for (Eigen::Index j = 0; j < keep; ++j) {
      cplx s = 0.0;
      for (Eigen::Index k = 0; k < tr; ++k) s += op(i * tr + k, j * tr + k);
      out(i, j) = s;
    }
  }
  return out;
}

double hermiticity_defect(const Matrix& a) {
  if (a.rows() != a.cols()) return INFINITY;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

}  // namespace gibbs
