#pragma once

#include <complex>
#include <span>

#include <Eigen/Dense>

namespace gibbs {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kDefaultDenseCap = 12;

/// Hilbert-space dimension of n spin-1/2 sites.
inline Eigen::Index dimension(int n_sites) { return Eigen::Index{1} << n_sites; }

/// Throws DimensionCapError when n_sites > cap.
void require_dense_cap(int n_sites, int cap);

/// A (x) B with A on the leading (most significant) sites.
Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);

/// Kronecker product of a list of factors, left to right. Empty list gives [1].
Matrix kron_all(std::span<const Matrix> factors);

Matrix identity(int n_sites);

/// Z on one site of an n-site register (site 0 is the most significant bit).
Matrix z_operator(int n_sites, int site);

/// Tr[A B] without forming the product.
cplx trace_product(const Matrix& a, const Matrix& b);

/// Traces out the trailing n_traced sites of an operator on n_kept + n_traced sites.
Matrix partial_trace_tail(const Matrix& op, int n_kept, int n_traced);

/// Largest entrywise modulus of A - A^dagger.
double hermiticity_defect(const Matrix& a);

double max_abs(const Matrix& a);

/// Bit of `site` in a computational basis index on n sites.
inline int site_bit(Eigen::Index index, int n_sites, int site) {
  return static_cast<int>((index >> (n_sites - 1 - site)) & 1);
}

}  // namespace gibbs
