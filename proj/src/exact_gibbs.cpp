#include "gibbs/exact_gibbs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "gibbs/error.hpp"

namespace gibbs {

SpectralDecomposition SpectralDecomposition::of(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian);
  if (solver.info() != Eigen::Success) throw DataIntegrityError("eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

SpectralDecomposition SpectralDecomposition::by_magnetization(const Matrix& hermitian,
                                                              int n_sites) {
  const auto dim = dimension(n_sites);
  if (hermitian.rows() != dim || hermitian.cols() != dim) {
    throw InvalidArgument("by_magnetization: dimension mismatch");
  }
  std::vector<std::vector<Eigen::Index>> sectors(static_cast<std::size_t>(n_sites) + 1);
  for (Eigen::Index k = 0; k < dim; ++k) {
    sectors[static_cast<std::size_t>(std::popcount(static_cast<std::uint64_t>(k)))].push_back(k);
  }
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      if (std::popcount(static_cast<std::uint64_t>(r)) !=
              std::popcount(static_cast<std::uint64_t>(c)) &&
          std::abs(hermitian(r, c)) > 1e-12) {
        throw DataIntegrityError("operator does not conserve magnetization");
      }
    }
  }
  const bool real = hermitian.imag().cwiseAbs().maxCoeff() < 1e-14;

  std::vector<double> values;
  std::vector<Vector> vectors;
  values.reserve(static_cast<std::size_t>(dim));
  vectors.reserve(static_cast<std::size_t>(dim));
  for (const auto& idx : sectors) {
    const auto d = static_cast<Eigen::Index>(idx.size());
    Matrix block(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) block(a, b) = hermitian(idx[a], idx[b]);
    }
    Eigen::VectorXd evals;
    Matrix evecs;
    if (real) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block.real());
      evals = solver.eigenvalues();
      evecs = solver.eigenvectors().cast<cplx>();
    } else {
      Eigen::SelfAdjointEigenSolver<Matrix> solver(block);
      evals = solver.eigenvalues();
      evecs = solver.eigenvectors();
    }
    for (Eigen::Index a = 0; a < d; ++a) {
      Vector full = Vector::Zero(dim);
      for (Eigen::Index b = 0; b < d; ++b) full(idx[b]) = evecs(b, a);
      values.push_back(evals(a));
      vectors.push_back(std::move(full));
    }
  }

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  SpectralDecomposition out{Eigen::VectorXd(dim), Matrix(dim, dim)};
  for (Eigen::Index k = 0; k < dim; ++k) {
    out.eigenvalues(k) = values[order[static_cast<std::size_t>(k)]];
    out.eigenvectors.col(k) = vectors[order[static_cast<std::size_t>(k)]];
  }
  return out;
}

Matrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<cplx>().asDiagonal() * eigenvectors.adjoint();
}

DensityOperator::DensityOperator(Matrix matrix, int n_sites, TraceTag tag)
    : matrix_(std::move(matrix)), n_sites_(n_sites), tag_(tag) {
  if (matrix_.rows() != dimension(n_sites) || matrix_.cols() != dimension(n_sites)) {
    throw InvalidArgument("density operator dimension does not match site count");
  }
  if (hermiticity_defect(matrix_) > kHermitianTol) {
    throw DataIntegrityError("density operator is not Hermitian");
  }
  const cplx tr = matrix_.trace();
  if (tag_ == TraceTag::Unit && std::abs(tr - 1.0) > kTraceTol) {
    throw DataIntegrityError("state does not have unit trace");
  }
  if (tag_ == TraceTag::Zero && std::abs(tr) > kTraceTol) {
    throw DataIntegrityError("cumulant is not traceless");
  }
}

void DensityOperator::require_positive() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < kEigenvalueFloor) {
    throw DataIntegrityError("state has an eigenvalue below the positivity floor");
  }
}

ThermalSpectrum thermal_spectrum(const Hamiltonian& h, double beta, int cap) {
  if (!(beta >= 0.0)) throw InvalidArgument("beta must be non-negative");
  auto spectrum = SpectralDecomposition::of(to_dense(h, cap));
  const double e0 = spectrum.eigenvalues.minCoeff();
  Eigen::VectorXd w = (-beta * (spectrum.eigenvalues.array() - e0)).exp();
  const double shifted_z = w.sum();
  w /= shifted_z;
  return {std::move(spectrum), std::move(w), std::log(shifted_z) - beta * e0};
}

DensityOperator gibbs_state(const Hamiltonian& h, double beta, int cap) {
  if (beta == 0.0) {
    require_dense_cap(h.n_sites(), cap);
    return DensityOperator(identity(h.n_sites()) / static_cast<double>(dimension(h.n_sites())), h.n_sites(),
                           TraceTag::Unit);
  }
  const auto thermal = thermal_spectrum(h, beta, cap);
  const auto& v = thermal.spectrum.eigenvectors;
  Matrix rho = v * thermal.weights.cast<cplx>().asDiagonal() * v.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityOperator(std::move(rho), h.n_sites(), TraceTag::Unit);
}

double partition_function(const Hamiltonian& h, double beta, int cap) {
  return std::exp(thermal_spectrum(h, beta, cap).log_partition);
}

double trace_norm(const Matrix& hermitian) {
  if (hermitian.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

double trace_norm(const DensityOperator& op) { return trace_norm(op.matrix()); }

cplx expectation(const DensityOperator& rho, const Matrix& observable) {
  if (observable.rows() != rho.matrix().rows() || observable.cols() != rho.matrix().cols()) {
    throw InvalidArgument("expectation: observable dimension does not match state");
  }
  return trace_product(rho.matrix(), observable);
}

double real_expectation(const DensityOperator& rho, const Matrix& observable) {
  const cplx v = expectation(rho, observable);
  if (hermiticity_defect(observable) > 1e-10 * std::max(1.0, max_abs(observable)) || std::abs(v.imag()) > 1e-10) {
    throw InvalidArgument("real_expectation: observable is not Hermitian");
  }
  return v.real();
}

}  // namespace gibbs
