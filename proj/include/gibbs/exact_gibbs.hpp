#pragma once

#include "gibbs/hamiltonian.hpp"
#include "gibbs/linalg.hpp"

namespace gibbs {

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending, eigenvectors as columns.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Matrix eigenvectors;

  /// Dense Hermitian eigensolve.
  static SpectralDecomposition of(const Matrix& hermitian);

  /// Eigensolve block by block in sectors of fixed magnetization (popcount of
  /// the basis index). Every eigenvector then has a definite excitation number.
  /// Throws DataIntegrityError if the operator couples different sectors by
  /// more than 1e-12. Real operators produce real eigenvectors.
  static SpectralDecomposition by_magnetization(const Matrix& hermitian, int n_sites);

  Matrix reconstruct() const;
  Eigen::Index size() const { return eigenvalues.size(); }
};

enum class TraceTag { Unit, Zero, Other };

/// Dense Hermitian operator on n_sites sites with an expected trace.
/// Construction checks Hermiticity (1e-12) and the trace tag (1e-10).
class DensityOperator {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kEigenvalueFloor = -1e-10;

  DensityOperator(Matrix matrix, int n_sites, TraceTag tag);

  const Matrix& matrix() const noexcept { return matrix_; }
  int n_sites() const noexcept { return n_sites_; }
  TraceTag trace_tag() const noexcept { return tag_; }
  cplx trace() const { return matrix_.trace(); }

  /// Throws DataIntegrityError if an eigenvalue lies below the -1e-10 floor.
  void require_positive() const;

 private:
  Matrix matrix_;
  int n_sites_;
  TraceTag tag_;
};

/// Energies, eigenvectors and Boltzmann weights of a Hamiltonian at one beta.
struct ThermalSpectrum {
  SpectralDecomposition spectrum;
  Eigen::VectorXd weights;  ///< e^{-beta E_n} / Z
  double log_partition = 0.0;
};

ThermalSpectrum thermal_spectrum(const Hamiltonian& h, double beta, int cap = kDefaultDenseCap);

/// e^{-beta H} / Tr e^{-beta H} built from the eigendecomposition of H.
DensityOperator gibbs_state(const Hamiltonian& h, double beta, int cap = kDefaultDenseCap);

double partition_function(const Hamiltonian& h, double beta, int cap = kDefaultDenseCap);

/// Schatten-1 norm (sum of absolute eigenvalues) of a Hermitian matrix.
double trace_norm(const Matrix& hermitian);
double trace_norm(const DensityOperator& op);

/// Tr[rho O]. O need not be Hermitian.
cplx expectation(const DensityOperator& rho, const Matrix& observable);

/// Tr[rho O] for Hermitian O. Throws if the imaginary part exceeds 1e-10.
double real_expectation(const DensityOperator& rho, const Matrix& observable);

}  // namespace gibbs
