#pragma once

#include <variant>
#include <vector>

#include "json.hpp"

#include "gibbs/hamiltonian.hpp"
#include "gibbs/linalg.hpp"
#include "gibbs/sample_outcome.hpp"

namespace gibbs {

struct PauliXGate {
  int site = 0;
};

struct PauliZGate {
  int site = 0;
};

/// exp(-i theta (XY - YX)) on sites (site, site + 1). Fixes |00>, |11> and
/// rotates |10> -> cos(2 theta)|10> + sin(2 theta)|01>.
struct GivensGate {
  int site = 0;
  double theta = 0.0;
};

/// |k> -> exp(i phases[k]) |k> over the full register.
struct DiagonalPhaseGate {
  std::vector<double> phases;
};

using Gate = std::variant<PauliXGate, PauliZGate, GivensGate, DiagonalPhaseGate>;

class Circuit {
 public:
  explicit Circuit(int n_qubits);

  int n_qubits() const noexcept { return n_qubits_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  std::size_t size() const noexcept { return gates_.size(); }
  std::size_t givens_count() const;

  /// Validates sites (and phase-vector length) against the register.
  Circuit& add(Gate gate);

  /// Appends `other` with every site shifted by `offset`. Diagonal phases are
  /// only accepted when `other` spans the whole register.
  Circuit& append(const Circuit& other, int offset = 0);

  Circuit inverse() const;

  /// Dense unitary, column k = circuit applied to |k>.
  Matrix unitary() const;

 private:
  int n_qubits_;
  std::vector<Gate> gates_;
};

class Statevector {
 public:
  explicit Statevector(Vector amplitudes);
  static Statevector basis(int n_qubits, Eigen::Index index);

  int n_qubits() const noexcept { return n_qubits_; }
  const Vector& amplitudes() const noexcept { return amps_; }
  double norm() const { return amps_.norm(); }

  void apply(const Gate& gate);
  void apply(const Circuit& circuit);
  void apply_z(int site);

 private:
  Vector amps_;
  int n_qubits_;
};

/// 4x4 Givens matrix in the basis |00>, |01>, |10>, |11>.
Eigen::Matrix4cd givens_matrix(double theta);

/// Givens rotation between sites p < q of an n-site register (q need not be p+1).
Matrix givens_dense(int n_sites, int p, int q, double theta);

/// Single-excitation block of the XY chain, 2 on the off-diagonals.
Eigen::MatrixXd xy_single_particle_hamiltonian(int n);

struct JacobiResult {
  Eigen::VectorXd eigenvalues;  ///< ascending
  Eigen::MatrixXd eigenvectors;  ///< columns, first non-negligible entry positive
  int sweeps = 0;
};

/// Cyclic Jacobi eigensolver for real symmetric matrices; sweeps left to right
/// until every off-diagonal entry is below `tol`.
JacobiResult jacobi_eigen(const Eigen::MatrixXd& symmetric, double tol = 1e-12);

/// Eigenbasis network of the free-fermion XY chain.
struct XYEigenbasis {
  Circuit circuit;
  Eigen::VectorXd mode_energies;   ///< single-particle energies, ascending
  Eigen::VectorXd label_energies;  ///< energy of circuit column k
};

XYEigenbasis xy_eigenbasis(int n);

/// Circuit of at most n(n-1)/2 Givens gates (plus Z sign fixes) whose
/// unitary columns are eigenstates of H_n. XY only.
Circuit eigenbasis_network(Model model, int n);

/// W^dagger, exp(-i E_k t) phases, W: equals exp(-i H_n t). XY only.
Circuit time_evolution_circuit(Model model, int n, double t);

/// Loads a real vector with a single excitation (or a single hole) into an
/// n-qubit register starting from |0...0>.
Circuit load_sector_state(const Vector& target, int n_qubits);

/// X gates setting the computational labels, followed by per-factor eigenbasis
/// networks (Gibbs factors) or sector loaders (cumulant factors).
Circuit prepare_product_state_circuit(const Expansion& e, const SampleOutcome& outcome);

/// <psi| U^dagger Z_i U Z_j |psi> evaluated as <chi|Z_i|phi> with chi = U psi
/// and phi = U Z_j psi.
cplx corr_value(const Statevector& psi, int i, int j, const Circuit& evolution);

enum class GroupKind { Squared, Adjacent, Disjoint };

/// One group of H^2 = sum_b h_b^2 + sum {h_b, h_b+1} + sum_{|b-c|>1} {h_b, h_c}.
struct MeasurementGroup {
  GroupKind kind = GroupKind::Squared;
  int first_bond = 0;
  int second_bond = 0;
  /// Site pairs conjugated by a Givens rotation at `theta` before measuring.
  std::vector<std::pair<int, int>> givens_pairs;
  double theta = 0.0;
};

std::vector<MeasurementGroup> h_squared_groups(const Hamiltonian& h);

/// h_b^2 or {h_b, h_c} as a dense operator on the full chain.
Matrix group_operator(const Hamiltonian& h, const MeasurementGroup& group,
                      int cap = kDefaultDenseCap);

/// Product of the group's Givens rotations on the full chain.
Matrix group_conjugation(int n_sites, const MeasurementGroup& group);

std::string to_string(GroupKind kind);

nlohmann::json to_json(const Circuit& circuit);

}  // namespace gibbs
