#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gibbs/linalg.hpp"

namespace gibbs {

enum class Axis { X, Y, Z };

/// Chain models with built-in constructors. Custom marks user-assembled term lists.
enum class Model { XY, Heisenberg, Custom };

std::string to_string(Model model);
/// Accepts "xy", "heisenberg" and "custom" (case-insensitive).
Model parse_model(std::string_view name);

struct PauliFactor {
  int site = 0;
  Axis axis = Axis::Z;

  friend bool operator==(const PauliFactor&, const PauliFactor&) = default;
  friend auto operator<=>(const PauliFactor&, const PauliFactor&) = default;
};

/// coefficient * (product of single-site Paulis). Sites strictly increasing.
struct PauliString {
  std::vector<PauliFactor> factors;
  double coefficient = 1.0;

  int first_site() const { return factors.front().site; }
  int last_site() const { return factors.back().site; }

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend auto operator<=>(const PauliString&, const PauliString&) = default;
};

/// Weighted Pauli-string sum on an open chain of n_sites sites. Couplings are
/// in units of J = 1. Immutable after construction.
class Hamiltonian {
 public:
  Hamiltonian(int n_sites, std::vector<PauliString> terms, Model model = Model::Custom);

  int n_sites() const noexcept { return n_sites_; }
  Model model() const noexcept { return model_; }
  const std::vector<PauliString>& terms() const noexcept { return terms_; }

  /// True when every term is supported on a single site or a pair (i, i+1).
  bool is_nearest_neighbor() const;

  /// Terms grouped by the bond (i, i+1) they act on, index i = 0..n-2.
  /// Throws if the Hamiltonian is not nearest-neighbor.
  std::vector<std::vector<PauliString>> bond_terms() const;

 private:
  int n_sites_;
  std::vector<PauliString> terms_;
  Model model_;
};

/// Open chain with n-1 bonds: XY bonds are XX + YY, Heisenberg adds ZZ.
Hamiltonian build_chain(Model model, int n);

/// Bonds fully inside [start, start + length), re-based to site 0.
Hamiltonian subchain(const Hamiltonian& h, int start, int length);

/// Dense 2^n x 2^n matrix of a single Pauli string on n sites.
Matrix to_dense(const PauliString& term, int n_sites);

Matrix to_dense(const Hamiltonian& h, int cap = kDefaultDenseCap);

/// Total magnetization sum_i Z_i.
Matrix total_magnetization(int n_sites);

}  // namespace gibbs
