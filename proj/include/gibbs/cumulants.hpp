#pragma once

#include <map>
#include <memory>
#include <vector>

#include "gibbs/exact_gibbs.hpp"
#include "gibbs/hamiltonian.hpp"

namespace gibbs {

/// Ordered partition of `total()` contiguous sites into blocks of the given sizes.
struct Composition {
  std::vector<int> parts;

  int total() const;
  friend bool operator==(const Composition&, const Composition&) = default;
};

/// All 2^(N-1) compositions of N, ordered by descending parts lexicographically:
/// (3), (2,1), (1,2), (1,1,1).
std::vector<Composition> compositions(int n);

/// Connected correlation operator Delta_m of an m-site cluster, with its
/// eigendecomposition and trace norm. Delta_1 is the single-site Gibbs state.
class Cumulant {
 public:
  Cumulant(int size, DensityOperator op);

  int size() const noexcept { return size_; }
  const DensityOperator& op() const noexcept { return op_; }
  const Matrix& matrix() const noexcept { return op_.matrix(); }
  const SpectralDecomposition& spectral() const noexcept { return spectral_; }
  double norm1() const noexcept { return norm1_; }

  /// Delta = scale * (positive - negative) with positive/negative unit-trace
  /// states built from the positive and negated negative eigenvalues.
  /// For a traceless operator scale = norm1 / 2.
  struct SignedSplit {
    double scale = 0.0;
    Matrix positive;
    Matrix negative;
  };
  SignedSplit signed_split() const;

 private:
  int size_;
  DensityOperator op_;
  SpectralDecomposition spectral_;
  double norm1_;
};

/// Gibbs state of the m-site built-in chain; memoized on (model, m, bits of beta).
std::shared_ptr<const DensityOperator> cluster_gibbs_state(Model model, int m, double beta,
                                                           int cap = kDefaultDenseCap);

/// Delta_m via the recursive definition; memoized on (model, m, bits of beta).
std::shared_ptr<const Cumulant> cumulant(Model model, int m, double beta,
                                         int cap = kDefaultDenseCap);

/// Delta_m = rho_m minus the sum over every composition with >= 2 parts of the
/// tensor product of lower cumulants, evaluated term by term.
Matrix cumulant_by_composition_sum(Model model, int m, double beta, int cap = kDefaultDenseCap);

/// Delta_m = sum over compositions c of (-1)^(|c|-1) (x)_p rho_p.
Matrix cumulant_by_alternating_sum(Model model, int m, double beta, int cap = kDefaultDenseCap);

/// Sum over all compositions of n of the tensor product of cumulants. Equals rho_n.
Matrix telescoped_state(Model model, int n, double beta, int cap = kDefaultDenseCap);

/// Drops every memoized state and cumulant.
void clear_cluster_cache();

/// Sorted list of site indices on a 1-D chain.
using Cluster = std::vector<int>;

/// True when the sites form one contiguous segment.
bool is_connected(const Cluster& cluster);

/// Inclusion-exclusion weight W(c) = P(c) - sum over proper non-empty
/// subclusters s of W(s). `values` must hold P for the cluster and every
/// non-empty subset of its sites; a missing entry throws InvalidArgument.
double lce_weight(const std::map<Cluster, double>& values, const Cluster& cluster);

}  // namespace gibbs
