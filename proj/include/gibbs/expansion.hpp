#pragma once

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "gibbs/cumulants.hpp"

namespace gibbs {

enum class FactorKind { Gibbs, Cumulant };

/// One tensor factor of an expansion term: rho_size or Delta_size.
struct Factor {
  FactorKind kind = FactorKind::Gibbs;
  int size = 1;

  friend bool operator==(const Factor&, const Factor&) = default;
};

struct ExpansionTerm {
  std::vector<Factor> factors;
  double weight_norm = 1.0;  ///< product of ||Delta||_1 over cumulant factors

  int total_sites() const;
  bool has_cumulant() const;
};

/// Truncated boundary expansion of rho_N for a chain split into two halves of
/// M sites: rho_M (x) rho_M plus every placement of Delta_k (2 <= k <= cutoff)
/// that straddles the central cut, padded by Gibbs states on either side.
class Expansion {
 public:
  Model model() const noexcept { return model_; }
  double beta() const noexcept { return beta_; }
  int n_sites() const noexcept { return n_; }
  int cluster_size() const noexcept { return m_; }
  int cutoff() const noexcept { return cutoff_; }
  int cap() const noexcept { return cap_; }
  const std::vector<ExpansionTerm>& terms() const noexcept { return terms_; }
  double lambda() const noexcept { return lambda_; }

  const DensityOperator& gibbs_factor(int size) const;
  const Cumulant& cumulant_factor(int size) const;
  const Matrix& factor_matrix(const Factor& f) const;

  /// Dense operator of a single term.
  Matrix term_matrix(std::size_t index) const;

  friend Expansion refined_expansion(Model, int, int, int, double, int);

 private:
  Model model_ = Model::XY;
  double beta_ = 0.0;
  int n_ = 0;
  int m_ = 0;
  int cutoff_ = 0;
  int cap_ = kDefaultDenseCap;
  std::vector<ExpansionTerm> terms_;
  double lambda_ = 1.0;
  std::vector<std::shared_ptr<const DensityOperator>> gibbs_;  // index = size
  std::vector<std::shared_ptr<const Cumulant>> cumulants_;     // index = size
};

/// Number of ways Delta_k can straddle the cut between two M-site halves.
int placement_count(int cluster_size, int k);

/// Requires N = 2M and 1 <= cutoff <= min(2M, cap). cutoff = 1 keeps only the
/// leading term. Terms for each k are ordered by decreasing overlap with the
/// left half.
Expansion refined_expansion(Model model, int n, int cluster_size, int cutoff, double beta,
                            int cap = kDefaultDenseCap);

/// Expansion at reporting order k: order 1 is the leading term, order k adds
/// every straddling Delta up to size k.
Expansion expansion_at_order(Model model, int n, int cluster_size, int order, double beta,
                             int cap = kDefaultDenseCap);

/// 1 + sum of weight norms of cumulant-bearing terms.
double negativity(const Expansion& e);

struct BiasBound {
  double value = 0.0;
  bool complete = true;       ///< false when some Delta_m with m <= N exceeded the cap
  int largest_included = 0;   ///< largest m that entered the sum
};

/// ||O|| * sum_{m = cutoff+1}^{N} placements(m) * ||Delta_m||_1, where the
/// placement count min(m-1, ...) drops placements that would leave the chain.
BiasBound bias_bound(const Expansion& e, double observable_norm);

/// Sum of all term operators.
DensityOperator assemble_dense(const Expansion& e);

/// Sum over terms of Tr[term O] for a Hermitian observable.
double expectation_deterministic(const Expansion& e, const Matrix& observable);

/// Sum over terms of Tr[term O] for any observable.
cplx trace_against(const Expansion& e, const Matrix& observable);

/// Tr[term_i O].
cplx term_trace(const Expansion& e, std::size_t term_index, const Matrix& observable);

/// Reporting name of a factor list, e.g. "rho1 x Delta2 x rho1".
std::string describe(const ExpansionTerm& term);

nlohmann::json to_json(const Expansion& e);

/// Sizes of the chain regions in the shielded-observable setting: A holds the
/// observable, B shields it, C is the remainder.
struct RegionSizes {
  int a = 1;
  int b = 1;
  int c = 1;
  int total() const { return a + b + c; }
};

/// Tr[rho_AB O_A] plus every cumulant correction Delta_k (k <= max_correction)
/// whose support touches A, crosses B and reaches into C. Converges to
/// Tr[rho_ABC O_A] once max_correction covers the whole chain.
double local_observable_with_corrections(Model model, const RegionSizes& regions,
                                         const Matrix& observable_a, double beta,
                                         int max_correction, int cap = kDefaultDenseCap);

}  // namespace gibbs
