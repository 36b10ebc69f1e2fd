#pragma once

#include <cstddef>
#include <vector>

#include "gibbs/expansion.hpp"

namespace gibbs {

/// Eigenstate drawn for one tensor factor. For Gibbs factors state_index is a
/// computational label of the factor's eigenbasis; for cumulant factors it
/// indexes the cumulant's ascending eigenvalues.
struct FactorDraw {
  Factor factor;
  int state_index = 0;
  int sign = 1;
};

/// One draw from the quasi-distribution: a term and a product eigenstate.
struct SampleOutcome {
  std::size_t term_index = 0;
  std::vector<int> factor_state_indices;
  int sign = 1;  ///< product of the signs of sampled cumulant eigenvalues
  std::vector<FactorDraw> prepared_state;
};

}  // namespace gibbs
