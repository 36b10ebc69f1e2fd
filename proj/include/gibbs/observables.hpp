#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gibbs/expansion.hpp"
#include "gibbs/hamiltonian.hpp"

namespace gibbs {

/// C_ij(t) = <Z_i(t) Z_j(0)> on a time grid. Sites are 0-based.
struct CorrelationTensor {
  int n_sites = 0;
  std::vector<double> times;
  double beta = 0.0;
  std::string label;
  std::vector<cplx> values;            ///< index (i * n + j) * T + k
  std::vector<double> stderr_real;     ///< sampled sources only
  std::vector<double> stderr_imag;

  std::size_t index(int i, int j, std::size_t k) const {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(n_sites) +
            static_cast<std::size_t>(j)) * times.size() + k;
  }
  cplx at(int i, int j, std::size_t k) const { return values[index(i, j, k)]; }
  double max_deviation(const CorrelationTensor& other) const;
};

/// `steps` evenly spaced points on [0, t_max].
std::vector<double> time_grid(double t_max = 5.0, int steps = 51);

/// Tr[rho U^dagger Z_i U Z_j] with rho = e^{-beta H}/Z, evaluated densely.
CorrelationTensor correlation_matrix(const Hamiltonian& h, double beta,
                                     std::span<const double> times);

/// Sum over terms and product eigenstates of (signed eigen-weight) x corr_value,
/// each state prepared by its Givens circuit. XY only.
CorrelationTensor correlation_matrix(const Expansion& e, std::span<const double> times);

struct SamplerConfig {
  std::uint64_t shots = 4000;
  std::uint64_t seed = 0;
};

/// Monte Carlo estimate of the expansion's correlation tensor. Every shot
/// draws one product state and evaluates all (i, j, t) cells on it.
CorrelationTensor correlation_matrix(const Expansion& e, std::span<const double> times,
                                     const SamplerConfig& config);

struct StructureFactorSlice {
  double q = 0.0;
  std::vector<double> omegas;
  std::vector<double> values;
};

/// `points` frequencies spanning +-(2 pi / dt) / 4.
std::vector<double> omega_grid(double dt, int points = 201);

/// S(Q, w) = dt/(2 pi) sum_k e^{-i w t_k} (1/N) sum_ij C_ij(t_k) e^{-i Q (i-j)}
/// over the grid mirrored to negative times with S_Q(-t) = conj(S_Q(t)).
StructureFactorSlice structure_factor(const CorrelationTensor& c, double q,
                                      std::span<const double> omegas);

/// <H> and <H^2> for an assembled source.
struct EnergyMoments {
  double mean = 0.0;
  double second = 0.0;       ///< via the grouped H^2 decomposition
  double second_dense = 0.0;  ///< via the dense square of H
};

EnergyMoments energy_moments(const Hamiltonian& h, const DensityOperator& rho);
EnergyMoments energy_moments(const Expansion& e);

/// (beta^2 / n) (<H^2> - <H>^2) of the exact Gibbs state. beta must be > 0.
double specific_heat(Model model, int n, double beta, int cap = kDefaultDenseCap);

/// Same, evaluated term by term on the expansion.
double specific_heat(const Expansion& e);

}  // namespace gibbs
