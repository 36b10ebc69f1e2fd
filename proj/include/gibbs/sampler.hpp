#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "json.hpp"

#include "gibbs/expansion.hpp"
#include "gibbs/sample_outcome.hpp"

namespace gibbs {

/// Random stream for one shot. The stream is a pure function of
/// (seed, shot index), so shots can run in any order or concurrently.
class ShotRng {
 public:
  ShotRng(std::uint64_t seed, std::uint64_t shot);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

 private:
  std::mt19937_64 engine_;
};

/// Draws an index from an unnormalized cumulative table.
std::size_t draw_index(std::span<const double> cumulative, double u);

/// Eigen-data of one factor as the sampler sees it: a probability per
/// eigenstate, the sign of its eigenvalue, and the eigenvectors as columns.
struct FactorSpectrum {
  Factor factor;
  std::vector<double> probabilities;
  std::vector<int> signs;
  Matrix basis;
  std::vector<double> cumulative;
};

/// Quasi-distribution over the terms and product eigenstates of an expansion.
/// For XY chains the Gibbs-factor eigenbasis is the Givens network's columns,
/// so every sampled state has a preparation circuit.
class QuasiSampler {
 public:
  explicit QuasiSampler(const Expansion& e);

  const Expansion& expansion() const noexcept { return *e_; }
  double lambda() const noexcept { return e_->lambda(); }

  /// Probability of each term: weight_norm / lambda.
  const std::vector<double>& term_probabilities() const noexcept { return term_prob_; }

  std::size_t sample_term(ShotRng& rng) const;
  SampleOutcome sample_state(std::size_t term_index, ShotRng& rng) const;
  SampleOutcome sample(ShotRng& rng) const;

  const FactorSpectrum& spectrum(const Factor& f) const;

  /// Index of the product eigenstate in the term's Kronecker basis.
  Eigen::Index product_index(const SampleOutcome& outcome) const;

  /// Dense product eigenstate of an outcome.
  Vector product_state(const SampleOutcome& outcome) const;

  /// Kronecker product of the factor eigenbases of a term (columns = product states).
  Matrix term_basis(std::size_t term_index) const;

  /// Probability and sign of every product state of a term, in product-index order.
  void enumerate_term(std::size_t term_index, std::vector<double>& probs,
                      std::vector<int>& signs) const;

 private:
  std::shared_ptr<const Expansion> e_;
  std::vector<double> term_prob_;
  std::vector<double> term_cumulative_;
  std::vector<FactorSpectrum> gibbs_;     // index = size
  std::vector<FactorSpectrum> cumulant_;  // index = size
};

struct EstimatorReport {
  double mean = 0.0;
  double standard_error = 0.0;  ///< sample standard deviation / sqrt(shots)
  std::uint64_t shots = 0;
  double lambda = 1.0;
  std::uint64_t seed = 0;
  double second_moment = 0.0;   ///< mean of the squared per-shot values

  friend bool operator==(const EstimatorReport&, const EstimatorReport&) = default;
};

nlohmann::json to_json(const EstimatorReport& report);

enum class SamplingMode {
  Full,        ///< sample the term, then one eigenstate per factor
  Stratified,  ///< sample the term only; average its product states exactly
};

/// Commutative accumulator of per-shot values.
struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t count = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  void merge(const Moments& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    count += o.count;
  }
};

EstimatorReport make_report(const Moments& m, double lambda, std::uint64_t seed);

/// Unbiased estimator of Tr[rho' O] for the expansion rho'. Each shot
/// contributes lambda * sign * <psi|O|psi>. Deterministic in `seed`.
EstimatorReport estimate(const Expansion& e, const Matrix& observable, std::uint64_t shots,
                         std::uint64_t seed, SamplingMode mode = SamplingMode::Full);

/// Shots are split into this many fixed chunks, merged in chunk order, so the
/// result does not depend on the worker count.
inline constexpr std::uint64_t kShotChunks = 64;

/// Runs `per_chunk(chunk, first_shot, last_shot)` for every chunk on the
/// available hardware threads.
void for_each_chunk(std::uint64_t shots,
                    const std::function<void(std::size_t, std::uint64_t, std::uint64_t)>& per_chunk);

}  // namespace gibbs
