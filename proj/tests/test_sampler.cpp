#include <cmath>

#include "doctest.h"
#include "gibbs/error.hpp"
#include "gibbs/expansion.hpp"
#include "gibbs/hamiltonian.hpp"
#include "gibbs/sampler.hpp"
#include "oracles.hpp"

using namespace gibbs;

TEST_CASE("per-shot streams are deterministic and distinct") {
  ShotRng a(1, 5), b(1, 5), c(1, 6), d(2, 5);
  const double x = a.uniform();
  CHECK(x == b.uniform());
  CHECK(x != c.uniform());
  CHECK(x != d.uniform());
  ShotRng r(3, 0);
  for (int k = 0; k < 1000; ++k) {
    const double u = r.uniform();
    CHECK((u >= 0.0 && u < 1.0));
  }
}

TEST_CASE("inverse-CDF draws") {
  const std::vector<double> cdf{0.25, 0.5, 1.0};
  CHECK(draw_index(cdf, 0.0) == 0);
  CHECK(draw_index(cdf, 0.2499) == 0);
  CHECK(draw_index(cdf, 0.25) == 1);
  CHECK(draw_index(cdf, 0.9999) == 2);
  CHECK_THROWS_AS(draw_index(std::vector<double>{}, 0.5), InvalidArgument);
}

TEST_CASE("term probabilities are weight over lambda") {
  const auto e = refined_expansion(Model::XY, 4, 2, 3, 0.8);
  const QuasiSampler s(e);
  double total = 0.0;
  for (std::size_t t = 0; t < e.terms().size(); ++t) {
    CHECK(s.term_probabilities()[t] == doctest::Approx(e.terms()[t].weight_norm / e.lambda()).epsilon(1e-12));
    total += s.term_probabilities()[t];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("signed product-state mixtures rebuild every term") {
  for (Model model : {Model::XY, Model::Heisenberg}) {
    const auto e = refined_expansion(model, 6, 3, 4, 0.8);
    const QuasiSampler s(e);
    for (std::size_t t = 0; t < e.terms().size(); ++t) {
      std::vector<double> probs;
      std::vector<int> signs;
      s.enumerate_term(t, probs, signs);
      const Matrix b = s.term_basis(t);
      Eigen::VectorXd w(static_cast<Eigen::Index>(probs.size()));
      double psum = 0.0;
      for (std::size_t k = 0; k < probs.size(); ++k) {
        w(static_cast<Eigen::Index>(k)) = probs[k] * signs[k];
        psum += probs[k];
      }
      CHECK(psum == doctest::Approx(1.0).epsilon(1e-12));
      const Matrix rebuilt = e.terms()[t].weight_norm * (b * w.cast<cplx>().asDiagonal() * b.adjoint());
      CHECK(max_abs(rebuilt - e.term_matrix(t)) < 1e-12);
    }
  }
}

TEST_CASE("sampled outcomes are consistent with the product index") {
  const auto e = refined_expansion(Model::XY, 4, 2, 3, 0.8);
  const QuasiSampler s(e);
  for (std::uint64_t shot = 0; shot < 200; ++shot) {
    ShotRng rng(42, shot);
    const auto o = s.sample(rng);
    const auto& factors = e.terms()[o.term_index].factors;
    REQUIRE(o.factor_state_indices.size() == factors.size());
    int sign = 1;
    for (const auto& d : o.prepared_state) sign *= d.sign;
    CHECK(sign == o.sign);
    const Vector psi = s.product_state(o);
    CHECK((psi - s.term_basis(o.term_index).col(s.product_index(o))).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("state draws follow the factor spectra") {
  const auto e = refined_expansion(Model::XY, 4, 2, 2, 0.8);
  const QuasiSampler s(e);
  const std::size_t term = 1;
  std::vector<double> probs;
  std::vector<int> signs;
  s.enumerate_term(term, probs, signs);
  const std::uint64_t shots = 40000;
  std::vector<double> counts(probs.size(), 0.0);
  for (std::uint64_t k = 0; k < shots; ++k) {
    ShotRng rng(8, k);
    counts[static_cast<std::size_t>(s.product_index(s.sample_state(term, rng)))] += 1.0;
  }
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double sigma = std::sqrt(shots * probs[k] * (1.0 - probs[k])) + 1e-9;
    CHECK(std::abs(counts[k] - shots * probs[k]) <= 4.0 * sigma + 1e-9);
  }
}

TEST_CASE("estimates are unbiased, reproducible and bounded") {
  const auto e = refined_expansion(Model::XY, 4, 2, 3, 0.8);
  const Matrix zz = z_operator(4, 1) * z_operator(4, 2);
  const double exact = expectation_deterministic(e, zz);
  for (SamplingMode mode : {SamplingMode::Full, SamplingMode::Stratified}) {
    const auto r = estimate(e, zz, 20000, 77, mode);
    CHECK(std::abs(r.mean - exact) < 5.0 * r.standard_error);
    CHECK(r.second_moment <= e.lambda() * e.lambda() + 1e-12);
    CHECK(r == estimate(e, zz, 20000, 77, mode));
    CHECK(r.shots == 20000);
    CHECK(r.lambda == e.lambda());
  }
  CHECK(estimate(e, zz, 5000, 1).mean != estimate(e, zz, 5000, 2).mean);
  const auto small = estimate(e, zz, 3, 77);
  CHECK(small.shots == 3);
}

TEST_CASE("stratified sampling does not increase the variance") {
  const auto e = refined_expansion(Model::XY, 4, 2, 3, 0.8);
  const Matrix h = to_dense(build_chain(Model::XY, 4));
  const auto full = estimate(e, h, 20000, 3, SamplingMode::Full);
  const auto strat = estimate(e, h, 20000, 3, SamplingMode::Stratified);
  CHECK(strat.standard_error <= full.standard_error);
}

TEST_CASE("positive expansions have lambda one and zero-variance constants") {
  const auto e = refined_expansion(Model::XY, 4, 2, 1, 0.8);
  const auto r = estimate(e, identity(4), 1000, 0);
  CHECK(r.mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.standard_error < 1e-9);
}

TEST_CASE("estimator input validation and report serialization") {
  const auto e = refined_expansion(Model::XY, 4, 2, 3, 0.8);
  CHECK_THROWS_AS(estimate(e, identity(4), 0, 0), InvalidArgument);
  CHECK_THROWS_AS(estimate(e, identity(3), 10, 0), InvalidArgument);
  Matrix lower = Matrix::Zero(16, 16);
  lower(1, 0) = 1.0;
  CHECK_THROWS_AS(estimate(e, lower, 10, 0), InvalidArgument);
  const auto j = to_json(estimate(e, identity(4), 10, 4));
  CHECK(j.contains("stderr"));
  CHECK(j["seed"] == 4);
}

TEST_CASE("chunking covers every shot exactly once") {
  for (std::uint64_t shots : {1ull, 63ull, 64ull, 1000ull}) {
    std::vector<int> hit(shots, 0);
    for_each_chunk(shots, [&](std::size_t, std::uint64_t first, std::uint64_t last) {
      for (auto k = first; k < last; ++k) ++hit[k];
    });
    for (int h : hit) CHECK(h == 1);
  }
}
