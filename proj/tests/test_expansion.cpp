#include "doctest.h"
#include "gibbs/cumulants.hpp"
#include "gibbs/error.hpp"
#include "gibbs/expansion.hpp"
#include "gibbs/hamiltonian.hpp"
#include "oracles.hpp"

using namespace gibbs;

namespace {

std::vector<std::string> labels(const Expansion& e) {
  std::vector<std::string> out;
  for (const auto& t : e.terms()) out.push_back(describe(t));
  return out;
}

}  // namespace

TEST_CASE("placement counts for M = 4") {
  const std::vector<int> expected{0, 0, 1, 2, 3, 4, 3, 2, 1};
  for (int k = 2; k <= 8; ++k) CHECK(placement_count(4, k) == expected[static_cast<std::size_t>(k)]);
  CHECK(placement_count(4, 9) == 0);
}

TEST_CASE("N = 4 expansion terms") {
  const auto e = refined_expansion(Model::XY, 4, 2, 3, 0.8);
  CHECK(labels(e) == std::vector<std::string>{"rho2 x rho2", "rho1 x Delta2 x rho1", "Delta3 x rho1", "rho1 x Delta3"});
}

TEST_CASE("N = 8 expansion at cutoff 3 has four terms") {
  const auto e = refined_expansion(Model::XY, 8, 4, 3, 0.8);
  CHECK(labels(e) == std::vector<std::string>{"rho4 x rho4", "rho3 x Delta2 x rho3", "rho2 x Delta3 x rho3",
                                              "rho3 x Delta3 x rho2"});
}

TEST_CASE("lambda is one plus the cumulant weights") {
  const auto e = refined_expansion(Model::XY, 4, 2, 3, 0.8);
  const double d2 = cumulant(Model::XY, 2, 0.8)->norm1();
  const double d3 = cumulant(Model::XY, 3, 0.8)->norm1();
  CHECK(e.lambda() == doctest::Approx(1.0 + d2 + 2.0 * d3).epsilon(1e-12));
  CHECK(negativity(e) == doctest::Approx(e.lambda()).epsilon(1e-14));
}

TEST_CASE("full-depth expansions are exact") {
  for (auto [n, m] : {std::pair{2, 1}, std::pair{4, 2}, std::pair{6, 3}}) {
    for (double beta : {0.2, 0.8}) {
      const auto e = refined_expansion(Model::Heisenberg, n, m, n, beta);
      CHECK(oracle::max_abs(assemble_dense(e).matrix() - oracle::gibbs(oracle::chain(n, true), beta)) < 1e-10);
    }
  }
}

TEST_CASE("order 1 is the product of cluster states") {
  const auto e = expansion_at_order(Model::XY, 4, 2, 1, 0.5);
  CHECK(e.terms().size() == 1);
  CHECK(e.lambda() == 1.0);
  const auto rho2 = oracle::gibbs(oracle::chain(2), 0.5);
  CHECK(oracle::max_abs(assemble_dense(e).matrix() - oracle::kron(rho2, rho2)) < 1e-12);
}

TEST_CASE("truncation error equals the omitted cumulant for N = 4") {
  for (double beta : {0.2, 0.8}) {
    const auto e = refined_expansion(Model::XY, 4, 2, 3, beta);
    const double err = oracle::trace_norm(assemble_dense(e).matrix() - oracle::gibbs(oracle::chain(4), beta));
    CHECK(err == doctest::Approx(cumulant(Model::XY, 4, beta)->norm1()).epsilon(1e-9));
    const auto bound = bias_bound(e, 1.0);
    CHECK(bound.complete);
    CHECK(bound.largest_included == 4);
    CHECK(bound.value == doctest::Approx(err).epsilon(1e-9));
  }
}

TEST_CASE("bias bound dominates observed bias") {
  const Matrix zz = z_operator(8, 3) * z_operator(8, 4);
  for (double beta : {0.2, 0.8}) {
    const auto e = refined_expansion(Model::XY, 8, 4, 3, beta);
    const double exact = (oracle::gibbs(oracle::chain(8), beta) * zz).trace().real();
    CHECK(std::abs(expectation_deterministic(e, zz) - exact) <= bias_bound(e, 1.0).value);
  }
  CHECK(bias_bound(refined_expansion(Model::XY, 4, 2, 4, 0.8), 1.0).value == 0.0);
  const auto partial = bias_bound(refined_expansion(Model::XY, 8, 4, 3, 0.8, 6), 1.0);
  CHECK_FALSE(partial.complete);
  CHECK(partial.largest_included == 6);
}

TEST_CASE("expansion trace is one and terms sum to the dense assembly") {
  const auto e = refined_expansion(Model::XY, 6, 3, 4, 0.8);
  const Matrix id = identity(6);
  CHECK(std::abs(trace_against(e, id) - 1.0) < 1e-12);
  const Matrix h = to_dense(build_chain(Model::XY, 6));
  cplx sum = 0.0;
  for (std::size_t t = 0; t < e.terms().size(); ++t) sum += term_trace(e, t, h);
  CHECK(std::abs(sum - trace_against(e, h)) < 1e-12);
  CHECK(real_expectation(assemble_dense(e), h) == doctest::Approx(expectation_deterministic(e, h)).epsilon(1e-12));
}

TEST_CASE("invalid expansion requests") {
  CHECK_THROWS_AS(refined_expansion(Model::XY, 5, 2, 3, 0.8), InvalidArgument);
  CHECK_THROWS_AS(refined_expansion(Model::XY, 4, 2, 0, 0.8), InvalidArgument);
  CHECK_THROWS_AS(refined_expansion(Model::XY, 4, 2, 5, 0.8), InvalidArgument);
  CHECK_THROWS_AS(refined_expansion(Model::XY, 4, 2, 3, -0.1), InvalidArgument);
  CHECK_THROWS_AS(refined_expansion(Model::XY, 8, 4, 3, 0.8, 3), DimensionCapError);
  const auto e = refined_expansion(Model::XY, 4, 2, 2, 0.8);
  CHECK_THROWS_AS(e.cumulant_factor(3), InvalidArgument);
  CHECK_THROWS_AS(expectation_deterministic(e, identity(3)), InvalidArgument);
}

TEST_CASE("expansion JSON document") {
  const auto j = to_json(refined_expansion(Model::XY, 4, 2, 3, 0.8));
  CHECK(j["model"] == "xy");
  CHECK(j["N"] == 4);
  CHECK(j["m_c"] == 3);
  CHECK(j["terms"].size() == 4);
  CHECK(j["terms"][1]["label"] == "rho1 x Delta2 x rho1");
  CHECK(j["cumulant_norms"].contains("3"));
}

TEST_CASE("local observable with all corrections is exact") {
  for (Model model : {Model::XY, Model::Heisenberg}) {
    const bool heis = model == Model::Heisenberg;
    for (double beta : {0.2, 0.8}) {
      for (const RegionSizes r : {RegionSizes{2, 1, 1}, RegionSizes{2, 0, 2}, RegionSizes{2, 1, 2}}) {
        const int n = r.total();
        const auto full = oracle::gibbs(oracle::chain(n, heis), beta);
        const double exact = (full * oracle::on_sites(n, 0, 'Z', 1, 'Z')).trace().real();
        const double corrected = local_observable_with_corrections(model, r, oracle::word("ZZ"), beta, n);
        CHECK(corrected == doctest::Approx(exact).epsilon(1e-10));
        const int ab = r.a + r.b;
        const auto reduced = oracle::gibbs(oracle::chain(ab, heis), beta);
        const double uncorrected = (reduced * oracle::on_sites(ab, 0, 'Z', 1, 'Z')).trace().real();
        CHECK(local_observable_with_corrections(model, r, oracle::word("ZZ"), beta, 1) ==
              doctest::Approx(uncorrected).epsilon(1e-12));
      }
    }
  }
  CHECK_THROWS_AS(local_observable_with_corrections(Model::XY, {2, 1, 1}, oracle::pauli('Z'), 0.8, 3),
                  InvalidArgument);
}
