#include <numbers>
#include <random>

#include "doctest.h"
#include "gibbs/circuits.hpp"
#include "gibbs/error.hpp"
#include "gibbs/hamiltonian.hpp"
#include "oracles.hpp"

using namespace gibbs;

namespace {

bool is_unitary(const Matrix& u, double tol = 1e-12) {
  return max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())) < tol;
}

double off_diagonal(const Matrix& a) {
  Matrix b = a;
  b.diagonal().setZero();
  return max_abs(b);
}

}  // namespace

TEST_CASE("Givens gate acts on the single-excitation block") {
  const double theta = 0.3;
  const auto g = givens_matrix(theta);
  const double c = std::cos(2 * theta), s = std::sin(2 * theta);
  CHECK(std::abs(g(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(g(3, 3) - 1.0) < 1e-15);
  // |10> -> c|10> + s|01>, |01> -> c|01> - s|10>.
  CHECK(std::abs(g(2, 2) - c) < 1e-15);
  CHECK(std::abs(g(1, 2) - s) < 1e-15);
  CHECK(std::abs(g(2, 1) + s) < 1e-15);
  CHECK(is_unitary(g));
}

TEST_CASE("Givens at pi/8 diagonalizes the dimer") {
  const Matrix g = givens_matrix(std::numbers::pi / 8);
  CHECK(oracle::max_abs(g * oracle::chain(2) * g.adjoint() - (oracle::word("ZI") - oracle::word("IZ"))) < 1e-12);
}

TEST_CASE("dense Givens embedding matches a one-gate circuit") {
  Circuit c(4);
  c.add(GivensGate{1, 0.4});
  CHECK(max_abs(c.unitary() - givens_dense(4, 1, 2, 0.4)) < 1e-14);
  CHECK(max_abs(givens_dense(2, 0, 1, 0.4) - Matrix(givens_matrix(0.4))) < 1e-15);
  CHECK_THROWS_AS(givens_dense(4, 2, 1, 0.1), InvalidArgument);
}

TEST_CASE("circuits compose, invert and validate") {
  Circuit c(3);
  c.add(PauliXGate{0}).add(GivensGate{0, 0.2}).add(PauliZGate{2}).add(GivensGate{1, -0.7});
  CHECK(c.givens_count() == 2);
  CHECK(is_unitary(c.unitary()));
  CHECK(max_abs(c.inverse().unitary() * c.unitary() - identity(3)) < 1e-13);
  CHECK_THROWS_AS(c.add(GivensGate{2, 0.1}), InvalidArgument);
  CHECK_THROWS_AS(c.add(PauliXGate{3}), InvalidArgument);
  CHECK_THROWS_AS(c.add(DiagonalPhaseGate{{0.0, 1.0}}), InvalidArgument);
  Circuit big(5);
  big.append(c, 2);
  CHECK(big.size() == c.size());
  CHECK_THROWS_AS(big.append(c, 3), InvalidArgument);
  const auto j = to_json(c);
  CHECK(j["gates"].size() == 4);
  CHECK(j["gates"][1]["kind"] == "givens");
}

TEST_CASE("statevector simulation matches the circuit unitary") {
  Circuit c(3);
  c.add(PauliXGate{1}).add(GivensGate{0, 0.9}).add(GivensGate{1, 0.25}).add(PauliZGate{0});
  for (Eigen::Index k = 0; k < 8; ++k) {
    Statevector psi = Statevector::basis(3, k);
    psi.apply(c);
    CHECK((psi.amplitudes() - c.unitary().col(k)).cwiseAbs().maxCoeff() < 1e-14);
  }
  Statevector z = Statevector::basis(2, 1);
  z.apply_z(1);
  CHECK(std::abs(z.amplitudes()(1) + 1.0) < 1e-15);
}

TEST_CASE("Jacobi sweeps agree with a library eigensolver") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int n : {2, 3, 5, 8}) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = g(rng);
    }
    const auto jac = jacobi_eigen(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    CHECK((jac.eigenvalues - es.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((a * jac.eigenvectors - jac.eigenvectors * jac.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("single-particle XY energies are 4 cos(k pi / (n + 1))") {
  for (int n = 2; n <= 6; ++n) {
    const auto basis = xy_eigenbasis(n);
    std::vector<double> expected;
    for (int k = 1; k <= n; ++k) expected.push_back(4.0 * std::cos(k * std::numbers::pi / (n + 1)));
    std::sort(expected.begin(), expected.end());
    for (int k = 0; k < n; ++k) CHECK(basis.mode_energies(k) == doctest::Approx(expected[static_cast<std::size_t>(k)]).epsilon(1e-12));
  }
}

TEST_CASE("eigenbasis network columns are eigenvectors with their label energies") {
  for (int n = 1; n <= 6; ++n) {
    const auto basis = xy_eigenbasis(n);
    const Matrix w = basis.circuit.unitary();
    const Matrix h = oracle::chain(n);
    CHECK(max_abs(w.adjoint() * h * w - Matrix(basis.label_energies.cast<cplx>().asDiagonal())) < 1e-10);
    CHECK(max_abs(w - eigenbasis_network(Model::XY, n).unitary()) == 0.0);
  }
}

TEST_CASE("dimer network is a single Givens gate at -pi/8") {
  const auto c = eigenbasis_network(Model::XY, 2);
  CHECK(c.givens_count() == 1);
  bool found = false;
  for (const auto& g : c.gates()) {
    if (const auto* gv = std::get_if<GivensGate>(&g)) {
      CHECK(gv->theta == doctest::Approx(-std::numbers::pi / 8).epsilon(1e-12));
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("time evolution circuits match the dense exponential") {
  for (int n : {2, 3, 4, 5}) {
    for (double t : {0.0, 0.1, 1.3, 5.0}) {
      const Matrix u = time_evolution_circuit(Model::XY, n, t).unitary();
      CHECK(oracle::max_abs(u - oracle::expm_hermitian(oracle::chain(n), cplx(0, -t))) < 1e-10);
    }
  }
  CHECK_THROWS_AS(time_evolution_circuit(Model::Heisenberg, 4, 1.0), Unsupported);
}

TEST_CASE("sector loader prepares single excitations and single holes") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int n : {1, 2, 3, 4}) {
    for (bool holes : {false, true}) {
      Vector target = Vector::Zero(dimension(n));
      for (int k = 0; k < n; ++k) {
        Eigen::Index idx = Eigen::Index{1} << (n - 1 - k);
        if (holes) idx = dimension(n) - 1 - idx;
        target(idx) = g(rng);
      }
      target.normalize();
      target *= std::polar(1.0, 0.7);
      Statevector psi = Statevector::basis(n, 0);
      psi.apply(load_sector_state(target, n));
      CHECK(std::abs(std::abs(psi.amplitudes().dot(target)) - 1.0) < 1e-12);
    }
  }
  for (Eigen::Index k : {Eigen::Index{0}, Eigen::Index{15}}) {
    Statevector psi = Statevector::basis(4, 0);
    psi.apply(load_sector_state(Statevector::basis(4, k).amplitudes(), 4));
    CHECK(std::abs(psi.amplitudes()(k)) == doctest::Approx(1.0));
  }
  Vector two = Vector::Zero(16);
  two(3) = two(5) = std::sqrt(0.5);
  CHECK_THROWS_AS(load_sector_state(two, 4), Unsupported);
  Vector mixed = Vector::Zero(4);
  mixed(0) = mixed(1) = std::sqrt(0.5);
  CHECK_THROWS_AS(load_sector_state(mixed, 2), Unsupported);
}

TEST_CASE("corr_value matches the dense Heisenberg-picture oracle") {
  const int n = 4;
  const double t = 0.8;
  const auto u = oracle::expm_hermitian(oracle::chain(n), cplx(0, -t));
  Vector psi = Vector::Zero(16);
  psi(3) = 0.6;
  psi(5) = cplx(0, 0.8);
  const auto evo = time_evolution_circuit(Model::XY, n, t);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const oracle::Mat zi = oracle::on_site(n, i, 'Z');
      const oracle::Mat zj = oracle::on_site(n, j, 'Z');
      const cplx expected = psi.dot(u.adjoint() * zi * u * zj * psi);
      CHECK(std::abs(corr_value(Statevector(psi), i, j, evo) - expected) < 1e-12);
    }
  }
  CHECK_THROWS_AS(corr_value(Statevector(psi), 0, 4, evo), InvalidArgument);
}

TEST_CASE("H^2 groups sum to the dense square and are diagonalized by their rotations") {
  for (Model model : {Model::XY, Model::Heisenberg}) {
    for (int n : {2, 3, 5, 8}) {
      const auto h = build_chain(model, n);
      const auto groups = h_squared_groups(h);
      const int nb = n - 1;
      CHECK(groups.size() == static_cast<std::size_t>(nb + (nb - 1) + (nb - 1) * (nb - 2) / 2));
      const Matrix hd = to_dense(h);
      Matrix sum = Matrix::Zero(hd.rows(), hd.cols());
      for (const auto& g : groups) sum += group_operator(h, g);
      CHECK(max_abs(sum - hd * hd) < 1e-10);
      if (model == Model::XY && n <= 5) {
        for (const auto& g : groups) {
          const Matrix v = group_conjugation(n, g);
          CHECK(off_diagonal(v * group_operator(h, g) * v.adjoint()) < 1e-12);
        }
      }
    }
  }
  CHECK(h_squared_groups(build_chain(Model::XY, 8)).size() == 28);
}

TEST_CASE("squared XY bond is 2 I - 2 ZZ") {
  const auto h = build_chain(Model::XY, 2);
  const Matrix sq = group_operator(h, h_squared_groups(h).front());
  CHECK(oracle::max_abs(sq - (2.0 * oracle::word("II") - 2.0 * oracle::word("ZZ"))) < 1e-14);
}
