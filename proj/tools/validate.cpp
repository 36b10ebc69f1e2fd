#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>

#include "commands.hpp"
#include "gibbs/circuits.hpp"
#include "gibbs/cumulants.hpp"
#include "gibbs/exact_gibbs.hpp"
#include "gibbs/expansion.hpp"
#include "gibbs/observables.hpp"
#include "gibbs/sampler.hpp"

namespace gibbs::cli {

namespace {

const std::vector<double> kBetas{0.0, 0.2, 0.8};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

CheckResult at_most(std::string name, double value, double tol) {
  return {std::move(name), value <= tol, sci(value) + " <= " + sci(tol)};
}

Matrix perturbed(const Cumulant& d) {
  const auto& s = d.spectral();
  Eigen::VectorXd values = s.eigenvalues;
  values(values.size() - 1) += 1e-3;
  return s.eigenvectors * values.cast<cplx>().asDiagonal() * s.eigenvectors.adjoint();
}

Matrix dense_evolution(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector phases(es.eigenvalues().size());
  for (Eigen::Index a = 0; a < phases.size(); ++a) phases(a) = std::polar(1.0, -es.eigenvalues()(a) * t);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

std::vector<CheckResult> validation_checks(bool perturb_cumulant) {
  std::vector<CheckResult> out;

  {
    double herm = 0.0, comm = 0.0;
    for (Model m : {Model::XY, Model::Heisenberg}) {
      const Matrix h = to_dense(build_chain(m, 6));
      const Matrix mz = total_magnetization(6);
      herm = std::max(herm, hermiticity_defect(h));
      comm = std::max(comm, max_abs(h * mz - mz * h));
    }
    out.push_back(at_most("hamiltonian hermitian", herm, 1e-14));
    out.push_back(at_most("hamiltonian conserves magnetization", comm, 1e-12));
  }

  {
    double worst = 0.0;
    bool positive = true;
    for (double beta : kBetas) {
      const auto rho = gibbs_state(build_chain(Model::XY, 6), beta);
      worst = std::max({worst, std::abs(rho.trace() - 1.0), hermiticity_defect(rho.matrix())});
      try {
        rho.require_positive();
      } catch (const std::exception&) {
        positive = false;
      }
    }
    out.push_back(at_most("gibbs state unit trace and hermitian", worst, 1e-12));
    out.push_back({"gibbs state positive", positive, positive ? "all eigenvalues above floor" : "negative eigenvalue"});
  }

  {
    double telescoping = 0.0, routes = 0.0, traces = 0.0;
    for (double beta : kBetas) {
      for (int n = 2; n <= 4; ++n) {
        Matrix sum = Matrix::Zero(dimension(n), dimension(n));
        for (const auto& comp : compositions(n)) {
          Matrix term = Matrix::Identity(1, 1);
          for (int p : comp.parts) {
            const auto d = cumulant(Model::XY, p, beta);
            term = kron(term, (perturb_cumulant && p == 3) ? perturbed(*d) : d->matrix());
          }
          sum += term;
        }
        telescoping = std::max(telescoping, max_abs(sum - gibbs_state(build_chain(Model::XY, n), beta).matrix()));
      }
      for (int m = 2; m <= 5; ++m) {
        const Matrix d = cumulant(Model::XY, m, beta)->matrix();
        routes = std::max({routes, max_abs(d - cumulant_by_composition_sum(Model::XY, m, beta)),
                           max_abs(d - cumulant_by_alternating_sum(Model::XY, m, beta))});
        traces = std::max(traces, std::abs(d.trace()));
      }
    }
    out.push_back(at_most("cumulant telescoping", telescoping, 1e-10));
    out.push_back(at_most("cumulant routes agree", routes, 1e-12));
    out.push_back(at_most("cumulants traceless", traces, 1e-12));
  }

  {
    double exact = 0.0, identity_gap = 0.0, truncation = 0.0;
    bool lambda_ok = true;
    for (double beta : kBetas) {
      const auto h = build_chain(Model::XY, 4);
      const Matrix rho = gibbs_state(h, beta).matrix();
      exact = std::max(exact, max_abs(assemble_dense(refined_expansion(Model::XY, 4, 2, 4, beta)).matrix() - rho));
      const auto e = refined_expansion(Model::XY, 4, 2, 3, beta);
      lambda_ok = lambda_ok && e.lambda() >= 1.0 && (beta > 0.0 || std::abs(e.lambda() - 1.0) < 1e-12);
      truncation = std::max(truncation, std::abs(trace_norm(Matrix(rho - assemble_dense(e).matrix())) -
                                                 cumulant(Model::XY, 4, beta)->norm1()));
      if (beta == 0.0) identity_gap = max_abs(assemble_dense(e).matrix() - identity(4) / 16.0);
    }
    out.push_back(at_most("full-depth expansion exact", exact, 1e-10));
    out.push_back(at_most("truncation error equals omitted cumulant", truncation, 1e-10));
    out.push_back(at_most("infinite temperature expansion is maximally mixed", identity_gap, 1e-12));
    out.push_back({"lambda >= 1 and lambda = 1 at beta = 0", lambda_ok, lambda_ok ? "ok" : "violated"});
  }

  {
    const Matrix h = to_dense(build_chain(Model::XY, 4));
    const auto basis = xy_eigenbasis(4);
    const Matrix w = basis.circuit.unitary();
    const double diag = max_abs(w.adjoint() * h * w - Matrix(basis.label_energies.cast<cplx>().asDiagonal()));
    double evo = 0.0;
    for (double t : {0.0, 0.7, 2.5, 5.0}) {
      evo = std::max(evo, max_abs(time_evolution_circuit(Model::XY, 4, t).unitary() - dense_evolution(h, t)));
    }
    out.push_back(at_most("eigenbasis network diagonalizes H", diag, 1e-10));
    out.push_back(at_most("time evolution circuit", evo, 1e-8));
  }

  {
    const auto e = refined_expansion(Model::XY, 4, 2, 3, 0.8);
    const Matrix zz = z_operator(4, 0) * z_operator(4, 1);
    const auto a = estimate(e, zz, 20000, 11);
    const auto b = estimate(e, zz, 20000, 11);
    out.push_back({"sampler deterministic for a fixed seed", a == b, a == b ? "identical reports" : "reports differ"});
    const double z = std::abs(a.mean - expectation_deterministic(e, zz)) / a.standard_error;
    out.push_back({"sampler unbiased", z < 5.0, sci(z) + " standard errors"});
    out.push_back(at_most("sampler second moment within lambda^2", a.second_moment - e.lambda() * e.lambda(), 1e-12));
  }

  {
    const auto times = time_grid(2.0, 5);
    double diagonal = 0.0, paths = 0.0;
    for (double beta : kBetas) {
      const auto e = expansion_at_order(Model::XY, 4, 2, 3, beta);
      const auto c = correlation_matrix(e, times);
      const auto exact = correlation_matrix(build_chain(Model::XY, 4), beta, times);
      for (int i = 0; i < 4; ++i) {
        diagonal = std::max({diagonal, std::abs(c.at(i, i, 0) - 1.0), std::abs(exact.at(i, i, 0) - 1.0)});
      }
      // The dense path: the same Heisenberg-picture trace with the assembled state.
      DensityOperator rho = assemble_dense(e);
      const Matrix h = to_dense(build_chain(Model::XY, 4));
      for (std::size_t k = 0; k < times.size(); ++k) {
        const Matrix u = dense_evolution(h, times[k]);
        for (int i = 0; i < 4; ++i) {
          for (int j = 0; j < 4; ++j) {
            const cplx v = trace_product(rho.matrix() * u.adjoint() * z_operator(4, i) * u, z_operator(4, j));
            paths = std::max(paths, std::abs(v - c.at(i, j, k)));
          }
        }
      }
    }
    out.push_back(at_most("C_ii(0) = 1", diagonal, 1e-8));
    out.push_back(at_most("circuit and dense correlation paths agree", paths, 1e-8));

    const auto h = build_chain(Model::XY, 6);
    const auto m = energy_moments(h, gibbs_state(h, 0.8));
    out.push_back(at_most("grouped H^2 matches dense square", std::abs(m.second - m.second_dense), 1e-10));
  }

  return out;
}

}  // namespace gibbs::cli
