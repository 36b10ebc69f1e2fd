#include "gibbs/circuits.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

#include "gibbs/error.hpp"

namespace gibbs {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Eigen::Index site_mask(int n, int site) { return Eigen::Index{1} << (n - 1 - site); }

}  // namespace

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 0) throw InvalidArgument("circuit needs a non-negative qubit count");
}

std::size_t Circuit::givens_count() const {
  return static_cast<std::size_t>(std::count_if(gates_.begin(), gates_.end(), [](const Gate& g) {
    return std::holds_alternative<GivensGate>(g);
  }));
}

Circuit& Circuit::add(Gate gate) {
  auto check_site = [this](int site) {
    if (site < 0 || site >= n_qubits_) {
      throw InvalidArgument("gate site " + std::to_string(site) + " outside register of " +
                            std::to_string(n_qubits_));
    }
  };
  std::visit(overloaded{[&](const PauliXGate& g) { check_site(g.site); },
                        [&](const PauliZGate& g) { check_site(g.site); },
                        [&](const GivensGate& g) {
                          check_site(g.site);
                          check_site(g.site + 1);
                        },
                        [&](const DiagonalPhaseGate& g) {
                          if (static_cast<Eigen::Index>(g.phases.size()) != dimension(n_qubits_)) {
                            throw InvalidArgument("phase vector length must be 2^n");
                          }
                        }},
             gate);
  gates_.push_back(std::move(gate));
  return *this;
}

Circuit& Circuit::append(const Circuit& other, int offset) {
  if (offset < 0 || offset + other.n_qubits() > n_qubits_) {
    throw InvalidArgument("appended circuit does not fit the register");
  }
  for (const auto& g : other.gates()) {
    std::visit(overloaded{[&](const PauliXGate& x) { add(PauliXGate{x.site + offset}); },
                          [&](const PauliZGate& z) { add(PauliZGate{z.site + offset}); },
                          [&](const GivensGate& gv) { add(GivensGate{gv.site + offset, gv.theta}); },
                          [&](const DiagonalPhaseGate& d) {
                            if (offset != 0 || other.n_qubits() != n_qubits_) {
                              throw InvalidArgument("diagonal phase gates cannot be embedded");
                            }
                            add(d);
                          }},
               g);
  }
  return *this;
}

Circuit Circuit::inverse() const {
  Circuit inv(n_qubits_);
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
    std::visit(overloaded{[&](const PauliXGate& x) { inv.add(x); },
                          [&](const PauliZGate& z) { inv.add(z); },
                          [&](const GivensGate& g) { inv.add(GivensGate{g.site, -g.theta}); },
                          [&](const DiagonalPhaseGate& d) {
                            DiagonalPhaseGate neg = d;
                            for (auto& p : neg.phases) p = -p;
                            inv.add(std::move(neg));
                          }},
               *it);
  }
  return inv;
}

Matrix Circuit::unitary() const {
  const auto dim = dimension(n_qubits_);
  Matrix u(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    auto psi = Statevector::basis(n_qubits_, k);
    psi.apply(*this);
    u.col(k) = psi.amplitudes();
  }
  return u;
}

Statevector::Statevector(Vector amplitudes) : amps_(std::move(amplitudes)) {
  const auto size = static_cast<std::uint64_t>(amps_.size());
  if (size == 0 || !std::has_single_bit(size)) {
    throw InvalidArgument("statevector length must be a power of two");
  }
  n_qubits_ = std::countr_zero(size);
}

Statevector Statevector::basis(int n_qubits, Eigen::Index index) {
  Vector v = Vector::Zero(dimension(n_qubits));
  v(index) = 1.0;
  return Statevector(std::move(v));
}

void Statevector::apply_z(int site) {
  if (site < 0 || site >= n_qubits_) throw InvalidArgument("Z site out of range");
  const auto mask = site_mask(n_qubits_, site);
  for (Eigen::Index k = 0; k < amps_.size(); ++k) {
    if (k & mask) amps_(k) = -amps_(k);
  }
}

void Statevector::apply(const Gate& gate) {
  std::visit(
      overloaded{[&](const PauliXGate& g) {
                   const auto mask = site_mask(n_qubits_, g.site);
                   for (Eigen::Index k = 0; k < amps_.size(); ++k) {
                     if (!(k & mask)) std::swap(amps_(k), amps_(k | mask));
                   }
                 },
                 [&](const PauliZGate& g) { apply_z(g.site); },
                 [&](const GivensGate& g) {
                   const auto hi = site_mask(n_qubits_, g.site);
                   const auto lo = site_mask(n_qubits_, g.site + 1);
                   const double c = std::cos(2.0 * g.theta);
                   const double s = std::sin(2.0 * g.theta);
                   for (Eigen::Index k = 0; k < amps_.size(); ++k) {
                     if ((k & hi) && !(k & lo)) {
                       const Eigen::Index k01 = (k & ~hi) | lo;
                       const cplx a10 = amps_(k);
                       const cplx a01 = amps_(k01);
                       amps_(k) = c * a10 - s * a01;
                       amps_(k01) = s * a10 + c * a01;
                     }
                   }
                 },
                 [&](const DiagonalPhaseGate& g) {
                   for (Eigen::Index k = 0; k < amps_.size(); ++k) {
                     amps_(k) *= std::polar(1.0, g.phases[static_cast<std::size_t>(k)]);
                   }
                 }},
      gate);
}

void Statevector::apply(const Circuit& circuit) {
  if (circuit.n_qubits() != n_qubits_) throw InvalidArgument("circuit/register size mismatch");
  for (const auto& g : circuit.gates()) apply(g);
}

Eigen::Matrix4cd givens_matrix(double theta) {
  const double c = std::cos(2.0 * theta);
  const double s = std::sin(2.0 * theta);
  Eigen::Matrix4cd g = Eigen::Matrix4cd::Zero();
  g(0, 0) = 1.0;
  g(3, 3) = 1.0;
  g(1, 1) = c;
  g(2, 2) = c;
  g(1, 2) = s;
  g(2, 1) = -s;
  return g;
}

Matrix givens_dense(int n_sites, int p, int q, double theta) {
  if (p < 0 || q <= p || q >= n_sites) throw InvalidArgument("givens_dense: need 0 <= p < q < n");
  const auto dim = dimension(n_sites);
  const auto hi = site_mask(n_sites, p);
  const auto lo = site_mask(n_sites, q);
  const double c = std::cos(2.0 * theta);
  const double s = std::sin(2.0 * theta);
  Matrix g = Matrix::Identity(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    if ((k & hi) && !(k & lo)) {
      const Eigen::Index k01 = (k & ~hi) | lo;
      g(k, k) = c;
      g(k01, k01) = c;
      g(k01, k) = s;
      g(k, k01) = -s;
    }
  }
  return g;
}

Eigen::MatrixXd xy_single_particle_hamiltonian(int n) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    h(i, i + 1) = 2.0;
    h(i + 1, i) = 2.0;
  }
  return h;
}

JacobiResult jacobi_eigen(const Eigen::MatrixXd& symmetric, double tol) {
  const auto n = symmetric.rows();
  if (symmetric.cols() != n) throw InvalidArgument("jacobi_eigen: matrix must be square");
  Eigen::MatrixXd a = 0.5 * (symmetric + symmetric.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

  auto off_max = [&] {
    double m = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) m = std::max(m, std::abs(a(p, q)));
    return m;
  };

  int sweeps = 0;
  constexpr int kMaxSweeps = 100;
  while (off_max() >= tol) {
    if (++sweeps > kMaxSweeps) throw DataIntegrityError("Jacobi sweeps did not converge");
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });
  JacobiResult out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n), sweeps};
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = a(src, src);
    Eigen::VectorXd col = v.col(src);
    for (Eigen::Index r = 0; r < n; ++r) {
      if (std::abs(col(r)) > 1e-12) {
        if (col(r) < 0) col = -col;
        break;
      }
    }
    out.eigenvectors.col(k) = col;
  }
  return out;
}

XYEigenbasis xy_eigenbasis(int n) {
  if (n < 1) throw InvalidArgument("eigenbasis network needs at least one site");
  XYEigenbasis out{Circuit(n), Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(dimension(n))};
  if (n == 1) return out;

  const auto jac = jacobi_eigen(xy_single_particle_hamiltonian(n));
  out.mode_energies = jac.eigenvalues;

  // Row rotations R on adjacent rows reduce the mode matrix to a diagonal D of
  // signs: R_L ... R_1 U = D, so U = R_1^T ... R_L^T D. Each R^T is one
  // Givens gate; D becomes Z gates and is applied first.
  Eigen::MatrixXd w = jac.eigenvectors;
  struct Rotation {
    int row;
    double c;
    double s;
  };
  std::vector<Rotation> rotations;
  for (int j = 0; j + 1 < n; ++j) {
    for (int i = n - 1; i > j; --i) {
      const double x = w(i - 1, j);
      const double y = w(i, j);
      const double r = std::hypot(x, y);
      if (std::abs(y) < 1e-15) continue;
      const double c = x / r;
      const double s = y / r;
      const Eigen::RowVectorXd upper = w.row(i - 1);
      const Eigen::RowVectorXd lower = w.row(i);
      w.row(i - 1) = c * upper + s * lower;
      w.row(i) = -s * upper + c * lower;
      rotations.push_back({i - 1, c, s});
    }
  }
  for (int k = 0; k < n; ++k) {
    if (w(k, k) < 0) out.circuit.add(PauliZGate{k});
  }
  for (auto it = rotations.rbegin(); it != rotations.rend(); ++it) {
    out.circuit.add(GivensGate{it->row, 0.5 * std::atan2(it->s, it->c)});
  }

  for (Eigen::Index label = 0; label < dimension(n); ++label) {
    double e = 0.0;
    for (int k = 0; k < n; ++k) {
      if (site_bit(label, n, k)) e += out.mode_energies(k);
    }
    out.label_energies(label) = e;
  }
  return out;
}

namespace {

void require_xy(Model model) {
  if (model != Model::XY) {
    throw Unsupported("Givens eigenbasis synthesis relies on the free-fermion XY chain (got " +
                      to_string(model) + ")");
  }
}

}  // namespace

Circuit eigenbasis_network(Model model, int n) {
  require_xy(model);
  require_dense_cap(n, kDefaultDenseCap);
  return xy_eigenbasis(n).circuit;
}

Circuit time_evolution_circuit(Model model, int n, double t) {
  require_xy(model);
  require_dense_cap(n, kDefaultDenseCap);
  const auto basis = xy_eigenbasis(n);
  Circuit c(n);
  c.append(basis.circuit.inverse());
  DiagonalPhaseGate phases;
  phases.phases.resize(static_cast<std::size_t>(dimension(n)));
  for (Eigen::Index k = 0; k < dimension(n); ++k) {
    phases.phases[static_cast<std::size_t>(k)] = -basis.label_energies(k) * t;
  }
  c.add(std::move(phases));
  c.append(basis.circuit);
  return c;
}

Circuit load_sector_state(const Vector& target, int n_qubits) {
  if (target.size() != dimension(n_qubits)) throw InvalidArgument("load_sector_state: size mismatch");
  // Strip the global phase of the largest amplitude.
  Eigen::Index pivot = 0;
  target.cwiseAbs().maxCoeff(&pivot);
  const Vector v = target * std::polar(1.0, -std::arg(target(pivot)));
  if (v.imag().cwiseAbs().maxCoeff() > 1e-10) {
    throw Unsupported("sector loading needs a real state up to a global phase");
  }

  int excitations = -1;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) < 1e-12) continue;
    const int pc = std::popcount(static_cast<std::uint64_t>(k));
    if (excitations >= 0 && pc != excitations) {
      throw Unsupported("state mixes magnetization sectors");
    }
    excitations = pc;
  }

  Circuit c(n_qubits);
  if (excitations == 0) return c;
  if (excitations == n_qubits && n_qubits > 1) {
    for (int q = 0; q < n_qubits; ++q) c.add(PauliXGate{q});
    return c;
  }
  const bool holes = excitations == n_qubits - 1 && n_qubits > 1 && excitations != 1;
  if (excitations != 1 && !holes) {
    throw Unsupported("only single-excitation or single-hole states can be loaded with Givens gates");
  }

  Eigen::VectorXd w(n_qubits);
  const auto full = dimension(n_qubits) - 1;
  for (int i = 0; i < n_qubits; ++i) {
    const auto idx = holes ? (full & ~site_mask(n_qubits, i)) : site_mask(n_qubits, i);
    w(i) = v(idx).real();
  }

  // e_0 -> c0 e0 + s0 e1 -> ... with amplitudes w_k = |w_{k:}| cos(phi_k).
  c.add(PauliXGate{0});
  for (int k = 0; k + 1 < n_qubits; ++k) {
    const double tail = (k + 2 < n_qubits) ? w.tail(n_qubits - k - 1).norm() : w(n_qubits - 1);
    c.add(GivensGate{k, 0.5 * std::atan2(tail, w(k))});
  }
  if (holes) {
    for (int q = 0; q < n_qubits; ++q) c.add(PauliXGate{q});
  }
  return c;
}

Circuit prepare_product_state_circuit(const Expansion& e, const SampleOutcome& outcome) {
  const auto& term = e.terms().at(outcome.term_index);
  if (outcome.factor_state_indices.size() != term.factors.size()) {
    throw InvalidArgument("outcome does not match the term's factor count");
  }
  Circuit c(e.n_sites());
  int offset = 0;
  for (std::size_t f = 0; f < term.factors.size(); ++f) {
    const auto& factor = term.factors[f];
    const int label = outcome.factor_state_indices[f];
    if (factor.kind == FactorKind::Gibbs) {
      if (e.model() != Model::XY) {
        throw Unsupported("Gibbs factor preparation is only available for the XY chain");
      }
      for (int k = 0; k < factor.size; ++k) {
        if (site_bit(label, factor.size, k)) c.add(PauliXGate{offset + k});
      }
      c.append(xy_eigenbasis(factor.size).circuit, offset);
    } else {
      const auto& spectral = e.cumulant_factor(factor.size).spectral();
      c.append(load_sector_state(spectral.eigenvectors.col(label), factor.size), offset);
    }
    offset += factor.size;
  }
  return c;
}

cplx corr_value(const Statevector& psi, int i, int j, const Circuit& evolution) {
  const int n = psi.n_qubits();
  if (i < 0 || i >= n || j < 0 || j >= n) throw InvalidArgument("corr_value: site out of range");
  Statevector chi = psi;
  chi.apply(evolution);
  Statevector phi = psi;
  phi.apply_z(j);
  phi.apply(evolution);
  phi.apply_z(i);
  return chi.amplitudes().dot(phi.amplitudes());
}

std::vector<MeasurementGroup> h_squared_groups(const Hamiltonian& h) {
  const auto bonds = h.bond_terms();
  const int nb = static_cast<int>(bonds.size());
  constexpr double kTheta = std::numbers::pi / 8.0;
  std::vector<MeasurementGroup> groups;
  for (int b = 0; b < nb; ++b) {
    groups.push_back({GroupKind::Squared, b, b, {{b, b + 1}}, kTheta});
  }
  for (int b = 0; b + 1 < nb; ++b) {
    groups.push_back({GroupKind::Adjacent, b, b + 1, {{b, b + 2}}, kTheta});
  }
  for (int b = 0; b < nb; ++b) {
    for (int c = b + 2; c < nb; ++c) {
      groups.push_back({GroupKind::Disjoint, b, c, {{b, b + 1}, {c, c + 1}}, kTheta});
    }
  }
  return groups;
}

Matrix group_operator(const Hamiltonian& h, const MeasurementGroup& group, int cap) {
  require_dense_cap(h.n_sites(), cap);
  const auto bonds = h.bond_terms();
  auto bond_matrix = [&](int b) {
    Matrix m = Matrix::Zero(dimension(h.n_sites()), dimension(h.n_sites()));
    for (const auto& t : bonds.at(static_cast<std::size_t>(b))) m += to_dense(t, h.n_sites());
    return m;
  };
  const Matrix a = bond_matrix(group.first_bond);
  if (group.kind == GroupKind::Squared) return a * a;
  const Matrix b = bond_matrix(group.second_bond);
  return a * b + b * a;
}

Matrix group_conjugation(int n_sites, const MeasurementGroup& group) {
  Matrix u = identity(n_sites);
  for (const auto& [p, q] : group.givens_pairs) u = givens_dense(n_sites, p, q, group.theta) * u;
  return u;
}

std::string to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::Squared:
      return "squared";
    case GroupKind::Adjacent:
      return "adjacent";
    case GroupKind::Disjoint:
      return "disjoint";
  }
  return "squared";
}

nlohmann::json to_json(const Circuit& circuit) {
  nlohmann::json gates = nlohmann::json::array();
  for (const auto& g : circuit.gates()) {
    std::visit(overloaded{[&](const PauliXGate& x) {
                            gates.push_back({{"kind", "x"}, {"sites", {x.site}}});
                          },
                          [&](const PauliZGate& z) {
                            gates.push_back({{"kind", "z"}, {"sites", {z.site}}});
                          },
                          [&](const GivensGate& gv) {
                            gates.push_back({{"kind", "givens"},
                                             {"sites", {gv.site, gv.site + 1}},
                                             {"theta", gv.theta}});
                          },
                          [&](const DiagonalPhaseGate& d) {
                            gates.push_back({{"kind", "phase"}, {"phases", d.phases}});
                          }},
               g);
  }
  return {{"n_qubits", circuit.n_qubits()}, {"gates", gates}};
}

}  // namespace gibbs
