#include "gibbs/hamiltonian.hpp"

#include <algorithm>
#include <cctype>

#include "gibbs/error.hpp"

namespace gibbs {

std::string to_string(Model model) {
  switch (model) {
    case Model::XY:
      return "xy";
    case Model::Heisenberg:
      return "heisenberg";
    case Model::Custom:
      return "custom";
  }
  return "custom";
}

Model parse_model(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "xy") return Model::XY;
  if (lower == "heisenberg") return Model::Heisenberg;
  if (lower == "custom") return Model::Custom;
  throw InvalidArgument("unknown model '" + std::string(name) +
                        "' (expected xy or heisenberg)");
}

Hamiltonian::Hamiltonian(int n_sites, std::vector<PauliString> terms, Model model)
    : n_sites_(n_sites), terms_(std::move(terms)), model_(model) {
  if (n_sites < 1) throw InvalidArgument("a chain needs at least one site");
  for (const auto& term : terms_) {
    if (term.factors.empty()) {
      throw InvalidArgument("Pauli string without factors (identity terms are not allowed)");
    }
    int previous = -1;
    for (const auto& f : term.factors) {
      if (f.site <= previous) throw InvalidArgument("Pauli string sites must be strictly increasing");
      if (f.site >= n_sites) throw InvalidArgument("Pauli string site out of range");
      previous = f.site;
    }
  }
}

bool Hamiltonian::is_nearest_neighbor() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const PauliString& t) {
    return t.last_site() - t.first_site() <= 1;
  });
}

std::vector<std::vector<PauliString>> Hamiltonian::bond_terms() const {
  std::vector<std::vector<PauliString>> bonds(static_cast<std::size_t>(std::max(n_sites_ - 1, 0)));
  for (const auto& t : terms_) {
    if (t.last_site() - t.first_site() != 1) {
      throw InvalidArgument("bond_terms requires every term to act on a nearest-neighbor pair");
    }
    bonds[static_cast<std::size_t>(t.first_site())].push_back(t);
  }
  return bonds;
}

namespace {

std::vector<PauliString> bond(Model model, int i) {
  std::vector<PauliString> out;
  out.push_back({{{i, Axis::X}, {i + 1, Axis::X}}, 1.0});
  out.push_back({{{i, Axis::Y}, {i + 1, Axis::Y}}, 1.0});
  if (model == Model::Heisenberg) out.push_back({{{i, Axis::Z}, {i + 1, Axis::Z}}, 1.0});
  return out;
}

}  // namespace

Hamiltonian build_chain(Model model, int n) {
  if (n < 1) throw InvalidArgument("build_chain: n must be at least 1");
  if (model == Model::Custom) throw InvalidArgument("build_chain: custom models have no builder");
  std::vector<PauliString> terms;
  for (int i = 0; i + 1 < n; ++i) {
    auto b = bond(model, i);
    terms.insert(terms.end(), b.begin(), b.end());
  }
  return Hamiltonian(n, std::move(terms), model);
}

Hamiltonian subchain(const Hamiltonian& h, int start, int length) {
  if (length < 1 || start < 0 || start + length > h.n_sites()) {
    throw InvalidArgument("subchain window [" + std::to_string(start) + ", " +
                          std::to_string(start + length) + ") outside chain of " +
                          std::to_string(h.n_sites()) + " sites");
  }
  std::vector<PauliString> terms;
  for (const auto& t : h.terms()) {
    if (t.first_site() >= start && t.last_site() < start + length) {
      PauliString shifted = t;
      for (auto& f : shifted.factors) f.site -= start;
      terms.push_back(std::move(shifted));
    }
  }
  return Hamiltonian(length, std::move(terms), h.model());
}

Matrix to_dense(const PauliString& term, int n_sites) {
  const auto dim = dimension(n_sites);
  Matrix out = Matrix::Zero(dim, dim);
  Eigen::Index flip = 0;
  for (const auto& f : term.factors) {
    if (f.axis != Axis::Z) flip |= Eigen::Index{1} << (n_sites - 1 - f.site);
  }
  // P|k> = phase(k) |k ^ flip>; X: 1, Y: i(-1)^bit, Z: (-1)^bit.
  for (Eigen::Index k = 0; k < dim; ++k) {
    cplx phase = term.coefficient;
    for (const auto& f : term.factors) {
      const int bit = site_bit(k, n_sites, f.site);
      switch (f.axis) {
        case Axis::X:
          break;
        case Axis::Y:
          phase *= bit ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
          break;
        case Axis::Z:
          if (bit) phase = -phase;
          break;
      }
    }
    out(k ^ flip, k) += phase;
  }
  return out;
}

Matrix to_dense(const Hamiltonian& h, int cap) {
  require_dense_cap(h.n_sites(), cap);
  const auto dim = dimension(h.n_sites());
  Matrix out = Matrix::Zero(dim, dim);
  for (const auto& t : h.terms()) out += to_dense(t, h.n_sites());
  return out;
}

Matrix total_magnetization(int n_sites) {
  Matrix m = Matrix::Zero(dimension(n_sites), dimension(n_sites));
  for (int i = 0; i < n_sites; ++i) m += z_operator(n_sites, i);
  return m;
}

}  // namespace gibbs
