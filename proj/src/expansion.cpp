#include "gibbs/expansion.hpp"

#include <algorithm>
#include <cmath>

#include "gibbs/error.hpp"

namespace gibbs {

int ExpansionTerm::total_sites() const {
  int s = 0;
  for (const auto& f : factors) s += f.size;
  return s;
}

bool ExpansionTerm::has_cumulant() const {
  return std::any_of(factors.begin(), factors.end(),
                     [](const Factor& f) { return f.kind == FactorKind::Cumulant; });
}

const DensityOperator& Expansion::gibbs_factor(int size) const {
  if (size < 1 || size >= static_cast<int>(gibbs_.size()) || !gibbs_[size]) {
    throw InvalidArgument("expansion has no Gibbs factor of size " + std::to_string(size));
  }
  return *gibbs_[size];
}

const Cumulant& Expansion::cumulant_factor(int size) const {
  if (size < 1 || size >= static_cast<int>(cumulants_.size()) || !cumulants_[size]) {
    throw InvalidArgument("expansion has no cumulant factor of size " + std::to_string(size));
  }
  return *cumulants_[size];
}

const Matrix& Expansion::factor_matrix(const Factor& f) const {
  return f.kind == FactorKind::Gibbs ? gibbs_factor(f.size).matrix()
                                     : cumulant_factor(f.size).matrix();
}

Matrix Expansion::term_matrix(std::size_t index) const {
  require_dense_cap(n_, cap_);
  const auto& term = terms_.at(index);
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& f : term.factors) out = kron(out, factor_matrix(f));
  return out;
}

int placement_count(int cluster_size, int k) {
  // Left overlap a runs over [max(1, k - M), min(k - 1, M)].
  const int lo = std::max(1, k - cluster_size);
  const int hi = std::min(k - 1, cluster_size);
  return std::max(0, hi - lo + 1);
}

Expansion refined_expansion(Model model, int n, int cluster_size, int cutoff, double beta,
                            int cap) {
  if (cluster_size < 1 || n != 2 * cluster_size) {
    throw InvalidArgument("refined_expansion: N must equal 2M (got N=" + std::to_string(n) +
                          ", M=" + std::to_string(cluster_size) + ")");
  }
  if (cutoff < 1 || cutoff > std::min(n, cap)) {
    throw InvalidArgument("refined_expansion: cutoff " + std::to_string(cutoff) +
                          " outside [1, " + std::to_string(std::min(n, cap)) + "]");
  }
  if (!(beta >= 0.0)) throw InvalidArgument("beta must be non-negative");
  require_dense_cap(cluster_size, cap);

  Expansion e;
  e.model_ = model;
  e.beta_ = beta;
  e.n_ = n;
  e.m_ = cluster_size;
  e.cutoff_ = cutoff;
  e.cap_ = cap;
  e.gibbs_.resize(static_cast<std::size_t>(cluster_size) + 1);
  e.cumulants_.resize(static_cast<std::size_t>(cutoff) + 1);

  auto gibbs_of = [&](int size) {
    if (!e.gibbs_[size]) e.gibbs_[size] = cluster_gibbs_state(model, size, beta, cap);
  };
  gibbs_of(cluster_size);
  e.terms_.push_back({{{FactorKind::Gibbs, cluster_size}, {FactorKind::Gibbs, cluster_size}}, 1.0});

  for (int k = 2; k <= cutoff; ++k) {
    if (placement_count(cluster_size, k) == 0) continue;
    e.cumulants_[k] = cumulant(model, k, beta, cap);
    const double norm = e.cumulants_[k]->norm1();
    for (int a = std::min(k - 1, cluster_size); a >= std::max(1, k - cluster_size); --a) {
      const int left = cluster_size - a;
      const int right = cluster_size - (k - a);
      ExpansionTerm term;
      if (left > 0) {
        gibbs_of(left);
        term.factors.push_back({FactorKind::Gibbs, left});
      }
      term.factors.push_back({FactorKind::Cumulant, k});
      if (right > 0) {
        gibbs_of(right);
        term.factors.push_back({FactorKind::Gibbs, right});
      }
      term.weight_norm = norm;
      e.terms_.push_back(std::move(term));
    }
  }

  e.lambda_ = 1.0;
  for (const auto& t : e.terms_) {
    if (t.has_cumulant()) e.lambda_ += t.weight_norm;
  }
  return e;
}

Expansion expansion_at_order(Model model, int n, int cluster_size, int order, double beta,
                             int cap) {
  return refined_expansion(model, n, cluster_size, order, beta, cap);
}

double negativity(const Expansion& e) {
  double lambda = 1.0;
  for (const auto& t : e.terms()) {
    if (t.has_cumulant()) lambda += t.weight_norm;
  }
  return lambda;
}

BiasBound bias_bound(const Expansion& e, double observable_norm) {
  BiasBound out;
  out.largest_included = e.cutoff();
  double sum = 0.0;
  for (int m = e.cutoff() + 1; m <= e.n_sites(); ++m) {
    const int placements = placement_count(e.cluster_size(), m);
    if (placements == 0) continue;
    if (m > e.cap()) {
      out.complete = false;
      break;
    }
    sum += placements * cumulant(e.model(), m, e.beta(), e.cap())->norm1();
    out.largest_included = m;
  }
  out.value = observable_norm * sum;
  return out;
}

DensityOperator assemble_dense(const Expansion& e) {
  require_dense_cap(e.n_sites(), e.cap());
  Matrix sum = Matrix::Zero(dimension(e.n_sites()), dimension(e.n_sites()));
  for (std::size_t t = 0; t < e.terms().size(); ++t) sum += e.term_matrix(t);
  sum = 0.5 * (sum + sum.adjoint()).eval();
  return DensityOperator(std::move(sum), e.n_sites(), TraceTag::Unit);
}

cplx term_trace(const Expansion& e, std::size_t term_index, const Matrix& observable) {
  if (observable.rows() != dimension(e.n_sites()) || observable.cols() != dimension(e.n_sites())) {
    throw InvalidArgument("observable dimension does not match the expansion");
  }
  return trace_product(e.term_matrix(term_index), observable);
}

cplx trace_against(const Expansion& e, const Matrix& observable) {
  cplx sum = 0.0;
  for (std::size_t t = 0; t < e.terms().size(); ++t) sum += term_trace(e, t, observable);
  return sum;
}

double expectation_deterministic(const Expansion& e, const Matrix& observable) {
  const cplx v = trace_against(e, observable);
  if (hermiticity_defect(observable) > 1e-10 * std::max(1.0, max_abs(observable)) || std::abs(v.imag()) > 1e-10) {
    throw InvalidArgument("expectation_deterministic: observable is not Hermitian");
  }
  return v.real();
}

std::string describe(const ExpansionTerm& term) {
  std::string out;
  for (const auto& f : term.factors) {
    if (!out.empty()) out += " x ";
    out += (f.kind == FactorKind::Gibbs ? "rho" : "Delta") + std::to_string(f.size);
  }
  return out;
}

nlohmann::json to_json(const Expansion& e) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : e.terms()) {
    nlohmann::json factors = nlohmann::json::array();
    for (const auto& f : t.factors) {
      factors.push_back({{"kind", f.kind == FactorKind::Gibbs ? "gibbs" : "cumulant"},
                         {"size", f.size}});
    }
    terms.push_back({{"factors", factors}, {"weight_norm", t.weight_norm}, {"label", describe(t)}});
  }
  nlohmann::json norms = nlohmann::json::object();
  for (int k = 2; k <= e.cutoff(); ++k) {
    if (placement_count(e.cluster_size(), k) > 0) {
      norms[std::to_string(k)] = e.cumulant_factor(k).norm1();
    }
  }
  return {{"model", to_string(e.model())},
          {"beta", e.beta()},
          {"N", e.n_sites()},
          {"M", e.cluster_size()},
          {"m_c", e.cutoff()},
          {"lambda", e.lambda()},
          {"cumulant_norms", norms},
          {"terms", terms}};
}

double local_observable_with_corrections(Model model, const RegionSizes& regions,
                                         const Matrix& observable_a, double beta,
                                         int max_correction, int cap) {
  const int a = regions.a;
  const int b = regions.b;
  const int c = regions.c;
  if (a < 1 || b < 0 || c < 0) throw InvalidArgument("region sizes must satisfy |A| >= 1, |B|, |C| >= 0");
  if (observable_a.rows() != dimension(a) || observable_a.cols() != dimension(a)) {
    throw InvalidArgument("observable must be supported on region A (" + std::to_string(a) +
                          " sites)");
  }
  const int ab = a + b;
  require_dense_cap(ab, cap);
  const Matrix o_ab = kron(observable_a, identity(b));

  double value = real_expectation(*cluster_gibbs_state(model, ab, beta, cap), o_ab);

  // A straddling Delta_k with l sites inside AB contributes only when it reaches
  // into A (l > |B|); otherwise tracing it out leaves Tr[Delta_k] = 0.
  for (int k = 2; k <= max_correction; ++k) {
    for (int l = b + 1; l <= std::min(k - 1, ab); ++l) {
      if (k - l > c) continue;
      require_dense_cap(k, cap);
      const Matrix reduced = partial_trace_tail(cumulant(model, k, beta, cap)->matrix(), l, k - l);
      const int left = ab - l;
      const Matrix op = left > 0 ? kron(cluster_gibbs_state(model, left, beta, cap)->matrix(), reduced)
                                 : reduced;
      value += trace_product(op, o_ab).real();
    }
  }
  return value;
}

}  // namespace gibbs
