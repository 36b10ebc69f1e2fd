#include "gibbs/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "gibbs/circuits.hpp"
#include "gibbs/error.hpp"

namespace gibbs {

ShotRng::ShotRng(std::uint64_t seed, std::uint64_t shot) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(shot), static_cast<std::uint32_t>(shot >> 32)};
  engine_.seed(seq);
}

double ShotRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t draw_index(std::span<const double> cumulative, double u) {
  if (cumulative.empty()) throw InvalidArgument("draw_index: empty table");
  const double total = cumulative.back();
  if (!(total > 0.0)) return 0;
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u * total);
  return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

namespace {

std::vector<double> running_sum(const std::vector<double>& p) {
  std::vector<double> c(p.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) c[k] = (acc += p[k]);
  return c;
}

FactorSpectrum gibbs_spectrum(const Expansion& e, int size) {
  FactorSpectrum out;
  out.factor = {FactorKind::Gibbs, size};
  Eigen::VectorXd energies;
  if (e.model() == Model::XY) {
    const auto basis = xy_eigenbasis(size);
    out.basis = basis.circuit.unitary();
    energies = basis.label_energies;
  } else {
    const auto spectral =
        SpectralDecomposition::by_magnetization(to_dense(build_chain(e.model(), size), e.cap()), size);
    out.basis = spectral.eigenvectors;
    energies = spectral.eigenvalues;
  }
  const double e0 = energies.minCoeff();
  Eigen::VectorXd w = (-e.beta() * (energies.array() - e0)).exp();
  w /= w.sum();
  out.probabilities.assign(w.data(), w.data() + w.size());
  out.signs.assign(out.probabilities.size(), 1);
  out.cumulative = running_sum(out.probabilities);
  return out;
}

FactorSpectrum cumulant_spectrum(const Cumulant& c) {
  FactorSpectrum out;
  out.factor = {FactorKind::Cumulant, c.size()};
  out.basis = c.spectral().eigenvectors;
  const auto& g = c.spectral().eigenvalues;
  const double norm = c.norm1();
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    out.probabilities.push_back(norm > 0.0 ? std::abs(g(k)) / norm : 0.0);
    out.signs.push_back(g(k) < 0.0 ? -1 : 1);
  }
  out.cumulative = running_sum(out.probabilities);
  return out;
}

}  // namespace

QuasiSampler::QuasiSampler(const Expansion& e) : e_(std::make_shared<const Expansion>(e)) {
  for (const auto& t : e_->terms()) term_prob_.push_back(t.weight_norm / e_->lambda());
  term_cumulative_ = running_sum(term_prob_);

  gibbs_.resize(static_cast<std::size_t>(e_->n_sites()) + 1);
  cumulant_.resize(static_cast<std::size_t>(e_->n_sites()) + 1);
  for (const auto& t : e_->terms()) {
    for (const auto& f : t.factors) {
      auto& slot = (f.kind == FactorKind::Gibbs ? gibbs_ : cumulant_)[static_cast<std::size_t>(f.size)];
      if (!slot.probabilities.empty()) continue;
      slot = f.kind == FactorKind::Gibbs ? gibbs_spectrum(*e_, f.size)
                                         : cumulant_spectrum(e_->cumulant_factor(f.size));
    }
  }
}

const FactorSpectrum& QuasiSampler::spectrum(const Factor& f) const {
  const auto& table = f.kind == FactorKind::Gibbs ? gibbs_ : cumulant_;
  const auto idx = static_cast<std::size_t>(f.size);
  if (idx >= table.size() || table[idx].probabilities.empty()) {
    throw InvalidArgument("sampler has no spectrum for the requested factor");
  }
  return table[idx];
}

std::size_t QuasiSampler::sample_term(ShotRng& rng) const {
  return draw_index(term_cumulative_, rng.uniform());
}

SampleOutcome QuasiSampler::sample_state(std::size_t term_index, ShotRng& rng) const {
  const auto& term = e_->terms().at(term_index);
  SampleOutcome out;
  out.term_index = term_index;
  for (const auto& f : term.factors) {
    const auto& s = spectrum(f);
    const auto k = draw_index(s.cumulative, rng.uniform());
    out.factor_state_indices.push_back(static_cast<int>(k));
    out.sign *= s.signs[k];
    out.prepared_state.push_back({f, static_cast<int>(k), s.signs[k]});
  }
  return out;
}

SampleOutcome QuasiSampler::sample(ShotRng& rng) const {
  const auto t = sample_term(rng);
  return sample_state(t, rng);
}

Eigen::Index QuasiSampler::product_index(const SampleOutcome& outcome) const {
  const auto& term = e_->terms().at(outcome.term_index);
  Eigen::Index idx = 0;
  for (std::size_t f = 0; f < term.factors.size(); ++f) {
    idx = (idx << term.factors[f].size) + outcome.factor_state_indices.at(f);
  }
  return idx;
}

Vector QuasiSampler::product_state(const SampleOutcome& outcome) const {
  const auto& term = e_->terms().at(outcome.term_index);
  Vector psi = Vector::Ones(1);
  for (std::size_t f = 0; f < term.factors.size(); ++f) {
    psi = kron(psi, Vector(spectrum(term.factors[f]).basis.col(outcome.factor_state_indices.at(f))));
  }
  return psi;
}

Matrix QuasiSampler::term_basis(std::size_t term_index) const {
  Matrix b = Matrix::Identity(1, 1);
  for (const auto& f : e_->terms().at(term_index).factors) b = kron(b, spectrum(f).basis);
  return b;
}

void QuasiSampler::enumerate_term(std::size_t term_index, std::vector<double>& probs,
                                  std::vector<int>& signs) const {
  probs.assign(1, 1.0);
  signs.assign(1, 1);
  for (const auto& f : e_->terms().at(term_index).factors) {
    const auto& s = spectrum(f);
    std::vector<double> p2;
    std::vector<int> s2;
    p2.reserve(probs.size() * s.probabilities.size());
    for (std::size_t a = 0; a < probs.size(); ++a) {
      for (std::size_t b = 0; b < s.probabilities.size(); ++b) {
        p2.push_back(probs[a] * s.probabilities[b]);
        s2.push_back(signs[a] * s.signs[b]);
      }
    }
    probs = std::move(p2);
    signs = std::move(s2);
  }
}

nlohmann::json to_json(const EstimatorReport& r) {
  return {{"seed", r.seed},     {"shots", r.shots},         {"lambda", r.lambda},
          {"mean", r.mean},     {"stderr", r.standard_error}, {"second_moment", r.second_moment}};
}

EstimatorReport make_report(const Moments& m, double lambda, std::uint64_t seed) {
  EstimatorReport r;
  r.shots = m.count;
  r.lambda = lambda;
  r.seed = seed;
  if (m.count == 0) return r;
  const double n = static_cast<double>(m.count);
  r.mean = m.sum / n;
  r.second_moment = m.sum_sq / n;
  const double var = m.count > 1 ? std::max(0.0, (m.sum_sq - n * r.mean * r.mean) / (n - 1.0)) : 0.0;
  r.standard_error = std::sqrt(var / n);
  return r;
}

void for_each_chunk(std::uint64_t shots,
                    const std::function<void(std::size_t, std::uint64_t, std::uint64_t)>& per_chunk) {
  const std::uint64_t chunks = std::min<std::uint64_t>(kShotChunks, std::max<std::uint64_t>(shots, 1));
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      const std::uint64_t first = shots * c / chunks;
      const std::uint64_t last = shots * (c + 1) / chunks;
      per_chunk(static_cast<std::size_t>(c), first, last);
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const auto n_workers = static_cast<unsigned>(std::min<std::uint64_t>(hw, chunks));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

EstimatorReport estimate(const Expansion& e, const Matrix& observable, std::uint64_t shots,
                         std::uint64_t seed, SamplingMode mode) {
  if (shots == 0) throw InvalidArgument("estimate: shots must be positive");
  if (observable.rows() != dimension(e.n_sites()) || observable.cols() != dimension(e.n_sites())) {
    throw InvalidArgument("estimate: observable dimension does not match the expansion");
  }
  if (hermiticity_defect(observable) > 1e-10) {
    throw InvalidArgument("estimate: observable must be Hermitian");
  }
  const QuasiSampler sampler(e);
  const double lambda = sampler.lambda();

  // <psi|O|psi> for every product eigenstate of every reachable term.
  std::vector<Eigen::VectorXd> diag(e.terms().size());
  std::vector<double> stratified(e.terms().size(), 0.0);
  for (std::size_t t = 0; t < e.terms().size(); ++t) {
    if (sampler.term_probabilities()[t] <= 0.0) continue;
    const Matrix b = sampler.term_basis(t);
    diag[t] = (b.adjoint().array() * (observable * b).transpose().array()).rowwise().sum().real();
    if (mode == SamplingMode::Stratified) {
      std::vector<double> probs;
      std::vector<int> signs;
      sampler.enumerate_term(t, probs, signs);
      double v = 0.0;
      for (std::size_t k = 0; k < probs.size(); ++k) v += probs[k] * signs[k] * diag[t](static_cast<Eigen::Index>(k));
      stratified[t] = v;
    }
  }

  std::vector<Moments> partial(kShotChunks);
  for_each_chunk(shots, [&](std::size_t chunk, std::uint64_t first, std::uint64_t last) {
    Moments m;
    for (std::uint64_t shot = first; shot < last; ++shot) {
      ShotRng rng(seed, shot);
      if (mode == SamplingMode::Stratified) {
        m.add(lambda * stratified[sampler.sample_term(rng)]);
      } else {
        const auto outcome = sampler.sample(rng);
        m.add(lambda * outcome.sign * diag[outcome.term_index](sampler.product_index(outcome)));
      }
    }
    partial[chunk] = m;
  });
  Moments total;
  for (const auto& m : partial) total.merge(m);
  return make_report(total, lambda, seed);
}

}  // namespace gibbs
