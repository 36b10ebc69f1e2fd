#include "gibbs/observables.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "gibbs/circuits.hpp"
#include "gibbs/error.hpp"
#include "gibbs/exact_gibbs.hpp"
#include "gibbs/sampler.hpp"

namespace gibbs {

double CorrelationTensor::max_deviation(const CorrelationTensor& other) const {
  if (other.values.size() != values.size()) throw InvalidArgument("tensor shapes differ");
  double m = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) m = std::max(m, std::abs(values[k] - other.values[k]));
  return m;
}

std::vector<double> time_grid(double t_max, int steps) {
  if (steps < 1) throw InvalidArgument("time grid needs at least one point");
  if (!(t_max >= 0.0)) throw InvalidArgument("t_max must be non-negative");
  std::vector<double> t(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) t[static_cast<std::size_t>(k)] = steps == 1 ? 0.0 : t_max * k / (steps - 1);
  return t;
}

namespace {

CorrelationTensor empty_tensor(int n, double beta, std::span<const double> times, std::string label) {
  if (times.empty()) throw InvalidArgument("correlation_matrix: empty time grid");
  CorrelationTensor c;
  c.n_sites = n;
  c.times.assign(times.begin(), times.end());
  c.beta = beta;
  c.label = std::move(label);
  c.values.assign(static_cast<std::size_t>(n * n) * times.size(), 0.0);
  return c;
}

/// All C_ij(t_k) for one pure state: per time, chi = U psi, phi_j = U Z_j psi.
std::vector<cplx> state_correlations(const Vector& psi, int n, const std::vector<Circuit>& evolutions) {
  const std::size_t T = evolutions.size();
  std::vector<cplx> out(static_cast<std::size_t>(n * n) * T);
  const Statevector start(psi);
  for (std::size_t k = 0; k < T; ++k) {
    Statevector chi = start;
    chi.apply(evolutions[k]);
    for (int j = 0; j < n; ++j) {
      Statevector phi = start;
      phi.apply_z(j);
      phi.apply(evolutions[k]);
      for (int i = 0; i < n; ++i) {
        Statevector zphi = phi;
        zphi.apply_z(i);
        out[(static_cast<std::size_t>(i) * n + j) * T + k] = chi.amplitudes().dot(zphi.amplitudes());
      }
    }
  }
  return out;
}

std::vector<Circuit> evolution_circuits(Model model, int n, std::span<const double> times) {
  std::vector<Circuit> u;
  u.reserve(times.size());
  for (double t : times) u.push_back(time_evolution_circuit(model, n, t));
  return u;
}

SampleOutcome outcome_for(const QuasiSampler& sampler, std::size_t term, Eigen::Index product) {
  const auto& factors = sampler.expansion().terms()[term].factors;
  SampleOutcome o;
  o.term_index = term;
  o.factor_state_indices.resize(factors.size());
  for (std::size_t f = factors.size(); f-- > 0;) {
    const int size = factors[f].size;
    o.factor_state_indices[f] = static_cast<int>(product & ((Eigen::Index{1} << size) - 1));
    product >>= size;
  }
  for (std::size_t f = 0; f < factors.size(); ++f) {
    const int s = sampler.spectrum(factors[f]).signs[static_cast<std::size_t>(o.factor_state_indices[f])];
    o.sign *= s;
    o.prepared_state.push_back({factors[f], o.factor_state_indices[f], s});
  }
  return o;
}

/// Statevector prepared by the outcome's circuit from |0...0>.
Vector prepared_state(const Expansion& e, const SampleOutcome& o) {
  Statevector psi = Statevector::basis(e.n_sites(), 0);
  psi.apply(prepare_product_state_circuit(e, o));
  return psi.amplitudes();
}

}  // namespace

CorrelationTensor correlation_matrix(const Hamiltonian& h, double beta, std::span<const double> times) {
  const int n = h.n_sites();
  auto c = empty_tensor(n, beta, times, "exact");
  const auto thermal = thermal_spectrum(h, beta);
  const auto& v = thermal.spectrum.eigenvectors;
  const auto& energies = thermal.spectrum.eigenvalues;
  const Matrix rho = v * thermal.weights.cast<cplx>().asDiagonal() * v.adjoint();
  std::vector<Matrix> z;
  for (int i = 0; i < n; ++i) z.push_back(z_operator(n, i));
  for (std::size_t k = 0; k < times.size(); ++k) {
    Vector phases(energies.size());
    for (Eigen::Index a = 0; a < energies.size(); ++a) phases(a) = std::polar(1.0, -energies(a) * times[k]);
    const Matrix u = v * phases.asDiagonal() * v.adjoint();
    for (int i = 0; i < n; ++i) {
      const Matrix zi_t = u.adjoint() * z[static_cast<std::size_t>(i)] * u;
      const Matrix rho_zi = rho * zi_t;
      for (int j = 0; j < n; ++j) {
        c.values[c.index(i, j, k)] = trace_product(rho_zi, z[static_cast<std::size_t>(j)]);
      }
    }
  }
  return c;
}

CorrelationTensor correlation_matrix(const Expansion& e, std::span<const double> times) {
  const int n = e.n_sites();
  auto c = empty_tensor(n, e.beta(), times, "order-" + std::to_string(e.cutoff()));
  const auto evolutions = evolution_circuits(e.model(), n, times);
  const QuasiSampler sampler(e);
  for (std::size_t t = 0; t < e.terms().size(); ++t) {
    std::vector<double> probs;
    std::vector<int> signs;
    sampler.enumerate_term(t, probs, signs);
    const double weight = e.terms()[t].weight_norm;
    for (std::size_t s = 0; s < probs.size(); ++s) {
      const double w = weight * probs[s] * signs[s];
      if (w == 0.0) continue;
      const auto outcome = outcome_for(sampler, t, static_cast<Eigen::Index>(s));
      const auto values = state_correlations(prepared_state(e, outcome), n, evolutions);
      for (std::size_t x = 0; x < values.size(); ++x) c.values[x] += w * values[x];
    }
  }
  return c;
}

CorrelationTensor correlation_matrix(const Expansion& e, std::span<const double> times,
                                     const SamplerConfig& config) {
  if (config.shots == 0) throw InvalidArgument("sampled correlation needs shots > 0");
  const int n = e.n_sites();
  auto c = empty_tensor(n, e.beta(), times, "sampled");
  const auto evolutions = evolution_circuits(e.model(), n, times);
  const QuasiSampler sampler(e);
  const double lambda = sampler.lambda();
  const std::size_t cells = c.values.size();

  std::mutex cache_mutex;
  std::map<std::pair<std::size_t, Eigen::Index>, std::shared_ptr<const std::vector<cplx>>> cache;
  auto values_for = [&](const SampleOutcome& o) {
    const auto key = std::make_pair(o.term_index, sampler.product_index(o));
    {
      std::lock_guard lock(cache_mutex);
      if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto v = std::make_shared<const std::vector<cplx>>(
        state_correlations(prepared_state(e, o), n, evolutions));
    std::lock_guard lock(cache_mutex);
    return cache.emplace(key, std::move(v)).first->second;
  };

  struct Accumulator {
    std::vector<Moments> re;
    std::vector<Moments> im;
  };
  std::vector<Accumulator> partial(kShotChunks);
  for_each_chunk(config.shots, [&](std::size_t chunk, std::uint64_t first, std::uint64_t last) {
    Accumulator acc{std::vector<Moments>(cells), std::vector<Moments>(cells)};
    for (std::uint64_t shot = first; shot < last; ++shot) {
      ShotRng rng(config.seed, shot);
      const auto outcome = sampler.sample(rng);
      const auto values = values_for(outcome);
      const double scale = lambda * outcome.sign;
      for (std::size_t x = 0; x < cells; ++x) {
        acc.re[x].add(scale * (*values)[x].real());
        acc.im[x].add(scale * (*values)[x].imag());
      }
    }
    partial[chunk] = std::move(acc);
  });

  c.stderr_real.assign(cells, 0.0);
  c.stderr_imag.assign(cells, 0.0);
  for (std::size_t x = 0; x < cells; ++x) {
    Moments re;
    Moments im;
    for (const auto& p : partial) {
      if (p.re.empty()) continue;
      re.merge(p.re[x]);
      im.merge(p.im[x]);
    }
    const auto rr = make_report(re, lambda, config.seed);
    const auto ri = make_report(im, lambda, config.seed);
    c.values[x] = {rr.mean, ri.mean};
    c.stderr_real[x] = rr.standard_error;
    c.stderr_imag[x] = ri.standard_error;
  }
  return c;
}

std::vector<double> omega_grid(double dt, int points) {
  if (!(dt > 0.0) || points < 2) throw InvalidArgument("omega_grid needs dt > 0 and >= 2 points");
  const double limit = 2.0 * std::numbers::pi / dt / 4.0;
  std::vector<double> w(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) w[static_cast<std::size_t>(k)] = -limit + 2.0 * limit * k / (points - 1);
  return w;
}

StructureFactorSlice structure_factor(const CorrelationTensor& c, double q, std::span<const double> omegas) {
  const std::size_t T = c.times.size();
  if (T < 2) throw InvalidArgument("structure_factor needs at least two time points");
  if (std::abs(c.times.front()) > 1e-12) throw InvalidArgument("structure_factor: grid must start at t = 0");
  const double dt = c.times[1] - c.times[0];
  for (std::size_t k = 1; k < T; ++k) {
    if (std::abs(c.times[k] - c.times[k - 1] - dt) > 1e-9 * std::max(1.0, std::abs(dt))) {
      throw InvalidArgument("structure_factor: time grid is not uniform");
    }
  }
  const int n = c.n_sites;

  std::vector<cplx> s_q(T, 0.0);
  for (std::size_t k = 0; k < T; ++k) {
    cplx sum = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) sum += c.at(i, j, k) * std::polar(1.0, -q * (i - j));
    }
    s_q[k] = sum / static_cast<double>(n);
  }

  StructureFactorSlice out;
  out.q = q;
  out.omegas.assign(omegas.begin(), omegas.end());
  for (double w : omegas) {
    // t = 0 once, each t_k > 0 together with its mirror -t_k.
    cplx sum = s_q[0];
    for (std::size_t k = 1; k < T; ++k) {
      const cplx f = std::polar(1.0, -w * c.times[k]) * s_q[k];
      const cplx mirror = std::polar(1.0, w * c.times[k]) * std::conj(s_q[k]);
      sum += f + mirror;
    }
    sum *= dt / (2.0 * std::numbers::pi);
    if (std::abs(sum.imag()) > 1e-8) throw DataIntegrityError("structure factor is not real");
    out.values.push_back(sum.real());
  }
  return out;
}

namespace {

struct SquareTerms {
  Matrix h;
  Matrix h_squared;
  std::vector<Matrix> groups;
};

std::shared_ptr<const SquareTerms> build_square_terms(const Hamiltonian& h) {
  auto t = std::make_shared<SquareTerms>();
  t->h = to_dense(h);
  t->h_squared = t->h * t->h;
  for (const auto& g : h_squared_groups(h)) t->groups.push_back(group_operator(h, g));
  return t;
}

/// Dense H, H^2 and the grouped H^2 terms; shared across calls for built-in chains.
std::shared_ptr<const SquareTerms> square_terms(const Hamiltonian& h) {
  if (h.model() == Model::Custom) return build_square_terms(h);
  static std::mutex mutex;
  static std::map<std::pair<Model, int>, std::shared_ptr<const SquareTerms>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[std::make_pair(h.model(), h.n_sites())];
  if (!slot) slot = build_square_terms(h);
  return slot;
}

}  // namespace

EnergyMoments energy_moments(const Hamiltonian& h, const DensityOperator& rho) {
  const auto terms = square_terms(h);
  EnergyMoments m;
  m.mean = real_expectation(rho, terms->h);
  for (const auto& op : terms->groups) m.second += real_expectation(rho, op);
  m.second_dense = real_expectation(rho, terms->h_squared);
  return m;
}

EnergyMoments energy_moments(const Expansion& e) {
  const auto h = build_chain(e.model(), e.n_sites());
  return energy_moments(h, assemble_dense(e));
}

double specific_heat(Model model, int n, double beta, int cap) {
  if (!(beta > 0.0)) throw InvalidArgument("specific heat needs beta > 0 (T = 1/beta)");
  const auto h = build_chain(model, n);
  const auto m = energy_moments(h, gibbs_state(h, beta, cap));
  return beta * beta / n * (m.second - m.mean * m.mean);
}

double specific_heat(const Expansion& e) {
  if (!(e.beta() > 0.0)) throw InvalidArgument("specific heat needs beta > 0 (T = 1/beta)");
  const auto m = energy_moments(e);
  return e.beta() * e.beta() / e.n_sites() * (m.second - m.mean * m.mean);
}

}  // namespace gibbs
