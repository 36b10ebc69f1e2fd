#include "gibbs/cumulants.hpp"

#include <bit>
#include <functional>
#include <mutex>
#include <tuple>

#include "gibbs/error.hpp"

namespace gibbs {

int Composition::total() const {
  int s = 0;
  for (int p : parts) s += p;
  return s;
}

std::vector<Composition> compositions(int n) {
  if (n < 1) throw InvalidArgument("compositions: N must be at least 1");
  std::vector<Composition> out;
  std::vector<int> current;
  std::function<void(int)> rec = [&](int remaining) {
    if (remaining == 0) {
      out.push_back({current});
      return;
    }
    for (int first = remaining; first >= 1; --first) {
      current.push_back(first);
      rec(remaining - first);
      current.pop_back();
    }
  };
  rec(n);
  return out;
}

namespace {

bool conserves_magnetization(const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (std::popcount(static_cast<std::uint64_t>(r)) !=
              std::popcount(static_cast<std::uint64_t>(c)) &&
          std::abs(m(r, c)) > 1e-12) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

Cumulant::Cumulant(int size, DensityOperator op)
    : size_(size),
      op_(std::move(op)),
      spectral_(conserves_magnetization(op_.matrix())
                    ? SpectralDecomposition::by_magnetization(op_.matrix(), op_.n_sites())
                    : SpectralDecomposition::of(op_.matrix())),
      norm1_(spectral_.eigenvalues.cwiseAbs().sum()) {
  if (size < 1 || op_.n_sites() != size) throw InvalidArgument("cumulant size mismatch");
}

Cumulant::SignedSplit Cumulant::signed_split() const {
  const auto& v = spectral_.eigenvectors;
  Eigen::VectorXd pos = spectral_.eigenvalues.cwiseMax(0.0);
  Eigen::VectorXd neg = (-spectral_.eigenvalues).cwiseMax(0.0);
  SignedSplit out;
  const double tp = pos.sum();
  const double tn = neg.sum();
  out.scale = tp;
  out.positive = tp > 0 ? Matrix(v * (pos / tp).cast<cplx>().asDiagonal() * v.adjoint())
                        : Matrix::Zero(v.rows(), v.cols());
  out.negative = tn > 0 ? Matrix(v * (neg / tn).cast<cplx>().asDiagonal() * v.adjoint())
                        : Matrix::Zero(v.rows(), v.cols());
  return out;
}

namespace {

using Key = std::tuple<int, int, std::uint64_t>;

Key make_key(Model model, int m, double beta) {
  return {static_cast<int>(model), m, std::bit_cast<std::uint64_t>(beta)};
}

struct Store {
  std::mutex mutex;
  std::map<Key, std::shared_ptr<const DensityOperator>> states;
  std::map<Key, std::shared_ptr<const Cumulant>> cumulants;
};

Store& store() {
  static Store s;
  return s;
}

void require_builtin(Model model) {
  if (model == Model::Custom) {
    throw InvalidArgument("cluster operators need a translation-invariant built-in model");
  }
}

Matrix gibbs_matrix(Model model, int m, double beta, int cap) {
  return cluster_gibbs_state(model, m, beta, cap)->matrix();
}

}  // namespace

std::shared_ptr<const DensityOperator> cluster_gibbs_state(Model model, int m, double beta,
                                                           int cap) {
  require_builtin(model);
  if (m < 1) throw InvalidArgument("cluster size must be at least 1");
  require_dense_cap(m, cap);
  const Key key = make_key(model, m, beta);
  {
    std::lock_guard lock(store().mutex);
    if (auto it = store().states.find(key); it != store().states.end()) return it->second;
  }
  auto rho = std::make_shared<const DensityOperator>(gibbs_state(build_chain(model, m), beta, cap));
  std::lock_guard lock(store().mutex);
  return store().states.emplace(key, std::move(rho)).first->second;
}

std::shared_ptr<const Cumulant> cumulant(Model model, int m, double beta, int cap) {
  require_builtin(model);
  if (m < 1) throw InvalidArgument("cluster size must be at least 1");
  require_dense_cap(m, cap);
  const Key key = make_key(model, m, beta);
  {
    std::lock_guard lock(store().mutex);
    if (auto it = store().cumulants.find(key); it != store().cumulants.end()) return it->second;
  }
  // Compositions with >= 2 parts grouped by their first part f: the remaining
  // parts run over every composition of m - f and telescope to rho_{m-f}.
  Matrix delta = gibbs_matrix(model, m, beta, cap);
  for (int f = 1; f < m; ++f) {
    delta -= kron(cumulant(model, f, beta, cap)->matrix(), gibbs_matrix(model, m - f, beta, cap));
  }
  delta = 0.5 * (delta + delta.adjoint()).eval();
  auto result = std::make_shared<const Cumulant>(
      m, DensityOperator(std::move(delta), m, m == 1 ? TraceTag::Unit : TraceTag::Zero));
  std::lock_guard lock(store().mutex);
  return store().cumulants.emplace(key, std::move(result)).first->second;
}

Matrix cumulant_by_composition_sum(Model model, int m, double beta, int cap) {
  require_dense_cap(m, cap);
  Matrix delta = gibbs_matrix(model, m, beta, cap);
  for (const auto& c : compositions(m)) {
    if (c.parts.size() < 2) continue;
    std::vector<Matrix> factors;
    for (int p : c.parts) factors.push_back(cumulant(model, p, beta, cap)->matrix());
    delta -= kron_all(factors);
  }
  return delta;
}

Matrix cumulant_by_alternating_sum(Model model, int m, double beta, int cap) {
  require_dense_cap(m, cap);
  Matrix delta = Matrix::Zero(dimension(m), dimension(m));
  for (const auto& c : compositions(m)) {
    std::vector<Matrix> factors;
    for (int p : c.parts) factors.push_back(gibbs_matrix(model, p, beta, cap));
    const double sign = (c.parts.size() % 2 == 1) ? 1.0 : -1.0;
    delta += sign * kron_all(factors);
  }
  return delta;
}

Matrix telescoped_state(Model model, int n, double beta, int cap) {
  require_dense_cap(n, cap);
  Matrix sum = Matrix::Zero(dimension(n), dimension(n));
  for (const auto& c : compositions(n)) {
    std::vector<Matrix> factors;
    for (int p : c.parts) factors.push_back(cumulant(model, p, beta, cap)->matrix());
    sum += kron_all(factors);
  }
  return sum;
}

void clear_cluster_cache() {
  std::lock_guard lock(store().mutex);
  store().states.clear();
  store().cumulants.clear();
}

bool is_connected(const Cluster& cluster) {
  for (std::size_t k = 1; k < cluster.size(); ++k) {
    if (cluster[k] != cluster[k - 1] + 1) return false;
  }
  return !cluster.empty();
}

double lce_weight(const std::map<Cluster, double>& values, const Cluster& cluster) {
  if (cluster.empty()) throw InvalidArgument("lce_weight: empty cluster");
  if (cluster.size() > 20) throw InvalidArgument("lce_weight: cluster too large");
  for (std::size_t k = 1; k < cluster.size(); ++k) {
    if (cluster[k] <= cluster[k - 1]) throw InvalidArgument("lce_weight: sites must be sorted and distinct");
  }
  const std::size_t k = cluster.size();
  const std::uint32_t full = (std::uint32_t{1} << k) - 1;

  auto subset = [&](std::uint32_t mask) {
    Cluster s;
    for (std::size_t b = 0; b < k; ++b) {
      if (mask & (std::uint32_t{1} << b)) s.push_back(cluster[b]);
    }
    return s;
  };

  // Weights of every subset in order of increasing mask; proper submasks of a
  // mask are numerically smaller, so they are ready when needed.
  std::vector<double> weight(full + 1, 0.0);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const auto s = subset(mask);
    const auto it = values.find(s);
    if (it == values.end()) {
      std::string sites;
      for (int v : s) sites += (sites.empty() ? "" : ",") + std::to_string(v);
      throw InvalidArgument("lce_weight: no property value for subcluster {" + sites + "}");
    }
    double w = it->second;
    for (std::uint32_t sub = (mask - 1) & mask; sub != 0; sub = (sub - 1) & mask) {
      w -= weight[sub];
    }
    weight[mask] = w;
  }
  return weight[full];
}

}  // namespace gibbs
