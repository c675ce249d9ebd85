#include "itemc/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "itemc/rng.hpp"

namespace itemc {

std::string Bitstring::str() const {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i)
    if (bit(i)) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

Bitstring Bitstring::from_string(const std::string& s) {
  if (s.size() > 64) throw std::invalid_argument("bitstring longer than 64 bits");
  Bitstring b{static_cast<int>(s.size()), 0};
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1')
      b.bits |= std::uint64_t{1} << i;
    else if (s[i] != '0')
      throw std::invalid_argument("bitstring must contain only '0' and '1'");
  }
  return b;
}

std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::three_regular: return "three_regular";
    case GraphKind::density: return "density";
    case GraphKind::complete: return "complete";
    case GraphKind::custom: return "custom";
  }
  throw std::logic_error("unknown graph kind");
}

GraphKind graph_kind_from_string(const std::string& s) {
  if (s == "three_regular") return GraphKind::three_regular;
  if (s == "density") return GraphKind::density;
  if (s == "complete") return GraphKind::complete;
  if (s == "custom") return GraphKind::custom;
  throw std::invalid_argument("unknown graph kind: " + s);
}

void IsingInstance::validate() const {
  if (n < 1) throw std::invalid_argument("instance requires n >= 1");
  if (static_cast<int>(h.size()) != n)
    throw std::invalid_argument("field vector size does not match n");
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges) {
    if (e.i < 0 || e.j >= n || e.i >= e.j)
      throw std::invalid_argument("edge (" + std::to_string(e.i) + ", " +
                                  std::to_string(e.j) + ") violates 0 <= i < j < n");
    if (!seen.emplace(e.i, e.j).second)
      throw std::invalid_argument("duplicate edge (" + std::to_string(e.i) + ", " +
                                  std::to_string(e.j) + ")");
  }
}

std::vector<std::vector<std::pair<int, double>>> IsingInstance::adjacency() const {
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(n));
  for (const auto& e : edges) {
    adj[static_cast<std::size_t>(e.i)].emplace_back(e.j, e.coupling);
    adj[static_cast<std::size_t>(e.j)].emplace_back(e.i, e.coupling);
  }
  return adj;
}

double IsingInstance::max_local_field() const {
  std::vector<double> field(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) field[static_cast<std::size_t>(i)] = std::abs(h[i]);
  for (const auto& e : edges) {
    field[static_cast<std::size_t>(e.i)] += std::abs(e.coupling);
    field[static_cast<std::size_t>(e.j)] += std::abs(e.coupling);
  }
  double m = 0.0;
  for (double f : field) m = std::max(m, f);
  return m;
}

double IsingInstance::min_nonzero_coefficient() const {
  double m = 0.0;
  auto consider = [&m](double v) {
    const double a = std::abs(v);
    if (a > 0.0 && (m == 0.0 || a < m)) m = a;
  };
  for (double v : h) consider(v);
  for (const auto& e : edges) consider(e.coupling);
  return m;
}

void QuboMatrix::validate() const {
  if (n < 1) throw std::invalid_argument("QUBO requires n >= 1");
  if (q.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("QUBO matrix size does not match n");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (at(i, j) != at(j, i))
        throw std::invalid_argument("QUBO matrix must be symmetric");
}

double QuboMatrix::value(const Bitstring& x) const {
  if (x.n != n) throw std::invalid_argument("bitstring length does not match QUBO");
  double f = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!x.bit(i)) continue;
    for (int j = 0; j < n; ++j)
      if (x.bit(j)) f += at(i, j);
  }
  return f;
}

namespace {

double quantize4(double v) { return std::round(v * 1e4) / 1e4; }

// All (i, j) pairs with i < j in ascending lexicographic order.
std::vector<std::pair<int, int>> all_pairs(int n) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  return pairs;
}

// Uniform random 3-regular graph via the pairing (configuration) model,
// rejecting pairings with self-loops or parallel edges.
std::vector<std::pair<int, int>> random_three_regular(int n, Rng& rng) {
  std::vector<int> stubs(static_cast<std::size_t>(3 * n));
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < 3; ++k) stubs[static_cast<std::size_t>(3 * v + k)] = v;

  for (int attempt = 0; attempt < 100000; ++attempt) {
    // Fisher-Yates shuffle, then pair consecutive stubs.
    std::vector<int> s = stubs;
    for (std::size_t i = s.size() - 1; i > 0; --i)
      std::swap(s[i], s[rng.uniform_below(i + 1)]);

    std::set<std::pair<int, int>> edge_set;
    bool ok = true;
    for (std::size_t k = 0; k + 1 < s.size(); k += 2) {
      int a = s[k], b = s[k + 1];
      if (a == b) {
        ok = false;
        break;
      }
      if (a > b) std::swap(a, b);
      if (!edge_set.emplace(a, b).second) {
        ok = false;
        break;
      }
    }
    if (ok) return {edge_set.begin(), edge_set.end()};
  }
  throw std::runtime_error("3-regular pairing model failed to produce a simple graph");
}

}  // namespace

IsingInstance sample_random_ising(int n, const GraphSpec& spec, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random instance requires n >= 2");
  Rng rng(seed);

  std::vector<std::pair<int, int>> pairs;
  switch (spec.kind) {
    case GraphKind::complete:
      pairs = all_pairs(n);
      break;
    case GraphKind::three_regular:
      if (n < 4 || n % 2 != 0)
        throw std::invalid_argument("3-regular graphs require even n >= 4");
      pairs = random_three_regular(n, rng);
      break;
    case GraphKind::density: {
      if (!(spec.density > 0.0) || spec.density > 1.0)
        throw std::invalid_argument("graph density must lie in (0, 1]");
      auto pool = all_pairs(n);
      const auto m = static_cast<std::size_t>(
          std::llround(spec.density * static_cast<double>(pool.size())));
      // Partial Fisher-Yates draws m pairs without replacement.
      for (std::size_t k = 0; k < m; ++k)
        std::swap(pool[k], pool[k + rng.uniform_below(pool.size() - k)]);
      pairs.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(m));
      std::sort(pairs.begin(), pairs.end());
      break;
    }
    case GraphKind::custom:
      throw std::invalid_argument("cannot sample a 'custom' graph kind");
  }

  IsingInstance inst;
  inst.n = n;
  inst.h.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) inst.h[static_cast<std::size_t>(i)] = quantize4(rng.uniform_pm1());
  inst.edges.reserve(pairs.size());
  for (const auto& [i, j] : pairs)
    inst.edges.push_back({i, j, quantize4(rng.uniform_pm1())});
  inst.meta = {spec.kind, spec.kind == GraphKind::density ? spec.density : 0.0, seed, true};
  inst.validate();
  return inst;
}

std::pair<IsingInstance, double> qubo_to_ising(const QuboMatrix& qubo) {
  qubo.validate();
  const int n = qubo.n;
  IsingInstance inst;
  inst.n = n;
  inst.h.assign(static_cast<std::size_t>(n), 0.0);
  double offset = 0.0;

  // x_i = (1 - z_i)/2 with x_i^2 = x_i:
  //   f = sum_i Q_ii x_i + 2 sum_{i<j} Q_ij x_i x_j
  //     = offset + sum_i h_i z_i + sum_{i<j} (Q_ij / 2) z_i z_j.
  for (int i = 0; i < n; ++i) {
    inst.h[static_cast<std::size_t>(i)] -= qubo.at(i, i) / 2.0;
    offset += qubo.at(i, i) / 2.0;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double qij = qubo.at(i, j);
      if (qij == 0.0) continue;
      inst.edges.push_back({i, j, qij / 2.0});
      inst.h[static_cast<std::size_t>(i)] -= qij / 2.0;
      inst.h[static_cast<std::size_t>(j)] -= qij / 2.0;
      offset += qij / 2.0;
    }
  }
  inst.meta = {GraphKind::custom, 0.0, 0, false};
  inst.validate();
  return {inst, offset};
}

double ising_energy(const IsingInstance& inst, const Bitstring& x) {
  if (x.n != inst.n)
    throw std::invalid_argument("bitstring length does not match instance");
  return ising_energy_basis(inst, x.bits);
}

double ising_energy_basis(const IsingInstance& inst, std::uint64_t index) {
  auto spin = [index](int i) { return ((index >> i) & 1u) ? -1.0 : 1.0; };
  double e = 0.0;
  for (int i = 0; i < inst.n; ++i) e += inst.h[static_cast<std::size_t>(i)] * spin(i);
  for (const auto& edge : inst.edges) e += edge.coupling * spin(edge.i) * spin(edge.j);
  return e;
}

}  // namespace itemc
