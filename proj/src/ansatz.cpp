#include "itemc/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace itemc {

std::string to_string(OrderingKind kind) {
  switch (kind) {
    case OrderingKind::original: return "original";
    case OrderingKind::ascending_j: return "ascending_J";
    case OrderingKind::descending_j: return "descending_J";
    case OrderingKind::ascending_abs_j: return "ascending_absJ";
    case OrderingKind::descending_abs_j: return "descending_absJ";
  }
  throw std::logic_error("unknown ordering kind");
}

OrderingKind ordering_kind_from_string(const std::string& s) {
  if (s == "original") return OrderingKind::original;
  if (s == "ascending_J") return OrderingKind::ascending_j;
  if (s == "descending_J") return OrderingKind::descending_j;
  if (s == "ascending_absJ") return OrderingKind::ascending_abs_j;
  if (s == "descending_absJ") return OrderingKind::descending_abs_j;
  throw std::invalid_argument("unknown ordering kind: " + s);
}

GateOrdering make_ordering(const IsingInstance& inst, OrderingKind kind) {
  GateOrdering ordering;
  ordering.label = to_string(kind);
  ordering.permutation.resize(inst.edges.size());
  for (std::size_t k = 0; k < inst.edges.size(); ++k)
    ordering.permutation[k] = static_cast<int>(k);
  auto key = [&inst](int e) { return inst.edges[static_cast<std::size_t>(e)].coupling; };
  // stable_sort keeps ties in ascending original edge index.
  switch (kind) {
    case OrderingKind::original:
      break;
    case OrderingKind::ascending_j:
      std::stable_sort(ordering.permutation.begin(), ordering.permutation.end(),
                       [&](int a, int b) { return key(a) < key(b); });
      break;
    case OrderingKind::descending_j:
      std::stable_sort(ordering.permutation.begin(), ordering.permutation.end(),
                       [&](int a, int b) { return key(a) > key(b); });
      break;
    case OrderingKind::ascending_abs_j:
      std::stable_sort(ordering.permutation.begin(), ordering.permutation.end(),
                       [&](int a, int b) { return std::abs(key(a)) < std::abs(key(b)); });
      break;
    case OrderingKind::descending_abs_j:
      std::stable_sort(ordering.permutation.begin(), ordering.permutation.end(),
                       [&](int a, int b) { return std::abs(key(a)) > std::abs(key(b)); });
      break;
  }
  return ordering;
}

std::array<GateOrdering, 5> gate_orderings(const IsingInstance& inst) {
  return {make_ordering(inst, OrderingKind::original),
          make_ordering(inst, OrderingKind::ascending_j),
          make_ordering(inst, OrderingKind::descending_j),
          make_ordering(inst, OrderingKind::ascending_abs_j),
          make_ordering(inst, OrderingKind::descending_abs_j)};
}

GateOrdering random_ordering(const IsingInstance& inst, std::uint64_t seed) {
  GateOrdering ordering = make_ordering(inst, OrderingKind::original);
  ordering.label = "random";
  Rng rng(seed);
  auto& p = ordering.permutation;
  for (std::size_t k = p.size(); k > 1; --k)
    std::swap(p[k - 1], p[rng.uniform_below(k)]);
  return ordering;
}

double single_qubit_angle(double h, double tau, double phi) {
  if (phi < 0.0 || phi > std::numbers::pi)
    throw std::invalid_argument("initialization angle must lie in [0, pi]");
  // tan(phi'/2) = exp(2 tau h) tan(phi/2); the symmetric exp split keeps the
  // atan2 arguments finite and handles the pinned endpoints exactly.
  const double phi_next = 2.0 * std::atan2(std::exp(tau * h) * std::sin(phi / 2.0),
                                           std::exp(-tau * h) * std::cos(phi / 2.0));
  return phi_next - phi;
}

double single_qubit_cost(double theta, const SingleQubitMoments& m, double tau_eff) {
  const double ch = std::cosh(tau_eff), sh = std::sinh(tau_eff);
  // Real part of <psi| exp(-tau Z) R_y(theta) |psi>; the sinh <X> term enters
  // real (it pairs with the interior imaginary unit, matching the two-qubit
  // pattern) so that the maximizer reproduces the closed-form angle.
  return std::cos(theta / 2.0) * (ch - sh * m.z) + std::sin(theta / 2.0) * sh * m.x;
}

namespace {

// Re f = A c0 c1 + B s0 c1 + C c0 s1 + D s0 s1 in the half angles.
struct CostCoeffs {
  double a, b, c, d;

  static CostCoeffs from(const TwoQubitMoments& m, double tau_eff) {
    const double ch = std::cosh(tau_eff), sh = std::sinh(tau_eff);
    return {ch - sh * m.zz, sh * m.xi, sh * m.xj, -(ch * m.xx + sh * m.yy)};
  }

  double value(double t0, double t1) const {
    const double c0 = std::cos(t0 / 2.0), s0 = std::sin(t0 / 2.0);
    const double c1 = std::cos(t1 / 2.0), s1 = std::sin(t1 / 2.0);
    return a * c0 * c1 + b * s0 * c1 + c * c0 * s1 + d * s0 * s1;
  }

  void gradient(double t0, double t1, double* g0, double* g1) const {
    const double c0 = std::cos(t0 / 2.0), s0 = std::sin(t0 / 2.0);
    const double c1 = std::cos(t1 / 2.0), s1 = std::sin(t1 / 2.0);
    *g0 = 0.5 * (-a * s0 * c1 + b * c0 * c1 - c * s0 * s1 + d * c0 * s1);
    *g1 = 0.5 * (-a * c0 * s1 - b * s0 * s1 + c * c0 * c1 + d * s0 * c1);
  }

  void hessian(double t0, double t1, double* h00, double* h01, double* h11) const {
    const double c0 = std::cos(t0 / 2.0), s0 = std::sin(t0 / 2.0);
    const double c1 = std::cos(t1 / 2.0), s1 = std::sin(t1 / 2.0);
    *h00 = -0.25 * (a * c0 * c1 + b * s0 * c1 + c * c0 * s1 + d * s0 * s1);
    *h11 = *h00;
    *h01 = 0.25 * (a * s0 * s1 - b * c0 * s1 - c * s0 * c1 + d * c0 * c1);
  }
};

double clamp_angle(double t) {
  return std::clamp(t, -std::numbers::pi, std::numbers::pi);
}

}  // namespace

double two_qubit_cost(double theta0, double theta1, const TwoQubitMoments& m,
                      double tau_eff) {
  return CostCoeffs::from(m, tau_eff).value(theta0, theta1);
}

GateOptResult optimize_gate_params(const TwoQubitMoments& m, double tau_eff) {
  const CostCoeffs f = CostCoeffs::from(m, tau_eff);
  constexpr int kMaxIters = 10000;

  GateOptResult res;
  res.cost = f.value(0.0, 0.0);

  double t0 = 0.0, t1 = 0.0, cost = res.cost;
  double g0, g1;
  f.gradient(t0, t1, &g0, &g1);

  // A vanishing gradient at the start is either the optimum or a saddle;
  // probe a few fixed directions before giving up.
  if (std::hypot(g0, g1) < 1e-14) {
    static constexpr double kDirs[8][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                           {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
    bool moved = false;
    for (double step : {0.5, 0.1}) {
      for (const auto& dir : kDirs) {
        const double u0 = clamp_angle(dir[0] * step), u1 = clamp_angle(dir[1] * step);
        const double v = f.value(u0, u1);
        if (v > cost + 1e-15) {
          t0 = u0;
          t1 = u1;
          cost = v;
          moved = true;
          break;
        }
      }
      if (moved) break;
    }
    if (!moved) return res;  // (0, 0) is the maximizer
  }

  // Gradient ascent with backtracking, then Newton polish near the optimum.
  double step = 1.0;
  int it = 0;
  int stalled = 0;
  for (; it < kMaxIters; ++it) {
    f.gradient(t0, t1, &g0, &g1);
    const double gnorm = std::hypot(g0, g1);
    if (gnorm < 1e-11) break;
    bool accepted = false;
    const double before = cost;
    for (int back = 0; back < 60; ++back) {
      const double u0 = clamp_angle(t0 + step * g0), u1 = clamp_angle(t1 + step * g1);
      const double v = f.value(u0, u1);
      if (v >= cost + 1e-4 * step * gnorm * gnorm) {
        t0 = u0;
        t1 = u1;
        cost = v;
        step = std::min(step * 1.5, 4.0);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    // Sub-epsilon progress: hand over to the polish.
    stalled = cost - before < 1e-15 ? stalled + 1 : 0;
    if (stalled >= 3) break;
  }

  // Damped Newton polish. The Hessian has eigenvalues h00 +- |h01| here
  // (equal diagonal); shifting by the largest keeps the step an ascent
  // direction even on flat ridges, where the Hessian is singular.
  for (int polish = 0; polish < 80; ++polish) {
    f.gradient(t0, t1, &g0, &g1);
    if (std::hypot(g0, g1) < 1e-13) break;
    double h00, h01, h11;
    f.hessian(t0, t1, &h00, &h01, &h11);
    const double lambda_max = h00 + std::abs(h01);
    const double shift = lambda_max > -1e-9 ? lambda_max + 0.1 : 0.0;
    const double a00 = h00 - shift, a11 = h11 - shift;
    const double det = a00 * a11 - h01 * h01;
    if (det <= 0.0) break;
    const double d0 = (-a11 * g0 + h01 * g1) / det;
    const double d1 = (h01 * g0 - a00 * g1) / det;
    const double u0 = clamp_angle(t0 + d0), u1 = clamp_angle(t1 + d1);
    const double v = f.value(u0, u1);
    if (v < cost - 1e-15) break;
    t0 = u0;
    t1 = u1;
    cost = std::max(cost, v);
  }

  f.gradient(t0, t1, &g0, &g1);
  res.theta0 = t0;
  res.theta1 = t1;
  res.cost = cost;
  res.iterations = it;
  res.converged = std::hypot(g0, g1) < 1e-7;
  return res;
}

TwoQubitMoments edge_moments(const StateVector& state, int i, int j) {
  const int n = state.num_qubits();
  if (i < 0 || i >= n || j < 0 || j >= n || i == j)
    throw std::invalid_argument("invalid edge qubits");

  const int lo = std::min(i, j), hi = std::max(i, j);
  const std::uint64_t bi = std::uint64_t{1} << i, bj = std::uint64_t{1} << j;
  const std::uint64_t groups = state.dim() >> 2;

  TwoQubitMoments m;
  for (std::uint64_t g = 0; g < groups; ++g) {
    std::uint64_t b00 = (g & ((std::uint64_t{1} << lo) - 1)) |
                        (((g >> lo) & ((std::uint64_t{1} << (hi - 1 - lo)) - 1)) << (lo + 1)) |
                        ((g >> (hi - 1)) << (hi + 1));
    const std::complex<double> a00 = state.amp(b00);
    const std::complex<double> a10 = state.amp(b00 | bi);
    const std::complex<double> a01 = state.amp(b00 | bj);
    const std::complex<double> a11 = state.amp(b00 | bi | bj);

    m.zz += std::norm(a00) - std::norm(a10) - std::norm(a01) + std::norm(a11);
    const std::complex<double> x_i0 = std::conj(a00) * a10;  // X_i within x_j = 0
    const std::complex<double> x_i1 = std::conj(a01) * a11;
    const std::complex<double> x_j0 = std::conj(a00) * a01;
    const std::complex<double> x_j1 = std::conj(a10) * a11;
    m.xi += 2.0 * (x_i0.real() + x_i1.real());
    m.xj += 2.0 * (x_j0.real() + x_j1.real());
    m.yz += 2.0 * (x_i0.imag() - x_i1.imag());
    m.zy += 2.0 * (x_j0.imag() - x_j1.imag());
    const std::complex<double> cross = std::conj(a00) * a11;
    const std::complex<double> swap = std::conj(a10) * a01;
    m.xx += 2.0 * (cross.real() + swap.real());
    m.yy += 2.0 * (-cross.real() + swap.real());
  }
  return m;
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::measuring_exact: return "measuring_exact";
    case Mode::measuring_sampled: return "measuring_sampled";
    case Mode::approximation: return "approximation";
  }
  throw std::logic_error("unknown mode");
}

Mode mode_from_string(const std::string& s) {
  if (s == "measuring_exact") return Mode::measuring_exact;
  if (s == "measuring_sampled") return Mode::measuring_sampled;
  if (s == "approximation") return Mode::approximation;
  throw std::invalid_argument("unknown mode: " + s);
}

StateVector Circuit::run(const IsingInstance& inst) const {
  StateVector state = StateVector::product_state(init_angles);
  for (int q = 0; q < n; ++q)
    state.apply_ry(q, single_layer[static_cast<std::size_t>(q)]);
  for (const auto& gate : two_layer) {
    const auto& edge = inst.edges[static_cast<std::size_t>(gate.edge)];
    state.apply_yzzy(edge.i, edge.j, gate.theta0, gate.theta1);
  }
  return state;
}

namespace {

TwoQubitMoments sampled_edge_moments(const StateVector& state, int i, int j,
                                     std::uint64_t shots, Rng& rng,
                                     std::uint64_t* shots_used) {
  auto word = [](std::initializer_list<PauliTerm> terms) { return PauliWord(terms); };
  TwoQubitMoments m;

  // Five commuting settings cover the seven moments; X_i and X_j ride along
  // with the XX setting.
  const std::vector<PauliWord> zz = {word({{i, Pauli::Z}, {j, Pauli::Z}})};
  const std::vector<PauliWord> yz = {word({{i, Pauli::Y}, {j, Pauli::Z}})};
  const std::vector<PauliWord> zy = {word({{i, Pauli::Z}, {j, Pauli::Y}})};
  const std::vector<PauliWord> xx = {word({{i, Pauli::X}, {j, Pauli::X}}),
                                     word({{i, Pauli::X}}), word({{j, Pauli::X}})};
  const std::vector<PauliWord> yy = {word({{i, Pauli::Y}, {j, Pauli::Y}})};

  m.zz = sample_pauli_words(state, zz, shots, rng.next())[0];
  m.yz = sample_pauli_words(state, yz, shots, rng.next())[0];
  m.zy = sample_pauli_words(state, zy, shots, rng.next())[0];
  const auto xs = sample_pauli_words(state, xx, shots, rng.next());
  m.xx = xs[0];
  m.xi = xs[1];
  m.xj = xs[2];
  m.yy = sample_pauli_words(state, yy, shots, rng.next())[0];
  *shots_used += 5 * shots;
  return m;
}

}  // namespace

BuildResult build_circuit(const IsingInstance& inst, const GateOrdering& ordering,
                          double tau, std::span<const double> init_angles,
                          const BuildOptions& options, Rng& rng) {
  if (static_cast<int>(init_angles.size()) != inst.n)
    throw std::invalid_argument("initialization angle count does not match instance");
  if (ordering.permutation.size() != inst.edges.size())
    throw std::invalid_argument("ordering permutation does not match edge count");

  BuildResult result{.circuit = {},
                     .state = StateVector::product_state(init_angles),
                     .entropy_trace = {},
                     .pauli_shots = 0,
                     .optimizer_all_converged = true};
  Circuit& circuit = result.circuit;
  circuit.n = inst.n;
  circuit.init_angles.assign(init_angles.begin(), init_angles.end());

  // Single-qubit layer: exact closed form per field term.
  std::vector<double> post_angles(static_cast<std::size_t>(inst.n));
  circuit.single_layer.resize(static_cast<std::size_t>(inst.n));
  for (int q = 0; q < inst.n; ++q) {
    const double theta =
        single_qubit_angle(inst.h[static_cast<std::size_t>(q)], tau,
                           init_angles[static_cast<std::size_t>(q)]);
    circuit.single_layer[static_cast<std::size_t>(q)] = theta;
    post_angles[static_cast<std::size_t>(q)] =
        init_angles[static_cast<std::size_t>(q)] + theta;
    result.state.apply_ry(q, theta);
  }

  std::vector<int> partition = options.entropy_partition;
  if (options.track_entropy && partition.empty())
    partition = default_entropy_partition(inst.n);
  auto straddles = [&partition](int i, int j) {
    const bool in_i = std::find(partition.begin(), partition.end(), i) != partition.end();
    const bool in_j = std::find(partition.begin(), partition.end(), j) != partition.end();
    return in_i != in_j;
  };
  double last_entropy = 0.0;  // product state after the single-qubit layer

  circuit.two_layer.reserve(inst.edges.size());
  for (int e : ordering.permutation) {
    const auto& edge = inst.edges[static_cast<std::size_t>(e)];
    const double tau_eff = tau * edge.coupling;

    TwoQubitMoments m;
    switch (options.mode) {
      case Mode::measuring_exact:
        m = edge_moments(result.state, edge.i, edge.j);
        break;
      case Mode::measuring_sampled:
        m = sampled_edge_moments(result.state, edge.i, edge.j, options.shots_pauli,
                                 rng, &result.pauli_shots);
        break;
      case Mode::approximation: {
        // Product-state moments at the post-single-layer angles.
        const double ci = std::cos(post_angles[static_cast<std::size_t>(edge.i)]);
        const double si = std::sin(post_angles[static_cast<std::size_t>(edge.i)]);
        const double cj = std::cos(post_angles[static_cast<std::size_t>(edge.j)]);
        const double sj = std::sin(post_angles[static_cast<std::size_t>(edge.j)]);
        m = {.zz = ci * cj, .yz = 0.0, .zy = 0.0, .xi = si, .xj = sj,
             .xx = si * sj, .yy = 0.0};
        break;
      }
    }

    const GateOptResult opt = optimize_gate_params(m, tau_eff);
    result.optimizer_all_converged &= opt.converged;
    circuit.two_layer.push_back({e, opt.theta0, opt.theta1});
    result.state.apply_yzzy(edge.i, edge.j, opt.theta0, opt.theta1);

    if (options.track_entropy) {
      // Gates inside one side of the cut leave the Schmidt spectrum
      // unchanged, so only straddling gates trigger a recomputation.
      if (straddles(edge.i, edge.j))
        last_entropy = result.state.entanglement_entropy(partition);
      result.entropy_trace.push_back(last_entropy);
    }
  }
  return result;
}

}  // namespace itemc
