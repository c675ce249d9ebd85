#include "itemc/statevector.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "itemc/rng.hpp"

namespace itemc {

void SampleSet::bind(const IsingInstance& inst) {
  if (inst.n != n) throw std::invalid_argument("sample set / instance size mismatch");
  for (auto& r : records) r.energy = ising_energy_basis(inst, r.bits.bits);
  bound = true;
}

double SampleSet::best_energy() const {
  if (!bound || records.empty())
    throw std::logic_error("sample set is empty or not bound to an instance");
  double best = records.front().energy;
  for (const auto& r : records) best = std::min(best, r.energy);
  return best;
}

Bitstring SampleSet::best_bitstring() const {
  if (!bound || records.empty())
    throw std::logic_error("sample set is empty or not bound to an instance");
  const SampleRecord* best = &records.front();
  for (const auto& r : records)
    if (r.energy < best->energy) best = &r;
  return best->bits;  // records are ascending by index, so ties pick the lower
}

StateVector::StateVector(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("state requires at least one qubit");
  if (n > kMaxQubits)
    throw std::invalid_argument("dense statevector capped at " +
                                std::to_string(kMaxQubits) + " qubits");
  amps_.assign(dim(), {0.0, 0.0});
  amps_[0] = {1.0, 0.0};
}

StateVector StateVector::product_state(std::span<const double> angles) {
  StateVector state(static_cast<int>(angles.size()));
  const int n = state.n_;
  // amps[b] = prod_i (bit_i(b) ? sin(phi_i/2) : cos(phi_i/2)), built one
  // qubit at a time over prefixes.
  std::uint64_t filled = 1;
  for (int q = 0; q < n; ++q) {
    const double c = std::cos(angles[static_cast<std::size_t>(q)] / 2.0);
    const double s = std::sin(angles[static_cast<std::size_t>(q)] / 2.0);
    for (std::uint64_t b = 0; b < filled; ++b) {
      const std::complex<double> a = state.amps_[b];
      state.amps_[b] = a * c;
      state.amps_[b | (std::uint64_t{1} << q)] = a * s;
    }
    filled <<= 1;
  }
  return state;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

double StateVector::max_imag() const {
  double m = 0.0;
  for (const auto& a : amps_) m = std::max(m, std::abs(a.imag()));
  return m;
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  for (std::size_t b = 0; b < amps_.size(); ++b) p[b] = std::norm(amps_[b]);
  return p;
}

void StateVector::apply_ry(int qubit, double theta) {
  if (qubit < 0 || qubit >= n_) throw std::invalid_argument("qubit index out of range");
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  const std::uint64_t stride = std::uint64_t{1} << qubit;
  for (std::uint64_t base = 0; base < dim(); base += 2 * stride) {
    for (std::uint64_t k = 0; k < stride; ++k) {
      const std::uint64_t b0 = base + k;
      const std::uint64_t b1 = b0 + stride;
      const std::complex<double> a0 = amps_[b0], a1 = amps_[b1];
      amps_[b0] = c * a0 - s * a1;
      amps_[b1] = s * a0 + c * a1;
    }
  }
}

namespace {

// Expands a (n-2)-bit group index into a basis index with zeros at bit
// positions lo < hi.
inline std::uint64_t expand_two(std::uint64_t g, int lo, int hi) {
  const std::uint64_t low = g & ((std::uint64_t{1} << lo) - 1);
  const std::uint64_t mid = (g >> lo) & ((std::uint64_t{1} << (hi - 1 - lo)) - 1);
  const std::uint64_t high = g >> (hi - 1);
  return low | (mid << (lo + 1)) | (high << (hi + 1));
}

}  // namespace

void StateVector::apply_yzzy(int i, int j, double theta0, double theta1) {
  if (i < 0 || i >= n_ || j < 0 || j >= n_)
    throw std::invalid_argument("qubit index out of range");
  if (i == j) throw std::invalid_argument("two-qubit gate requires distinct qubits");

  // exp(-i theta0 Y_i Z_j / 2) rotates qubit i by R_y(theta0 * z_j), and
  // exp(-i theta1 Z_i Y_j / 2) rotates qubit j by R_y(theta1 * z_i); the two
  // factors commute, so one pass over the 4-amplitude groups applies both.
  const double c0 = std::cos(theta0 / 2.0), s0 = std::sin(theta0 / 2.0);
  const double c1 = std::cos(theta1 / 2.0), s1 = std::sin(theta1 / 2.0);
  const int lo = std::min(i, j), hi = std::max(i, j);
  const std::uint64_t bi = std::uint64_t{1} << i, bj = std::uint64_t{1} << j;
  const std::uint64_t groups = dim() >> 2;
  for (std::uint64_t g = 0; g < groups; ++g) {
    const std::uint64_t b00 = expand_two(g, lo, hi);
    const std::uint64_t b10 = b00 | bi, b01 = b00 | bj, b11 = b00 | bi | bj;

    std::complex<double> a00 = amps_[b00], a10 = amps_[b10];
    std::complex<double> a01 = amps_[b01], a11 = amps_[b11];

    // R_y(theta0 * z_j) on qubit i.
    std::complex<double> t = a00;
    a00 = c0 * t - s0 * a10;
    a10 = s0 * t + c0 * a10;
    t = a01;
    a01 = c0 * t + s0 * a11;
    a11 = -s0 * t + c0 * a11;

    // R_y(theta1 * z_i) on qubit j.
    t = a00;
    a00 = c1 * t - s1 * a01;
    a01 = s1 * t + c1 * a01;
    t = a10;
    a10 = c1 * t + s1 * a11;
    a11 = -s1 * t + c1 * a11;

    amps_[b00] = a00;
    amps_[b10] = a10;
    amps_[b01] = a01;
    amps_[b11] = a11;
  }
}

double StateVector::pauli_expectation(const PauliWord& word) const {
  if (word.empty() || word.size() > 2)
    throw std::invalid_argument("Pauli words supported on one or two qubits only");
  if (word.size() == 2 && word[0].qubit == word[1].qubit)
    throw std::invalid_argument("Pauli word qubits must be distinct");
  for (const auto& term : word)
    if (term.qubit < 0 || term.qubit >= n_)
      throw std::invalid_argument("qubit index out of range");

  std::uint64_t flip = 0;
  for (const auto& term : word)
    if (term.axis != Pauli::Z) flip |= std::uint64_t{1} << term.qubit;

  // <psi|P|psi> = sum_b conj(amps[b ^ flip]) * phase(b) * amps[b], with
  // X|x> = |1-x>, Y|x> = i(-1)^x |1-x>, Z|x> = (-1)^x |x>.
  std::complex<double> acc{0.0, 0.0};
  for (std::uint64_t b = 0; b < dim(); ++b) {
    if (amps_[b] == std::complex<double>{0.0, 0.0}) continue;
    std::complex<double> phase{1.0, 0.0};
    for (const auto& term : word) {
      const bool one = (b >> term.qubit) & 1u;
      switch (term.axis) {
        case Pauli::X: break;
        case Pauli::Y: phase *= one ? std::complex<double>{0.0, -1.0}
                                    : std::complex<double>{0.0, 1.0};
          break;
        case Pauli::Z:
          if (one) phase = -phase;
          break;
      }
    }
    acc += std::conj(amps_[b ^ flip]) * phase * amps_[b];
  }
  if (std::abs(acc.imag()) >= 1e-10)
    throw std::runtime_error("Pauli expectation has non-negligible imaginary part");
  return acc.real();
}

SampleSet StateVector::sample(std::uint64_t shots, std::uint64_t seed) const {
  if (shots < 1) throw std::invalid_argument("sampling requires at least one shot");
  std::vector<double> cdf(dim());
  double acc = 0.0;
  for (std::uint64_t b = 0; b < dim(); ++b) {
    acc += std::norm(amps_[b]);
    cdf[b] = acc;
  }

  Rng rng(seed);
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform01() * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto b = static_cast<std::uint64_t>(std::distance(cdf.begin(), it));
    ++counts[std::min(b, dim() - 1)];
  }

  SampleSet set;
  set.n = n_;
  set.total_shots = shots;
  set.records.reserve(counts.size());
  for (const auto& [index, count] : counts)
    set.records.push_back({Bitstring::from_index(n_, index), count, 0.0});
  return set;
}

double StateVector::entanglement_entropy(std::span<const int> partition) const {
  std::vector<int> part(partition.begin(), partition.end());
  std::sort(part.begin(), part.end());
  if (part.empty() || static_cast<int>(part.size()) >= n_)
    throw std::invalid_argument("partition must be a nonempty proper subset");
  for (std::size_t k = 0; k < part.size(); ++k) {
    if (part[k] < 0 || part[k] >= n_)
      throw std::invalid_argument("partition qubit index out of range");
    if (k > 0 && part[k] == part[k - 1])
      throw std::invalid_argument("partition contains a duplicate qubit");
  }

  std::vector<int> rest;
  for (int q = 0; q < n_; ++q)
    if (!std::binary_search(part.begin(), part.end(), q)) rest.push_back(q);

  const auto rows = std::uint64_t{1} << part.size();
  const auto cols = std::uint64_t{1} << rest.size();
  auto gather = [](std::uint64_t b, const std::vector<int>& qs) {
    std::uint64_t r = 0;
    for (std::size_t k = 0; k < qs.size(); ++k) r |= ((b >> qs[k]) & 1u) << k;
    return r;
  };

  // Schmidt weights are the eigenvalues of the Gram matrix G = M M^T on the
  // smaller side of the cut.
  const bool real_state = max_imag() < 1e-12;
  Eigen::VectorXd lambda;
  if (real_state) {
    // Mid-run states have modest Schmidt rank, so G is factored by pivoted
    // Cholesky with on-the-fly columns (G e_i = M (M row i)^T): cost
    // O(rank * dim) instead of a dense eigensolve of the full Gram matrix.
    // The truncated eigenvalue mass is below 2^n * 1e-16 of a unit trace.
    const bool tall = rows > cols;
    const auto m_rows = static_cast<Eigen::Index>(tall ? cols : rows);
    const auto m_cols = static_cast<Eigen::Index>(tall ? rows : cols);
    Eigen::MatrixXd m(m_rows, m_cols);
    for (std::uint64_t b = 0; b < dim(); ++b) {
      const auto r = static_cast<Eigen::Index>(gather(b, tall ? rest : part));
      const auto c = static_cast<Eigen::Index>(gather(b, tall ? part : rest));
      m(r, c) = amps_[b].real();
    }

    constexpr double kPivotTol = 1e-16;
    const Eigen::Index max_rank =
        std::min<Eigen::Index>(m_rows, m_rows > 256 ? 32 : m_rows);
    Eigen::VectorXd diag = m.rowwise().squaredNorm();
    Eigen::MatrixXd l(m_rows, max_rank);
    Eigen::Index rank = 0;
    bool low_rank = true;
    while (true) {
      Eigen::Index pivot = 0;
      diag.maxCoeff(&pivot);
      if (diag(pivot) <= kPivotTol) break;
      if (rank == max_rank) {
        low_rank = false;  // genuinely entangled; blocked dense is faster
        break;
      }
      Eigen::VectorXd col = m * m.row(pivot).transpose();
      if (rank > 0)
        col.noalias() -= l.leftCols(rank) * l.row(pivot).head(rank).transpose();
      const double p = std::max(col(pivot), kPivotTol);
      l.col(rank) = col / std::sqrt(p);
      diag -= l.col(rank).cwiseAbs2();
      diag = diag.cwiseMax(0.0);
      diag(pivot) = 0.0;
      ++rank;
    }
    if (low_rank) {
      if (rank == 0) return 0.0;
      const Eigen::MatrixXd small = l.leftCols(rank).transpose() * l.leftCols(rank);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(small, Eigen::EigenvaluesOnly);
      lambda = es.eigenvalues();
    } else {
      Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m_rows, m_rows);
      gram.selfadjointView<Eigen::Lower>().rankUpdate(m);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
          Eigen::MatrixXd(gram.selfadjointView<Eigen::Lower>()),
          Eigen::EigenvaluesOnly);
      lambda = es.eigenvalues();
    }
  } else {
    Eigen::MatrixXcd m(rows, cols);
    for (std::uint64_t b = 0; b < dim(); ++b)
      m(static_cast<Eigen::Index>(gather(b, part)),
        static_cast<Eigen::Index>(gather(b, rest))) = amps_[b];
    Eigen::MatrixXcd gram = rows <= cols ? Eigen::MatrixXcd(m * m.adjoint())
                                         : Eigen::MatrixXcd(m.adjoint() * m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    lambda = es.eigenvalues();
  }

  double entropy = 0.0;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    const double v = lambda(k);
    if (v > 1e-18) entropy -= v * std::log2(v);
  }
  return std::max(entropy, 0.0);
}

std::string StateVector::dump_amplitudes() const {
  if (n_ > 10) throw std::invalid_argument("amplitude dump limited to n <= 10");
  std::ostringstream out;
  out.precision(17);
  for (std::uint64_t b = 0; b < dim(); ++b)
    out << Bitstring::from_index(n_, b).str() << ' ' << amps_[b].real() << ' '
        << amps_[b].imag() << '\n';
  return out.str();
}

StateVector apply_ite_exact(const StateVector& state, const IsingInstance& inst,
                            double tau) {
  if (inst.n != state.num_qubits())
    throw std::invalid_argument("instance / state size mismatch");
  if (tau < 0.0) throw std::invalid_argument("imaginary time must be nonnegative");

  StateVector out = state;
  for_each_energy(inst, [&](std::uint64_t b, double energy) {
    out.amp(b) *= std::exp(-tau * energy);
  });
  double norm = out.norm();
  if (norm == 0.0) throw std::runtime_error("imaginary time evolution annihilated the state");
  for (std::uint64_t b = 0; b < out.dim(); ++b) out.amp(b) /= norm;
  return out;
}

double energy_expectation(const StateVector& state, const IsingInstance& inst) {
  if (inst.n != state.num_qubits())
    throw std::invalid_argument("instance / state size mismatch");
  double acc = 0.0;
  for_each_energy(inst, [&](std::uint64_t b, double energy) {
    acc += std::norm(state.amp(b)) * energy;
  });
  return acc;
}

std::vector<double> sample_pauli_words(const StateVector& state,
                                       std::span<const PauliWord> words,
                                       std::uint64_t shots, std::uint64_t seed) {
  // One rotated-basis axis per qubit across all words.
  std::map<int, Pauli> axes;
  for (const auto& word : words) {
    for (const auto& term : word) {
      auto [it, inserted] = axes.emplace(term.qubit, term.axis);
      if (!inserted && it->second != term.axis)
        throw std::invalid_argument("words are not simultaneously measurable");
    }
  }

  StateVector rotated = state;
  for (const auto& [qubit, axis] : axes) {
    if (axis == Pauli::Z) continue;
    const std::uint64_t stride = std::uint64_t{1} << qubit;
    if (axis == Pauli::Y) {
      // S^dagger: |1> picks up -i, mapping the Y basis onto the X basis.
      for (std::uint64_t base = 0; base < rotated.dim(); base += 2 * stride)
        for (std::uint64_t k = 0; k < stride; ++k)
          rotated.amp(base + k + stride) *= std::complex<double>{0.0, -1.0};
    }
    // Hadamard maps the X basis onto the computational basis.
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::uint64_t base = 0; base < rotated.dim(); base += 2 * stride) {
      for (std::uint64_t k = 0; k < stride; ++k) {
        const std::uint64_t b0 = base + k, b1 = b0 + stride;
        const std::complex<double> a0 = rotated.amp(b0), a1 = rotated.amp(b1);
        rotated.amp(b0) = (a0 + a1) * inv_sqrt2;
        rotated.amp(b1) = (a0 - a1) * inv_sqrt2;
      }
    }
  }

  const SampleSet samples = rotated.sample(shots, seed);
  std::vector<double> estimates;
  estimates.reserve(words.size());
  for (const auto& word : words) {
    double acc = 0.0;
    for (const auto& r : samples.records) {
      int sign = 1;
      for (const auto& term : word) sign *= r.bits.spin(term.qubit);
      acc += static_cast<double>(r.count) * sign;
    }
    estimates.push_back(acc / static_cast<double>(shots));
  }
  return estimates;
}

std::vector<int> default_entropy_partition(int n) {
  std::vector<int> part;
  for (int q = 0; q < (n + 1) / 2; ++q) part.push_back(q);
  return part;
}

}  // namespace itemc
