#include <doctest.h>

#include <cmath>
#include <numbers>

#include "itemc/rng.hpp"
#include "itemc/statevector.hpp"
#include "oracles.hpp"

using namespace itemc;
using std::numbers::pi;

namespace {

StateVector random_real_state(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> phi(static_cast<std::size_t>(n));
  for (auto& p : phi) p = rng.uniform01() * pi;
  StateVector state = StateVector::product_state(phi);
  for (int k = 0; k < 3 * n; ++k) {
    const int i = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
    int j = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
    if (j == i) j = (j + 1) % n;
    state.apply_yzzy(i, j, rng.uniform_pm1(), rng.uniform_pm1());
  }
  return state;
}

}  // namespace

TEST_CASE("product state initialization") {
  SUBCASE("uniform superposition at phi = pi/2") {
    const std::vector<double> phi(4, pi / 2.0);
    const auto state = StateVector::product_state(phi);
    for (std::uint64_t b = 0; b < state.dim(); ++b)
      CHECK(state.amp(b).real() == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("phi = 0 gives |0...0>") {
    const std::vector<double> phi(3, 0.0);
    const auto state = StateVector::product_state(phi);
    CHECK(state.amp(0).real() == doctest::Approx(1.0));
  }
  SUBCASE("phi_0 = pi flips qubit 0 exactly") {
    const std::vector<double> phi = {pi, 0.0};
    const auto state = StateVector::product_state(phi);
    CHECK(std::abs(state.amp(1)) == doctest::Approx(1.0));
  }
}

TEST_CASE("apply_ry") {
  StateVector state(1);
  SUBCASE("theta = 0 is the identity") {
    state.apply_ry(0, 0.0);
    CHECK(state.amp(0).real() == doctest::Approx(1.0));
  }
  SUBCASE("theta = pi/2 on |0> gives |+>") {
    state.apply_ry(0, pi / 2.0);
    CHECK(state.amp(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(state.amp(1).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  }
  SUBCASE("rotation followed by its inverse") {
    auto random = random_real_state(3, 9);
    const auto before = random;
    random.apply_ry(1, 0.731);
    random.apply_ry(1, -0.731);
    CHECK(testing::overlap(before, random) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("index out of range") {
    CHECK_THROWS_AS(state.apply_ry(1, 0.1), std::invalid_argument);
  }
}

TEST_CASE("apply_yzzy") {
  SUBCASE("zero angles are the identity") {
    auto state = random_real_state(3, 4);
    const auto before = state;
    state.apply_yzzy(0, 2, 0.0, 0.0);
    CHECK(testing::overlap(before, state) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("the two generators commute: joint equals sequential") {
    auto a = random_real_state(4, 5);
    auto b = a;
    a.apply_yzzy(1, 3, 0.4, -0.9);
    b.apply_yzzy(1, 3, 0.4, 0.0);
    b.apply_yzzy(1, 3, 0.0, -0.9);
    double max_diff = 0.0;
    for (std::uint64_t k = 0; k < a.dim(); ++k)
      max_diff = std::max(max_diff, std::abs(a.amp(k) - b.amp(k)));
    CHECK(max_diff < 1e-12);
  }
  SUBCASE("matches the expanded operator on a small state") {
    // U = c0c1 I - i s0c1 YZ - i c0s1 ZY - s0s1 XX applied longhand.
    const double t0 = 0.37, t1 = -0.61;
    auto state = random_real_state(2, 6);
    const auto in = state;
    state.apply_yzzy(0, 1, t0, t1);
    const double c0 = std::cos(t0 / 2), s0 = std::sin(t0 / 2);
    const double c1 = std::cos(t1 / 2), s1 = std::sin(t1 / 2);
    // Basis (b0, b1): YZ: |00>->s|10>-style real rotation, see gate derivation.
    const std::complex<double> i_unit{0.0, 1.0};
    std::vector<std::complex<double>> expect(4);
    auto y = [&](int bit) { return bit ? std::complex<double>{0.0, -1.0}
                                       : std::complex<double>{0.0, 1.0}; };
    auto z = [](int bit) { return bit ? -1.0 : 1.0; };
    for (std::uint64_t b = 0; b < 4; ++b) {
      const int b0 = static_cast<int>(b & 1), b1 = static_cast<int>((b >> 1) & 1);
      // identity
      expect[b] += c0 * c1 * in.amp(b);
      // -i s0 c1 Y_0 Z_1 : flips qubit 0
      expect[b ^ 1u] += -i_unit * s0 * c1 * y(b0) * z(b1) * in.amp(b);
      // -i c0 s1 Z_0 Y_1 : flips qubit 1
      expect[b ^ 2u] += -i_unit * c0 * s1 * z(b0) * y(b1) * in.amp(b);
      // -s0 s1 X_0 X_1 : flips both
      expect[b ^ 3u] += -s0 * s1 * in.amp(b);
    }
    for (std::uint64_t b = 0; b < 4; ++b)
      CHECK(std::abs(state.amp(b) - expect[b]) < 1e-12);
  }
  SUBCASE("norm preserved on random states") {
    auto state = random_real_state(5, 7);
    state.apply_yzzy(0, 4, 1.3, -2.1);
    CHECK(state.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("i == j rejected") {
    StateVector state(2);
    CHECK_THROWS_AS(state.apply_yzzy(1, 1, 0.1, 0.2), std::invalid_argument);
  }
}

TEST_CASE("norm drift stays below 1e-8 after many gates") {
  Rng rng(13);
  StateVector state = random_real_state(6, 13);
  for (int k = 0; k < 10000; ++k) {
    const int i = static_cast<int>(rng.uniform_below(6));
    int j = static_cast<int>(rng.uniform_below(6));
    if (j == i) j = (j + 1) % 6;
    if (k % 3 == 0)
      state.apply_ry(i, rng.uniform_pm1());
    else
      state.apply_yzzy(i, j, rng.uniform_pm1(), rng.uniform_pm1());
  }
  CHECK(std::abs(state.norm() - 1.0) < 1e-8);
  // Real gate set: amplitudes stay exactly real.
  CHECK(state.max_imag() < 1e-10);
}

TEST_CASE("pauli expectations") {
  SUBCASE("<Z> on R_y(phi)|0> equals cos(phi)") {
    for (double phi : {0.0, 0.3, 1.1, pi / 2.0, 2.8, pi}) {
      StateVector state(1);
      state.apply_ry(0, phi);
      CHECK(state.pauli_expectation({{0, Pauli::Z}}) ==
            doctest::Approx(std::cos(phi)).epsilon(1e-12));
    }
  }
  SUBCASE("<X> on |+> is 1") {
    StateVector state(1);
    state.apply_ry(0, pi / 2.0);
    CHECK(state.pauli_expectation({{0, Pauli::X}}) == doctest::Approx(1.0));
  }
  SUBCASE("<Y> and <YZ> vanish on real-amplitude states") {
    const auto state = random_real_state(4, 21);
    CHECK(std::abs(state.pauli_expectation({{2, Pauli::Y}})) < 1e-12);
    CHECK(std::abs(state.pauli_expectation({{1, Pauli::Y}, {3, Pauli::Z}})) < 1e-12);
    CHECK(std::abs(state.pauli_expectation({{0, Pauli::Z}, {2, Pauli::Y}})) < 1e-12);
  }
  SUBCASE("unsupported word lengths rejected") {
    StateVector state(3);
    CHECK_THROWS_AS(state.pauli_expectation({}), std::invalid_argument);
    CHECK_THROWS_AS(
        state.pauli_expectation({{0, Pauli::X}, {1, Pauli::X}, {2, Pauli::X}}),
        std::invalid_argument);
    CHECK_THROWS_AS(state.pauli_expectation({{0, Pauli::X}, {0, Pauli::Z}}),
                    std::invalid_argument);
  }
}

TEST_CASE("sampling") {
  SUBCASE("basis state samples only itself") {
    StateVector state(2);
    state.apply_ry(1, pi);  // |01> in text convention: qubit1 = 1
    const auto set = state.sample(500, 4);
    REQUIRE(set.records.size() == 1);
    CHECK(set.records[0].bits.str() == "01");
    CHECK(set.records[0].count == 500);
  }
  SUBCASE("single shot yields one record of count 1") {
    const auto state = random_real_state(3, 30);
    const auto set = state.sample(1, 99);
    REQUIRE(set.records.size() == 1);
    CHECK(set.records[0].count == 1);
    CHECK(set.total_shots == 1);
  }
  SUBCASE("deterministic per seed") {
    const auto state = random_real_state(4, 31);
    const auto a = state.sample(1000, 7);
    const auto b = state.sample(1000, 7);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) {
      CHECK(a.records[k].bits.bits == b.records[k].bits.bits);
      CHECK(a.records[k].count == b.records[k].count);
    }
  }
  SUBCASE("|+> frequencies near 1/2 and chi-square sane") {
    StateVector state(1);
    state.apply_ry(0, pi / 2.0);
    const auto set = state.sample(100000, 12);
    double zeros = 0;
    for (const auto& r : set.records)
      if (r.bits.bits == 0) zeros = static_cast<double>(r.count);
    CHECK(zeros / 100000.0 == doctest::Approx(0.5).epsilon(0.02));
    const double expected = 50000.0;
    double stat = 0.0;
    for (const auto& r : set.records) {
      const double diff = static_cast<double>(r.count) - expected;
      stat += diff * diff / expected;
    }
    CHECK(testing::chi2_pvalue(stat, 1) > 0.001);
  }
  SUBCASE("chi-square goodness of fit across 6 qubits") {
    const auto state = random_real_state(6, 33);
    const auto probs = state.probabilities();
    const auto set = state.sample(100000, 17);
    std::vector<double> counts(state.dim(), 0.0);
    for (const auto& r : set.records)
      counts[r.bits.bits] = static_cast<double>(r.count);
    double stat = 0.0;
    int dof = -1;
    for (std::uint64_t b = 0; b < state.dim(); ++b) {
      const double expected = probs[b] * 100000.0;
      if (expected < 5.0) continue;  // standard cell-size guard
      stat += (counts[b] - expected) * (counts[b] - expected) / expected;
      ++dof;
    }
    REQUIRE(dof > 0);
    CHECK(testing::chi2_pvalue(stat, dof) > 0.001);
  }
}

TEST_CASE("entanglement entropy") {
  SUBCASE("product states carry none") {
    const std::vector<double> phi = {0.3, 1.2, 2.2, 0.9};
    const auto state = StateVector::product_state(phi);
    const std::vector<int> part = {0, 1};
    CHECK(state.entanglement_entropy(part) < 1e-10);
  }
  SUBCASE("Bell state carries one bit") {
    StateVector state(2);
    state.amp(0) = 1.0 / std::sqrt(2.0);
    state.amp(3) = 1.0 / std::sqrt(2.0);
    const std::vector<int> part = {0};
    CHECK(state.entanglement_entropy(part) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("4-qubit GHZ across any cut") {
    StateVector state(4);
    state.amp(0) = 1.0 / std::sqrt(2.0);
    state.amp(15) = 1.0 / std::sqrt(2.0);
    const std::vector<int> part = {0, 1};
    CHECK(state.entanglement_entropy(part) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("bounded by min(|A|, n - |A|) bits") {
    const auto state = random_real_state(6, 77);
    const std::vector<int> part = {0, 4};
    const double s = state.entanglement_entropy(part);
    CHECK(s >= 0.0);
    CHECK(s <= 2.0 + 1e-9);
  }
  SUBCASE("empty or full partitions rejected") {
    const auto state = random_real_state(3, 8);
    CHECK_THROWS_AS(state.entanglement_entropy(std::vector<int>{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(state.entanglement_entropy(std::vector<int>{0, 1, 2}),
                    std::invalid_argument);
  }
}

TEST_CASE("exact imaginary-time oracle") {
  const auto inst = testing::two_spin_instance();
  const std::vector<double> phi(2, pi / 2.0);
  const auto uniform = StateVector::product_state(phi);

  SUBCASE("tau = 0 leaves the state unchanged") {
    const auto out = apply_ite_exact(uniform, inst, 0.0);
    CHECK(testing::overlap(uniform, out) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("per-term factors equal the full diagonal") {
    const auto full = apply_ite_exact(uniform, inst, 0.45);
    const auto terms = testing::ite_per_term(uniform, inst, 0.45);
    double max_diff = 0.0;
    for (std::uint64_t b = 0; b < full.dim(); ++b)
      max_diff = std::max(max_diff, std::abs(full.amp(b) - terms.amp(b)));
    CHECK(max_diff < 1e-12);
  }
  SUBCASE("large tau converges to the ground state |10>") {
    const auto out = apply_ite_exact(uniform, inst, 50.0);
    CHECK(std::abs(out.amp(1)) == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("energy is non-increasing in tau") {
    const auto random_inst = sample_random_ising(6, GraphSpec::with_density(0.8), 3);
    const auto start = random_real_state(6, 55);
    double prev = energy_expectation(start, random_inst);
    for (double tau : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6}) {
      const double e = energy_expectation(apply_ite_exact(start, random_inst, tau),
                                          random_inst);
      CHECK(e <= prev + 1e-10);
      prev = e;
    }
  }
}

TEST_CASE("sampled pauli words agree with exact expectations") {
  const auto state = random_real_state(4, 91);
  const std::vector<PauliWord> words = {{{0, Pauli::X}, {2, Pauli::X}},
                                        {{0, Pauli::X}},
                                        {{2, Pauli::X}}};
  const auto est = sample_pauli_words(state, words, 200000, 5);
  for (std::size_t w = 0; w < words.size(); ++w)
    CHECK(std::abs(est[w] - state.pauli_expectation(words[w])) < 0.02);

  const std::vector<PauliWord> yz = {{{1, Pauli::Y}, {3, Pauli::Z}}};
  const auto yz_est = sample_pauli_words(state, yz, 200000, 6);
  CHECK(std::abs(yz_est[0]) < 0.02);  // vanishes on real states

  const std::vector<PauliWord> clash = {{{0, Pauli::X}}, {{0, Pauli::Z}}};
  CHECK_THROWS_AS(sample_pauli_words(state, clash, 10, 0), std::invalid_argument);
}

TEST_CASE("size cap enforced with a clear error") {
  CHECK_THROWS_AS(StateVector(27), std::invalid_argument);
}
