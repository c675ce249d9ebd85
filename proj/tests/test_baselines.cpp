#include <doctest.h>

#include <cmath>

#include "itemc/baselines.hpp"
#include "oracles.hpp"

using namespace itemc;

TEST_CASE("brute force") {
  SUBCASE("two-spin instance ground state") {
    const auto report = brute_force(testing::two_spin_instance(), 1);
    REQUIRE(report.entries.size() == 1);
    CHECK(report.entries[0].bits.str() == "10");
    CHECK(report.entries[0].energy == doctest::Approx(-1.5));
    CHECK(report.exact);
    CHECK(report.ground_degeneracy == 1);
  }
  SUBCASE("zero Hamiltonian flags full degeneracy") {
    IsingInstance zero;
    zero.n = 4;
    zero.h = {0.0, 0.0, 0.0, 0.0};
    const auto report = brute_force(zero, 1);
    CHECK(report.entries[0].energy == 0.0);
    CHECK(report.ground_degeneracy == 16);
  }
  SUBCASE("k lowest are sorted and match direct re-evaluation") {
    const auto inst = sample_random_ising(10, GraphSpec::with_density(0.7), 19);
    const auto report = brute_force(inst, 5);
    REQUIRE(report.entries.size() == 5);
    double prev = -1e300;
    for (const auto& entry : report.entries) {
      CHECK(entry.energy >= prev);
      prev = entry.energy;
      CHECK(entry.energy == ising_energy(inst, entry.bits));  // exact match
    }
    // Against full enumeration.
    std::vector<double> all;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << 10); ++b)
      all.push_back(ising_energy_basis(inst, b));
    std::sort(all.begin(), all.end());
    for (std::size_t k = 0; k < 5; ++k)
      CHECK(report.entries[k].energy == doctest::Approx(all[k]).epsilon(1e-14));
  }
  SUBCASE("caps at 24 qubits with guidance") {
    IsingInstance big;
    big.n = 25;
    big.h.assign(25, 0.1);
    try {
      brute_force(big, 1);
      CHECK(false);
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("simulated_annealing") != std::string::npos);
    }
  }
}

TEST_CASE("simulated annealing") {
  SUBCASE("finds the two-spin ground state") {
    const auto samples =
        simulated_annealing(testing::two_spin_instance(), {100, 100, 7});
    CHECK(samples.best_energy() == doctest::Approx(-1.5));
    CHECK(samples.total_shots == 100);
  }
  SUBCASE("field-only instances pin every spin against its field") {
    IsingInstance inst;
    inst.n = 5;
    inst.h = {0.4, -0.7, 0.2, -0.1, 0.9};
    const auto samples = simulated_annealing(inst, {50, 200, 3});
    const auto best = samples.best_bitstring();
    for (int i = 0; i < inst.n; ++i)
      CHECK(best.spin(i) == (inst.h[static_cast<std::size_t>(i)] > 0 ? -1 : 1));
  }
  SUBCASE("deterministic per seed") {
    const auto inst = sample_random_ising(8, GraphSpec::three_regular(), 5);
    const auto a = simulated_annealing(inst, {20, 50, 9});
    const auto b = simulated_annealing(inst, {20, 50, 9});
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) {
      CHECK(a.records[k].bits.bits == b.records[k].bits.bits);
      CHECK(a.records[k].count == b.records[k].count);
    }
  }
  SUBCASE("never beats the brute-force minimum") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto inst = sample_random_ising(10, GraphSpec::with_density(0.6), seed);
      const auto ground = brute_force(inst, 1).ground_energy();
      const auto samples = simulated_annealing(inst, {50, 300, seed});
      CHECK(samples.best_energy() >= ground - 1e-12);
    }
  }
  SUBCASE("matches brute force on most 3-regular instances") {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto inst = sample_random_ising(12, GraphSpec::three_regular(), seed);
      const auto ground = brute_force(inst, 1).ground_energy();
      const auto samples = simulated_annealing(inst, {100, 500, seed});
      if (std::abs(samples.best_energy() - ground) < 1e-9) ++hits;
    }
    CHECK(hits >= 19);
  }
}

TEST_CASE("reference optimum uses brute force within the cap") {
  const auto inst = sample_random_ising(8, GraphSpec::complete(), 2);
  bool exact = false;
  const double ref = reference_optimum(inst, {50, 200, 1}, 0.0, &exact);
  CHECK(exact);
  CHECK(ref == doctest::Approx(brute_force(inst, 1).ground_energy()));
}
