#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qsvm/errors.hpp"
#include "qsvm/simulator.hpp"

using namespace qsvm;

namespace {

StateVector random_state(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g;
    std::vector<Complex> amps(std::size_t{1} << n);
    double norm = 0.0;
    for (auto& a : amps) {
        a = {g(rng), g(rng)};
        norm += std::norm(a);
    }
    for (auto& a : amps) a /= std::sqrt(norm);
    return StateVector::from_amplitudes(std::move(amps));
}

struct RandomPauli {
    PauliString pauli;
    std::string per_qubit;  // oracle form
};

RandomPauli random_pauli(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> pick(0, 3);
    while (true) {
        std::vector<PauliString::Term> terms;
        std::string per_qubit(n, 'I');
        for (std::size_t q = 0; q < n; ++q) {
            const int a = pick(rng);
            if (a == 3) continue;
            const char c = "XYZ"[a];
            per_qubit[q] = c;
            terms.push_back({q, pauli_axis_from_char(c)});
        }
        if (!terms.empty()) return {PauliString(std::move(terms)), per_qubit};
    }
}

double max_amp_diff(const StateVector& s, const oracle::CVector& v) {
    double worst = 0.0;
    for (std::size_t k = 0; k < s.dimension(); ++k) {
        worst = std::max(worst, std::abs(s[k] - v(static_cast<Eigen::Index>(k))));
    }
    return worst;
}

oracle::CVector to_eigen(const StateVector& s) {
    oracle::CVector v(static_cast<Eigen::Index>(s.dimension()));
    for (std::size_t k = 0; k < s.dimension(); ++k) v(static_cast<Eigen::Index>(k)) = s[k];
    return v;
}

}  // namespace

TEST_CASE("zero state") {
    const auto one = new_zero_state(1);
    CHECK(one.dimension() == 2);
    CHECK(one[0] == Complex(1, 0));
    CHECK(one[1] == Complex(0, 0));

    const auto two = new_zero_state(2);
    REQUIRE(two.dimension() == 4);
    CHECK(two[0] == Complex(1, 0));
    for (std::size_t k = 1; k < 4; ++k) CHECK(two[k] == Complex(0, 0));

    CHECK_THROWS_AS(new_zero_state(25), ResourceError);
    CHECK_THROWS_AS(new_zero_state(0), ResourceError);
    CHECK_NOTHROW(new_zero_state(StateVector::kMaxQubits));
}

TEST_CASE("hadamard layer") {
    const double r = 1.0 / std::numbers::sqrt2;
    const auto s1 = apply_hadamard_all(new_zero_state(1));
    CHECK(std::abs(s1[0] - r) < 1e-15);
    CHECK(std::abs(s1[1] - r) < 1e-15);

    const auto s2 = apply_hadamard_all(new_zero_state(2));
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(s2[k] - 0.5) < 1e-15);

    std::mt19937_64 rng(11);
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto psi = random_state(rng, n);
        const auto back = apply_hadamard_all(apply_hadamard_all(psi));
        for (std::size_t k = 0; k < psi.dimension(); ++k) CHECK(std::abs(back[k] - psi[k]) < 1e-12);
        CHECK(std::abs(apply_hadamard_all(psi).norm_squared() - 1.0) < 1e-10);
        CHECK(max_amp_diff(apply_hadamard_all(psi), oracle::hadamard_all(static_cast<int>(n)) * to_eigen(psi)) <
              1e-12);
    }
}

TEST_CASE("pauli exponential closed form") {
    std::mt19937_64 rng(3);
    const auto psi = random_state(rng, 2);

    SUBCASE("theta zero is identity") {
        const PauliString p({{0, PauliAxis::X}, {1, PauliAxis::Y}});
        const auto out = apply_pauli_exponential(psi, p, 0.0);
        for (std::size_t k = 0; k < 4; ++k) CHECK(out[k] == psi[k]);
    }

    SUBCASE("Z on |0> picks up e^{i theta}") {
        const PauliString z0({{0, PauliAxis::Z}});
        const auto out = apply_pauli_exponential(new_zero_state(1), z0, std::numbers::pi / 2);
        CHECK(std::abs(out[0] - Complex(0, 1)) < 1e-15);
        CHECK(std::abs(out[1]) < 1e-15);
    }

    SUBCASE("invalid qubit index") {
        const PauliString z3({{3, PauliAxis::Z}});
        CHECK_THROWS_AS(apply_pauli_exponential(psi, z3, 0.1), ArgumentError);
    }

    SUBCASE("malformed strings") {
        CHECK_THROWS_AS(PauliString({}), ArgumentError);
        CHECK_THROWS_AS(PauliString({{0, PauliAxis::X}, {0, PauliAxis::Z}}), ArgumentError);
    }
}

TEST_CASE("pauli exponential matches dense matrix exponential") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> angle(-2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 2);
        const auto rp = random_pauli(rng, n);
        const double theta = angle(rng);
        const auto psi = random_state(rng, n);
        const auto out = apply_pauli_exponential(psi, rp.pauli, theta);
        const oracle::CVector expected = oracle::pauli_exponential(rp.per_qubit, theta) * to_eigen(psi);
        CHECK(max_amp_diff(out, expected) < 1e-10);
        CHECK(std::abs(out.norm_squared() - 1.0) < 1e-10);
    }
}

TEST_CASE("commuting exponentials commute") {
    std::mt19937_64 rng(5);
    const auto psi = random_state(rng, 2);
    const PauliString z0({{0, PauliAxis::Z}});
    const PauliString z0z1({{0, PauliAxis::Z}, {1, PauliAxis::Z}});
    const auto a = apply_pauli_exponential(apply_pauli_exponential(psi, z0, 0.7), z0z1, -1.3);
    const auto b = apply_pauli_exponential(apply_pauli_exponential(psi, z0z1, -1.3), z0, 0.7);
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-12);
}

TEST_CASE("inner product") {
    std::mt19937_64 rng(8);
    const auto psi = random_state(rng, 3);
    CHECK(std::abs(inner_product(psi, psi) - Complex(1, 0)) < 1e-12);

    const auto zero = new_zero_state(1);
    const auto one = StateVector::from_amplitudes({{0, 0}, {1, 0}});
    CHECK(std::abs(inner_product(zero, one)) == 0.0);

    for (int t = 0; t < 20; ++t) {
        const auto a = random_state(rng, 2);
        const auto b = random_state(rng, 2);
        CHECK(std::abs(inner_product(a, b)) <= 1.0 + 1e-12);
        CHECK(std::abs(inner_product(a, b) - std::conj(inner_product(b, a))) < 1e-14);
    }
    CHECK_THROWS_AS(inner_product(zero, psi), ArgumentError);
}
