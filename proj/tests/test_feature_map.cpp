#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qsvm/errors.hpp"
#include "qsvm/feature_map.hpp"

using namespace qsvm;

namespace {

FeatureMapSpec spec(std::vector<std::string> paulis, double alpha, int depth = 2,
                    DataMap map = DataMap::ProductShifted) {
    FeatureMapSpec s;
    s.paulis = std::move(paulis);
    s.alpha = alpha;
    s.depth = depth;
    s.data_map = map;
    return s;
}

std::vector<std::string> labels(const std::vector<FeatureTerm>& terms) {
    std::vector<std::string> out;
    for (const auto& t : terms) out.push_back(t.pauli.to_string());
    return out;
}

double max_diff(const StateVector& s, const oracle::CVector& v) {
    double worst = 0.0;
    for (std::size_t k = 0; k < s.dimension(); ++k) {
        worst = std::max(worst, std::abs(s[k] - v(static_cast<Eigen::Index>(k))));
    }
    return worst;
}

}  // namespace

TEST_CASE("expand_terms ordering") {
    CHECK(labels(expand_terms(spec({"Z"}, 1), 2)) == std::vector<std::string>{"Z0", "Z1"});
    CHECK(labels(expand_terms(spec({"Z", "ZZ"}, 1), 2)) == std::vector<std::string>{"Z0", "Z1", "Z0 Z1"});
    CHECK(labels(expand_terms(spec({"YY"}, 1), 3)) == std::vector<std::string>{"Y0 Y1", "Y0 Y2", "Y1 Y2"});
    CHECK(labels(expand_terms(spec({"XZ"}, 1), 2)) == std::vector<std::string>{"X0 Z1"});

    const auto terms = expand_terms(spec({"Y", "YY"}, 1), 3);
    REQUIRE(terms.size() == 6);
    CHECK(terms[4].subset == std::vector<std::size_t>{0, 2});

    CHECK_THROWS_AS(expand_terms(spec({"ZZZ"}, 1), 2), ConfigError);
    CHECK_THROWS_AS(expand_terms(spec({"ZQ"}, 1), 2), ConfigError);
    CHECK_THROWS_AS(expand_terms(spec({}, 1), 2), ConfigError);
    CHECK_THROWS_AS(expand_terms(spec({"Z"}, 1, 0), 2), ConfigError);
}

TEST_CASE("pauli list parsing") {
    CHECK(parse_pauli_list("Z,ZZ") == std::vector<std::string>{"Z", "ZZ"});
    CHECK(parse_pauli_list("y+yy") == std::vector<std::string>{"Y", "YY"});
    CHECK_THROWS_AS(parse_pauli_list(" , "), ConfigError);
}

TEST_CASE("data_map_phi") {
    const std::vector<double> x{0.7, 1.3};
    const std::size_t s0[] = {0};
    CHECK(data_map_phi(s0, x, DataMap::ProductShifted) == 0.7);
    CHECK(data_map_phi(s0, x, DataMap::PlainProduct) == 0.7);

    const std::size_t s01[] = {0, 1};
    const std::vector<double> xpi{std::numbers::pi, 2.0};
    CHECK(data_map_phi(s01, xpi, DataMap::ProductShifted) == 0.0);
    const std::vector<double> x12{1.0, 2.0};
    CHECK(data_map_phi(s01, x12, DataMap::PlainProduct) == 2.0);

    const std::vector<double> x3{1.0, 2.0, 3.0};
    const std::size_t s012[] = {0, 1, 2};
    CHECK_THROWS_AS(data_map_phi(s012, x3, DataMap::ProductShifted), UnsupportedTermError);
    CHECK_THROWS_AS(build_feature_state(x3, spec({"ZZZ"}, 1)), UnsupportedTermError);
}

TEST_CASE("trivial feature states") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 5; ++t) {
        const auto x = oracle::random_point(rng, 2);
        const auto s = build_feature_state(x, spec({"Z"}, 0.0, 1));
        for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(s[k] - 0.5) < 1e-15);
    }
    const std::vector<double> origin{0.0, 0.0};
    const auto s = build_feature_state(origin, spec({"Z"}, 1.0, 1));
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(s[k] - 0.5) < 1e-15);
}

TEST_CASE("feature state matches dense circuit unitary") {
    const std::vector<double> x{0.5, 1.2};
    const auto s = build_feature_state(x, spec({"Z", "ZZ"}, 1.0, 2));
    CHECK(max_diff(s, oracle::feature_state({"Z", "ZZ"}, 1.0, 2, x)) < 1e-10);

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> alpha(0.0, 3.0);
    const std::vector<std::vector<std::string>> families{{"Y"}, {"Y", "YY"}, {"X", "ZZ"}, {"ZZ"}};
    for (const auto& fam : families) {
        for (int t = 0; t < 5; ++t) {
            const auto xp = oracle::random_point(rng, 3);
            const double a = alpha(rng);
            const auto got = build_feature_state(xp, spec(fam, a, 2));
            CHECK(max_diff(got, oracle::feature_state(fam, a, 2, xp)) < 1e-10);
        }
    }
}

TEST_CASE("feature state properties") {
    std::mt19937_64 rng(7);
    const auto fm = spec({"Y", "YY"}, 1.7, 3);

    SUBCASE("deterministic and normalized") {
        for (int t = 0; t < 20; ++t) {
            const auto x = oracle::random_point(rng, 2);
            const auto a = build_feature_state(x, fm);
            const auto b = build_feature_state(x, fm);
            for (std::size_t k = 0; k < 4; ++k) CHECK(a[k] == b[k]);
            CHECK(std::abs(a.norm_squared() - 1.0) < 1e-10);
        }
    }

    SUBCASE("commuting families are order independent") {
        for (int t = 0; t < 10; ++t) {
            const auto x = oracle::random_point(rng, 3);
            const auto a = build_feature_state(x, spec({"Z", "ZZ"}, 1.3));
            const auto b = build_feature_state(x, spec({"ZZ", "Z"}, 1.3));
            for (std::size_t k = 0; k < a.dimension(); ++k) CHECK(std::abs(a[k] - b[k]) < 1e-12);
        }
    }

    SUBCASE("continuous in alpha") {
        const double eps = 1e-6;
        double k_max = 0.0;
        for (int t = 0; t < 20; ++t) {
            const auto x = oracle::random_point(rng, 2);
            const auto a = build_feature_state(x, spec({"Z", "ZZ"}, 1.0));
            const auto b = build_feature_state(x, spec({"Z", "ZZ"}, 1.0 + eps));
            double d2 = 0.0;
            for (std::size_t k = 0; k < 4; ++k) d2 += std::norm(a[k] - b[k]);
            k_max = std::max(k_max, std::sqrt(d2) / eps);
        }
        // Angles are at most |phi| <= pi^2 per term, so the sensitivity is bounded
        // by depth * sum |phi| over the three terms.
        CHECK(k_max < 2.0 * (2.0 * 2.0 * std::numbers::pi + std::numbers::pi * std::numbers::pi));
    }
}

TEST_CASE("two Y layers cancel their single-qubit rotations") {
    // H Y H = -Y, so the second layer undoes the first for 1-local Y terms.
    std::mt19937_64 rng(17);
    for (int t = 0; t < 10; ++t) {
        const auto x = oracle::random_point(rng, 2);
        const auto y = build_feature_state(x, spec({"Y"}, 1.7));
        CHECK(std::abs(y[0] - 1.0) < 1e-12);
        for (std::size_t k = 1; k < 4; ++k) CHECK(std::abs(y[k]) < 1e-12);

        const auto mixed = build_feature_state(x, spec({"Y", "YY"}, 1.7));
        const auto pair = build_feature_state(x, spec({"YY"}, 1.7));
        for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(mixed[k] - pair[k]) < 1e-12);

        const auto single = build_feature_state(x, spec({"Y"}, 1.7, 1));
        CHECK(std::abs(single[0] - 1.0) > 1e-6);
    }
}
