#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "qsvm/errors.hpp"
#include "qsvm/kernels.hpp"

using namespace qsvm;

namespace {

FeatureMapSpec zzz(double alpha) {
    FeatureMapSpec fm;
    fm.paulis = {"Z", "ZZ"};
    fm.alpha = alpha;
    fm.depth = 2;
    return fm;
}

FeatureMatrix random_points(std::mt19937_64& rng, Eigen::Index m, Eigen::Index d) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    FeatureMatrix X(m, d);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < d; ++j) X(i, j) = u(rng);
    return X;
}

}  // namespace

TEST_CASE("quantum kernel values") {
    const std::vector<double> x{0.5, 1.2};
    const std::vector<double> z{2.0, 0.3};
    CHECK(std::abs(quantum_kernel(x, x, zzz(2.0)) - 1.0) < 1e-10);

    std::mt19937_64 rng(4);
    for (int t = 0; t < 5; ++t) {
        const auto a = oracle::random_point(rng, 2);
        const auto b = oracle::random_point(rng, 2);
        CHECK(std::abs(quantum_kernel(a, b, zzz(0.0)) - 1.0) < 1e-12);
    }

    const auto sx = oracle::feature_state({"Z", "ZZ"}, 2.0, 2, x);
    const auto sz = oracle::feature_state({"Z", "ZZ"}, 2.0, 2, z);
    const double expected = std::norm(sx.dot(sz));  // Eigen's dot conjugates the left operand
    CHECK(std::abs(quantum_kernel(x, z, zzz(2.0)) - expected) < 1e-10);
    CHECK(std::abs(quantum_kernel(x, z, zzz(2.0)) - quantum_kernel(z, x, zzz(2.0))) < 1e-12);

    const std::vector<double> three{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(quantum_kernel(x, three, zzz(1.0)), ArgumentError);
}

TEST_CASE("rbf kernel values") {
    const std::vector<double> o{0.0, 0.0};
    const std::vector<double> p{3.0, 4.0};
    CHECK(rbf_kernel(o, o, 0.7) == 1.0);
    CHECK(std::abs(rbf_kernel(o, p, 5.0) - std::exp(-1.0)) < 1e-15);
    CHECK(std::abs(rbf_kernel(o, p, 5.0) - 0.36788) < 1e-5);
    CHECK(std::abs(rbf_kernel(o, p, 2.0, true) - std::exp(-25.0 / 8.0)) < 1e-15);
    CHECK_THROWS_AS(rbf_kernel(o, p, 0.0), ArgumentError);
    CHECK_THROWS_AS(rbf_kernel(o, p, -1.0), ArgumentError);
    CHECK_THROWS_AS(KernelSpec::rbf(0.0).validate(), ConfigError);
}

TEST_CASE("gram matrix small cases") {
    for (const auto& k : {KernelSpec::rbf(0.5), KernelSpec::quantum(zzz(1.5))}) {
        FeatureMatrix one(1, 2);
        one << 0.3, 0.9;
        const Matrix K1 = gram_matrix(one, k);
        REQUIRE(K1.rows() == 1);
        CHECK(std::abs(K1(0, 0) - 1.0) < 1e-12);

        FeatureMatrix dup(2, 2);
        dup << 0.3, 0.9, 0.3, 0.9;
        const Matrix K2 = gram_matrix(dup, k);
        CHECK((K2.array() - 1.0).abs().maxCoeff() < 1e-12);
    }
    CHECK_THROWS_AS(gram_matrix(FeatureMatrix(0, 2), KernelSpec::rbf(1.0)), ArgumentError);
}

TEST_CASE("gram matrix invariants") {
    std::mt19937_64 rng(17);
    const std::vector<KernelSpec> kernels{KernelSpec::rbf(0.5), KernelSpec::rbf(1.0, true),
                                          KernelSpec::quantum(zzz(1.0)), KernelSpec::quantum(zzz(2.0))};
    for (const auto& k : kernels) {
        const FeatureMatrix X = random_points(rng, 20, 2);
        const Matrix K = gram_matrix(X, k);
        CHECK((K - K.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((K.diagonal().array() - 1.0).abs().maxCoeff() <= 1e-10);
        CHECK(K.minCoeff() >= 0.0);
        CHECK(K.maxCoeff() <= 1.0);
        const auto ev = oracle::jacobi_eigenvalues(K);
        CHECK(ev.front() >= -1e-8);
        if (k.is_quantum()) {
            CHECK((K - gram_matrix(X, k, false)).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("cross matrix") {
    std::mt19937_64 rng(23);
    const FeatureMatrix Xt = random_points(rng, 7, 2);
    FeatureMatrix Xe = random_points(rng, 5, 2);
    Xe.row(2) = Xt.row(4);
    for (const auto& k : {KernelSpec::rbf(0.8), KernelSpec::quantum(zzz(1.2))}) {
        const Matrix same = cross_matrix(Xt, Xt, k);
        CHECK((same - gram_matrix(Xt, k)).cwiseAbs().maxCoeff() <= 1e-12);

        const Matrix C = cross_matrix(Xt, Xe, k);
        REQUIRE(C.rows() == 5);
        REQUIRE(C.cols() == 7);
        CHECK(std::abs(C(2, 4) - 1.0) < 1e-10);
        for (Eigen::Index i = 0; i < C.rows(); ++i) {
            for (Eigen::Index j = 0; j < C.cols(); ++j) {
                CHECK(std::abs(C(i, j) - kernel_value(row_span(Xe, i), row_span(Xt, j), k)) <= 1e-12);
            }
        }
    }
    CHECK_THROWS_AS(cross_matrix(Xt, random_points(rng, 2, 3), KernelSpec::rbf(1.0)), ArgumentError);
}

TEST_CASE("gram csv export") {
    Matrix K(2, 2);
    K << 1.0, 0.25, 0.25, 1.0;
    const auto path = std::filesystem::temp_directory_path() / "qsvm_gram_test.csv";
    save_gram_csv(K, path);
    std::ifstream in(path);
    std::string header, r0;
    std::getline(in, header);
    std::getline(in, r0);
    CHECK(header == "c1,c2");
    CHECK(r0 == "1,0.25");
    CHECK(std::filesystem::exists(path.string() + ".meta.json"));
}
