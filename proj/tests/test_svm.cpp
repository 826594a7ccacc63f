#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "qsvm/errors.hpp"
#include "qsvm/svm.hpp"

using namespace qsvm;

namespace {

Matrix linear_gram(const FeatureMatrix& X) { return X * X.transpose(); }

struct Problem {
    FeatureMatrix X;
    std::vector<int> y;
};

Problem random_problem(std::mt19937_64& rng, Eigen::Index m, Eigen::Index d = 2) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    Problem p;
    p.X.resize(m, d);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < d; ++j) p.X(i, j) = u(rng);
    for (Eigen::Index i = 0; i < m; ++i) p.y.push_back(i % 2 == 0 ? 1 : -1);
    std::shuffle(p.y.begin(), p.y.end(), rng);
    return p;
}

double equality_residual(const Vector& b, const std::vector<int>& y) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < b.size(); ++i) s += b(i) * y[static_cast<std::size_t>(i)];
    return std::abs(s);
}

}  // namespace

TEST_CASE("two-point hard-margin solution") {
    FeatureMatrix X(2, 2);
    X << 2.0, 0.0, 0.0, 0.0;
    const std::vector<int> y{1, -1};
    const RegularizationParams reg{1e6, 0.0, 0.0};
    const Matrix K = linear_gram(X);
    const auto sol = solve_dual(K, y, reg);
    CHECK(sol.report.converged);
    // 2 / ||x1 - x2||^2 = 0.5
    CHECK(std::abs(sol.betas(0) - 0.5) < 1e-6);
    CHECK(std::abs(sol.betas(1) - 0.5) < 1e-6);
    const double b = compute_bias(sol.betas, K, y, reg);
    CHECK(std::abs(b - -1.0) < 1e-6);
    // f(1, 0) = sum b_i y_i <x_i, (1,0)> + b = 0.5 * 2 - 1
    const double mid = sol.betas(0) * 2.0 * 1.0 + b;
    CHECK(std::abs(mid) < 1e-6);

    std::mt19937_64 rng(31);
    std::normal_distribution<double> g;
    for (int t = 0; t < 10; ++t) {
        FeatureMatrix P(2, 3);
        for (Eigen::Index i = 0; i < 2; ++i)
            for (Eigen::Index j = 0; j < 3; ++j) P(i, j) = g(rng);
        const auto s = solve_dual(linear_gram(P), y, reg);
        const double expect = 2.0 / (P.row(0) - P.row(1)).squaredNorm();
        CHECK(std::abs(s.betas(0) - expect) < 1e-6 * std::max(1.0, expect));
        CHECK(std::abs(s.betas(1) - expect) < 1e-6 * std::max(1.0, expect));
    }

    FeatureMatrix S(2, 2);
    S << 1.5, -0.5, -1.5, 0.5;
    const Matrix KS = linear_gram(S);
    const auto ss = solve_dual(KS, y, reg);
    CHECK(std::abs(compute_bias(ss.betas, KS, y, reg)) < 1e-9);
}

TEST_CASE("objective is non-negative and ascends") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) {
        const auto p = random_problem(rng, 30);
        const Matrix K = gram_matrix(p.X, KernelSpec::rbf(0.7));
        const RegularizationParams reg{10.0, 0.0, 0.0};
        CHECK(dual_objective(Vector::Zero(30), K, p.y, reg) == 0.0);
        SolverOptions opts;
        opts.check_monotone = true;
        const auto sol = solve_dual(K, p.y, reg, opts);
        CHECK(sol.report.final_objective >= 0.0);
        CHECK(sol.report.converged);
    }
}

TEST_CASE("lambda2 equals a diagonal shift") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 5; ++t) {
        const auto p = random_problem(rng, 8);
        const Matrix K = gram_matrix(p.X, KernelSpec::rbf(1.0));
        const auto a = solve_dual(K, p.y, {5.0, 0.0, 0.1});
        const Matrix shifted = K + 0.2 * Matrix::Identity(8, 8);
        const auto b = solve_dual(shifted, p.y, {5.0, 0.0, 0.0});
        CHECK((a.betas - b.betas).cwiseAbs().maxCoeff() <= 1e-6);
    }
}

TEST_CASE("objective matches brute-force projected gradient") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> C(0.5, 20.0);
    for (int t = 0; t < 12; ++t) {
        const Eigen::Index m = 3 + t % 4;
        const auto p = random_problem(rng, m);
        const KernelSpec k = t % 2 ? KernelSpec::rbf(0.8) : KernelSpec::rbf(2.0, true);
        const Matrix K = gram_matrix(p.X, k);
        const RegularizationParams reg{C(rng), t % 3 == 0 ? 0.2 : 0.0, t % 4 == 1 ? 0.05 : 0.0};
        const auto sol = solve_dual(K, p.y, reg);
        const double best = oracle::best_dual_objective(K, p.y, reg.C, reg.lambda1, reg.lambda2, 50000);
        CHECK(std::abs(sol.report.final_objective - best) <= 1e-4);
    }
}

TEST_CASE("feasibility and KKT audit") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 8; ++t) {
        const auto p = random_problem(rng, 40);
        const Matrix K = gram_matrix(p.X, KernelSpec::rbf(0.5));
        const RegularizationParams reg{t % 2 ? 1.0 : 100.0, t % 3 == 0 ? 0.3 : 0.0, t % 4 == 0 ? 0.01 : 0.0};

        SolverOptions few;
        few.max_iter = 3;
        const auto partial = solve_dual(K, p.y, reg, few);
        CHECK_FALSE(partial.report.converged);
        CHECK(partial.report.iterations == 3);
        CHECK(equality_residual(partial.betas, p.y) <= 1e-8);
        CHECK(partial.betas.minCoeff() >= 0.0);
        CHECK(partial.betas.maxCoeff() <= reg.C);

        const auto sol = solve_dual(K, p.y, reg);
        REQUIRE(sol.report.converged);
        CHECK(sol.report.kkt_violation <= 1e-6);
        CHECK(equality_residual(sol.betas, p.y) <= 1e-8);
        CHECK(sol.betas.minCoeff() >= 0.0);
        CHECK(sol.betas.maxCoeff() <= reg.C);
        const double b = compute_bias(sol.betas, K, p.y, reg);
        CHECK(kkt_violation(sol.betas, K, p.y, reg, b) <= 1e-6);
    }
}

TEST_CASE("free support vectors sit on the margin") {
    std::mt19937_64 rng(2);
    const auto p = random_problem(rng, 30);
    const KernelSpec k = KernelSpec::rbf(1.0);
    const auto trained = train_svm(p.X, p.y, k, {10.0, 0.0, 0.0});
    const auto& model = trained.model;
    int n_free = 0;
    const double eps = model.reg.sv_threshold();
    for (Eigen::Index i = 0; i < model.betas.size(); ++i) {
        if (model.betas(i) > eps && model.betas(i) < model.reg.C - eps) {
            ++n_free;
            const double f = decision_function(model, row_span(p.X, i));
            CHECK(std::abs(p.y[static_cast<std::size_t>(i)] * f - 1.0) <= 1e-6);
        }
    }
    CHECK(n_free > 0);
}

TEST_CASE("l2 penalty never grows the coefficient norm") {
    std::mt19937_64 rng(44);
    for (int t = 0; t < 6; ++t) {
        const auto p = random_problem(rng, 25);
        const Matrix K = gram_matrix(p.X, KernelSpec::rbf(0.6));
        double prev = std::numeric_limits<double>::infinity();
        for (double l2 : {0.0, 0.01, 0.05, 0.1, 0.5, 1.0}) {
            const auto sol = solve_dual(K, p.y, {10.0, 0.0, l2});
            const double n = sol.betas.norm();
            CHECK(n <= prev + 1e-6);
            prev = n;
        }
    }
}

TEST_CASE("decision function and accuracy") {
    SvmModel empty;
    empty.kernel = KernelSpec::rbf(1.0);
    empty.points = FeatureMatrix::Zero(2, 2);
    empty.labels = {1, -1};
    empty.betas = Vector::Zero(2);
    empty.bias = -0.25;
    const std::vector<double> x{0.3, 0.4};
    CHECK(decision_function(empty, x) == -0.25);
    CHECK(predict_label(0.0) == 1);
    CHECK(predict_label(-1e-300) == -1);

    std::mt19937_64 rng(3);
    FeatureMatrix X(40, 2);
    std::vector<int> y;
    std::normal_distribution<double> g(0.0, 0.3);
    for (Eigen::Index i = 0; i < 40; ++i) {
        const int label = i < 20 ? 1 : -1;
        X(i, 0) = 2.0 * label + g(rng);
        X(i, 1) = g(rng);
        y.push_back(label);
    }
    const auto trained = train_svm(X, y, KernelSpec::rbf(1.0), {1000.0, 0.0, 0.0});
    const double acc = accuracy(trained.model, X, y);
    CHECK(acc == 1.0);

    const auto q = random_problem(rng, 30);
    const auto noisy = train_svm(q.X, q.y, KernelSpec::rbf(3.0), {0.5, 0.0, 0.0}).model;
    std::vector<int> flipped(q.y);
    for (auto& v : flipped) v = -v;
    CHECK(std::abs(accuracy(noisy, q.X, flipped) - (1.0 - accuracy(noisy, q.X, q.y))) < 1e-15);

    CHECK_THROWS_AS(accuracy(noisy, FeatureMatrix(0, 2), {}), ArgumentError);
    const std::vector<double> wrong{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(decision_function(noisy, wrong), ArgumentError);
}

TEST_CASE("solver error paths") {
    const Matrix K = Matrix::Identity(3, 3);
    const std::vector<int> same{1, 1, 1};
    CHECK_THROWS_AS(solve_dual(K, same, {}), TrainingError);
    Matrix bad = K;
    bad(0, 1) = std::nan("");
    const std::vector<int> y{1, -1, 1};
    CHECK_THROWS_AS(solve_dual(bad, y, {}), DataError);
    CHECK_THROWS_AS(solve_dual(K, y, {1.0, 1.5, 0.0}), ConfigError);
    CHECK_THROWS_AS(solve_dual(K, y, {0.0, 0.0, 0.0}), ConfigError);
    CHECK_THROWS_AS(solve_dual(K, y, {1.0, 0.0, -0.1}), ConfigError);
    CHECK_THROWS_AS(compute_bias(Vector::Zero(3), K, y, {}), TrainingError);
}

TEST_CASE("model round trip") {
    std::mt19937_64 rng(77);
    const auto p = random_problem(rng, 20);
    FeatureMapSpec fm;
    fm.paulis = {"Y", "YY"};
    fm.alpha = 0.7;
    for (const auto& k : {KernelSpec::quantum(fm), KernelSpec::rbf(0.4, true)}) {
        const auto model = train_svm(p.X, p.y, k, {3.0, 0.1, 0.02}).model;
        const auto path = std::filesystem::temp_directory_path() / "qsvm_model_roundtrip.json";
        save_model(model, path);
        const auto loaded = load_model(path);
        CHECK(loaded.kernel == model.kernel);
        CHECK(loaded.reg == model.reg);
        const auto probe = random_problem(rng, 15);
        const Vector a = decision_values(model, probe.X);
        const Vector b = decision_values(loaded, probe.X);
        CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
    }
}
