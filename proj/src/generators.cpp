#include <algorithm>
#include <cmath>
#include <numbers>
#include <bit>
#include <random>

#include <fmt/format.h>

#include "qsvm/datasets.hpp"
#include "qsvm/errors.hpp"

namespace qsvm {

std::size_t Dataset::count(int label) const noexcept {
    return static_cast<std::size_t>(std::count(y.begin(), y.end(), label));
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    Dataset out;
    out.name = name;
    out.seed = seed;
    out.X.resize(static_cast<Eigen::Index>(rows.size()), X.cols());
    out.y.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out.X.row(static_cast<Eigen::Index>(r)) = X.row(static_cast<Eigen::Index>(rows[r]));
        out.y.push_back(y[rows[r]]);
    }
    return out;
}

Dataset gen_xor(const XorParams& params, std::uint64_t seed) {
    if (params.m % 2 != 0) throw ArgumentError(fmt::format("XOR size must be even, got {}", params.m));
    if (params.m < 4) throw ArgumentError(fmt::format("XOR size must be at least 4, got {}", params.m));
    if (!(params.noise_sd >= 0.0)) throw ArgumentError("XOR noise_sd must be non-negative");

    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    static constexpr int kQuadrant[4][2] = {{1, 1}, {1, -1}, {-1, -1}, {-1, 1}};

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    Dataset ds;
    ds.name = "xor";
    ds.seed = seed;
    ds.X.resize(static_cast<Eigen::Index>(params.m), 2);
    ds.y.resize(params.m);
    for (std::size_t i = 0; i < params.m; ++i) {
        const auto& sgn = kQuadrant[i % 4];
        for (int c = 0; c < 2; ++c) {
            const double v = sgn[c] * params.q + params.noise_sd * noise(rng) + std::numbers::pi;
            ds.X(static_cast<Eigen::Index>(i), c) = std::clamp(v, 0.0, kTwoPi);
        }
        ds.y[i] = sgn[0] * sgn[1];
    }
    return ds;
}

FeatureMapSpec adhoc_feature_map() {
    FeatureMapSpec fm;
    fm.paulis = {"Z", "ZZ"};
    fm.alpha = 1.0;
    fm.depth = 2;
    fm.data_map = DataMap::ProductShifted;
    return fm;
}

namespace {

using Matrix4c = Eigen::Matrix4cd;

// Haar-random U(4): QR of a complex Gaussian matrix with R's diagonal phases
// folded back into Q.
Matrix4c haar_unitary(std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix4c A;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            const double re = g(rng);
            const double im = g(rng);
            A(r, c) = {re, im};
        }
    }
    Eigen::HouseholderQR<Matrix4c> qr(A);
    Matrix4c Q = qr.householderQ();
    const Matrix4c R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < 4; ++c) {
        const double mag = std::abs(R(c, c));
        if (mag > 0.0) Q.col(c) *= R(c, c) / mag;
    }
    return Q;
}

// V^dag (Z x Z) V in the qubit-0-least-significant basis.
Matrix4c adhoc_observable(std::uint64_t seed) {
    const Matrix4c V = haar_unitary(seed);
    Matrix4c zz = Matrix4c::Zero();
    for (int k = 0; k < 4; ++k) zz(k, k) = (std::popcount(static_cast<unsigned>(k)) % 2) ? -1.0 : 1.0;
    return V.adjoint() * zz * V;
}

double expectation(const Matrix4c& O, const StateVector& s) {
    Eigen::Vector4cd v;
    for (int k = 0; k < 4; ++k) v(k) = s[static_cast<std::size_t>(k)];
    return (v.adjoint() * O * v)(0, 0).real();
}

}  // namespace

double adhoc_expectation(std::span<const double> x, std::uint64_t seed) {
    if (x.size() != 2) throw ArgumentError("ad-hoc labelling is defined on 2 features");
    return expectation(adhoc_observable(seed), build_feature_state(x, adhoc_feature_map()));
}

Dataset gen_adhoc_complex(const AdhocParams& params, std::uint64_t seed) {
    if (params.m % 2 != 0) throw ArgumentError(fmt::format("ad-hoc size must be even, got {}", params.m));
    if (params.m < 4) throw ArgumentError(fmt::format("ad-hoc size must be at least 4, got {}", params.m));
    if (!(params.gap > 0.0)) throw ArgumentError("ad-hoc gap must be positive");
    if (params.grid < 2) throw ArgumentError("ad-hoc grid must have at least 2 points per axis");

    const Matrix4c O = adhoc_observable(seed);
    const auto fm = adhoc_feature_map();
    const auto terms = expand_terms(fm, 2);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(params.grid);

    std::vector<std::size_t> order(params.grid * params.grid);
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    const std::size_t per_class = params.m / 2;
    std::size_t n_pos = 0, n_neg = 0;
    Dataset ds;
    ds.name = "adhoc";
    ds.seed = seed;
    ds.X.resize(static_cast<Eigen::Index>(params.m), 2);
    ds.y.reserve(params.m);
    for (std::size_t cell : order) {
        if (n_pos == per_class && n_neg == per_class) break;
        const double x[2] = {step * static_cast<double>(cell % params.grid),
                             step * static_cast<double>(cell / params.grid)};
        const double e = expectation(O, build_feature_state(x, fm, terms));
        int label = 0;
        if (e >= params.gap && n_pos < per_class) {
            label = 1;
            ++n_pos;
        } else if (e <= -params.gap && n_neg < per_class) {
            label = -1;
            ++n_neg;
        }
        if (label == 0) continue;
        const auto row = static_cast<Eigen::Index>(ds.y.size());
        ds.X(row, 0) = x[0];
        ds.X(row, 1) = x[1];
        ds.y.push_back(label);
    }
    if (n_pos < per_class || n_neg < per_class) {
        throw GenerationError(fmt::format(
            "only {} positive / {} negative candidates clear gap {} on a {}x{} grid; try a smaller gap",
            n_pos, n_neg, params.gap, params.grid, params.grid));
    }
    return ds;
}

}  // namespace qsvm
