#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "qsvm/datasets.hpp"
#include "qsvm/errors.hpp"

namespace qsvm {

PcaTransform fit_pca_2d(const FeatureMatrix& X) {
    if (X.rows() < 3) throw DataError(fmt::format("PCA needs at least 3 samples, got {}", X.rows()));
    if (X.cols() < 2) throw DataError(fmt::format("PCA needs at least 2 features, got {}", X.cols()));
    PcaTransform t;
    t.mean = X.colwise().mean().transpose();
    const Matrix centered = X.rowwise() - t.mean.transpose();
    const Matrix cov = centered.transpose() * centered / static_cast<double>(X.rows() - 1);

    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
    if (eig.info() != Eigen::Success) throw DataError("covariance eigen-decomposition failed");
    const Eigen::Index d = cov.rows();
    const double top = eig.eigenvalues()(d - 1);
    const double second = eig.eigenvalues()(d - 2);
    if (!(top > 0.0) || second <= 1e-12 * top) {
        throw DataError("degenerate data: fewer than 2 non-zero principal variances");
    }
    t.explained_variance = {top, second};
    t.components.resize(2, d);
    for (int r = 0; r < 2; ++r) {
        Vector v = eig.eigenvectors().col(d - 1 - r);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0.0) v = -v;
        t.components.row(r) = v.transpose();
    }
    return t;
}

FeatureMatrix apply_pca(const PcaTransform& t, const FeatureMatrix& X) {
    if (X.cols() != t.mean.size()) {
        throw ArgumentError(fmt::format("PCA fitted on {} features, got {}", t.mean.size(), X.cols()));
    }
    return (X.rowwise() - t.mean.transpose()) * t.components.transpose();
}

FeatureMatrix standardize(const FeatureMatrix& X) {
    const Eigen::RowVectorXd mean = X.colwise().mean();
    FeatureMatrix out = X.rowwise() - mean;
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
        const double sd = std::sqrt(out.col(c).squaredNorm() / static_cast<double>(std::max<Eigen::Index>(X.rows() - 1, 1)));
        if (sd > 0.0) out.col(c) /= sd;
    }
    return out;
}

FeatureMatrix AngleScaler::apply(const FeatureMatrix& X) const {
    if (X.cols() != min.size()) {
        throw ArgumentError(fmt::format("scaler fitted on {} features, got {}", min.size(), X.cols()));
    }
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    FeatureMatrix out(X.rows(), X.cols());
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
        const double span = max(c) - min(c);
        for (Eigen::Index r = 0; r < X.rows(); ++r) out(r, c) = kTwoPi * (X(r, c) - min(c)) / span;
    }
    return out;
}

ScaledData scale_to_angle_range(const FeatureMatrix& X) {
    if (X.rows() == 0) throw DataError("cannot scale an empty sample set");
    ScaledData out;
    out.scaler.min = X.colwise().minCoeff().transpose();
    out.scaler.max = X.colwise().maxCoeff().transpose();
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
        if (!(out.scaler.max(c) > out.scaler.min(c))) {
            throw DataError(fmt::format("degenerate feature {}: constant value {}", c + 1, out.scaler.min(c)));
        }
    }
    out.X = out.scaler.apply(X);
    return out;
}

SplitIndices train_test_split(const Dataset& ds, double test_frac, std::uint64_t seed) {
    if (!(test_frac > 0.0 && test_frac < 1.0)) {
        throw ArgumentError(fmt::format("test fraction must lie in (0, 1), got {}", test_frac));
    }
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < ds.y.size(); ++i) (ds.y[i] > 0 ? pos : neg).push_back(i);
    if (pos.size() < 2 || neg.size() < 2) {
        throw DataError(fmt::format("split needs at least 2 points per class, have {} / {}", pos.size(),
                                    neg.size()));
    }

    const double m = static_cast<double>(ds.size());
    const auto total = static_cast<std::size_t>(std::llround(test_frac * m));
    const double want_pos = test_frac * static_cast<double>(pos.size());
    const double want_neg = test_frac * static_cast<double>(neg.size());
    auto n_pos = static_cast<std::size_t>(std::floor(want_pos));
    auto n_neg = static_cast<std::size_t>(std::floor(want_neg));
    const double frac_pos = want_pos - static_cast<double>(n_pos);
    const double frac_neg = want_neg - static_cast<double>(n_neg);
    // Largest fractional part first, positive class on ties.
    const bool pos_first = frac_pos >= frac_neg;
    for (int turn = 0; turn < 2 && n_pos + n_neg < total; ++turn) {
        ((turn == 0) == pos_first ? n_pos : n_neg) += 1;
    }
    n_pos = std::clamp<std::size_t>(n_pos, 1, pos.size() - 1);
    n_neg = std::clamp<std::size_t>(n_neg, 1, neg.size() - 1);

    std::mt19937_64 rng(seed);
    std::shuffle(pos.begin(), pos.end(), rng);
    std::shuffle(neg.begin(), neg.end(), rng);
    SplitIndices out;
    out.test.assign(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(n_pos));
    out.test.insert(out.test.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(n_neg));
    out.train.assign(pos.begin() + static_cast<std::ptrdiff_t>(n_pos), pos.end());
    out.train.insert(out.train.end(), neg.begin() + static_cast<std::ptrdiff_t>(n_neg), neg.end());
    std::sort(out.test.begin(), out.test.end());
    std::sort(out.train.begin(), out.train.end());
    return out;
}

Dataset balance_classes(const Dataset& ds, std::uint64_t seed) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < ds.y.size(); ++i) (ds.y[i] > 0 ? pos : neg).push_back(i);
    const std::size_t n = std::min(pos.size(), neg.size());
    std::mt19937_64 rng(seed);
    auto& major = pos.size() > n ? pos : neg;
    std::shuffle(major.begin(), major.end(), rng);
    major.resize(n);
    std::vector<std::size_t> keep(pos);
    keep.insert(keep.end(), neg.begin(), neg.end());
    std::sort(keep.begin(), keep.end());
    return ds.subset(keep);
}

}  // namespace qsvm
