#include "qsvm/kernels.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "qsvm/errors.hpp"
#include "qsvm/version.hpp"

namespace qsvm {

void KernelSpec::validate() const {
    if (is_quantum()) {
        feature_map().validate();
    } else {
        const auto& r = rbf_params();
        if (!(r.h > 0.0) || !std::isfinite(r.h)) {
            throw ConfigError(fmt::format("RBF width h must be positive, got {}", r.h));
        }
    }
}

std::string KernelSpec::label() const {
    if (is_quantum()) return feature_map().label();
    return rbf_params().squared ? "RBF2" : "RBF";
}

namespace {

void check_same_dim(std::span<const double> x, std::span<const double> z) {
    if (x.size() != z.size()) {
        throw ArgumentError(fmt::format("kernel arguments have dimensions {} and {}", x.size(), z.size()));
    }
}

double fidelity(const StateVector& a, const StateVector& b) {
    const double f = std::norm(inner_product(a, b));
    // Rounding can push the overlap of identical states a hair above 1.
    return f > 1.0 ? 1.0 : f;
}

std::vector<StateVector> feature_states(const FeatureMatrix& X, const FeatureMapSpec& fm) {
    const auto terms = expand_terms(fm, static_cast<std::size_t>(X.cols()));
    std::vector<StateVector> states;
    states.reserve(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        states.push_back(build_feature_state(row_span(X, i), fm, terms));
    }
    return states;
}

}  // namespace

double quantum_kernel(std::span<const double> x, std::span<const double> z, const FeatureMapSpec& fm) {
    check_same_dim(x, z);
    return fidelity(build_feature_state(x, fm), build_feature_state(z, fm));
}

double rbf_kernel(std::span<const double> x, std::span<const double> z, double h, bool squared) {
    check_same_dim(x, z);
    if (!(h > 0.0)) throw ArgumentError(fmt::format("RBF width h must be positive, got {}", h));
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - z[i];
        d2 += d * d;
    }
    if (squared) return std::exp(-d2 / (2.0 * h * h));
    return std::exp(-std::sqrt(d2) / h);
}

double kernel_value(std::span<const double> x, std::span<const double> z, const KernelSpec& k) {
    if (k.is_quantum()) return quantum_kernel(x, z, k.feature_map());
    return rbf_kernel(x, z, k.rbf_params().h, k.rbf_params().squared);
}

Matrix gram_matrix(const FeatureMatrix& X, const KernelSpec& k, bool reuse_states) {
    if (X.rows() == 0) throw ArgumentError("gram matrix of an empty sample set");
    k.validate();
    const Eigen::Index m = X.rows();
    Matrix K(m, m);
    if (k.is_quantum() && reuse_states) {
        const auto states = feature_states(X, k.feature_map());
        for (Eigen::Index i = 0; i < m; ++i) {
            K(i, i) = fidelity(states[i], states[i]);
            for (Eigen::Index j = i + 1; j < m; ++j) {
                K(i, j) = K(j, i) = fidelity(states[i], states[j]);
            }
        }
        return K;
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i; j < m; ++j) {
            K(i, j) = K(j, i) = kernel_value(row_span(X, i), row_span(X, j), k);
        }
    }
    return K;
}

Matrix cross_matrix(const FeatureMatrix& X_train, const FeatureMatrix& X_eval, const KernelSpec& k) {
    if (X_train.cols() != X_eval.cols()) {
        throw ArgumentError(fmt::format("train points have {} features, eval points have {}",
                                        X_train.cols(), X_eval.cols()));
    }
    k.validate();
    Matrix out(X_eval.rows(), X_train.rows());
    if (k.is_quantum()) {
        const auto train = feature_states(X_train, k.feature_map());
        const auto eval = feature_states(X_eval, k.feature_map());
        for (Eigen::Index i = 0; i < out.rows(); ++i) {
            for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) = fidelity(eval[i], train[j]);
        }
        return out;
    }
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        for (Eigen::Index j = 0; j < out.cols(); ++j) {
            out(i, j) = kernel_value(row_span(X_eval, i), row_span(X_train, j), k);
        }
    }
    return out;
}

void save_gram_csv(const Matrix& K, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
    for (Eigen::Index j = 0; j < K.cols(); ++j) out << (j ? "," : "") << 'c' << (j + 1);
    out << '\n';
    for (Eigen::Index i = 0; i < K.rows(); ++i) {
        for (Eigen::Index j = 0; j < K.cols(); ++j) out << (j ? "," : "") << fmt::format("{}", K(i, j));
        out << '\n';
    }
    nlohmann::json meta{{"format_version", kFormatVersion}, {"kind", "gram"}, {"m", K.rows()}};
    std::ofstream(path.string() + ".meta.json") << meta.dump(2) << '\n';
}

}  // namespace qsvm
