#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <variant>

#include "qsvm/feature_map.hpp"
#include "qsvm/linalg.hpp"

namespace qsvm {

/// Classical baseline: exp(-||u - v|| / h), or exp(-||u - v||^2 / (2 h^2))
/// when `squared` is set.
struct RbfSpec {
    double h = 1.0;
    bool squared = false;

    bool operator==(const RbfSpec&) const = default;
};

struct KernelSpec {
    std::variant<FeatureMapSpec, RbfSpec> kind;

    static KernelSpec quantum(FeatureMapSpec fm) { return {std::move(fm)}; }
    static KernelSpec rbf(double h, bool squared = false) { return {RbfSpec{h, squared}}; }

    bool is_quantum() const noexcept { return std::holds_alternative<FeatureMapSpec>(kind); }
    const FeatureMapSpec& feature_map() const { return std::get<FeatureMapSpec>(kind); }
    const RbfSpec& rbf_params() const { return std::get<RbfSpec>(kind); }

    void validate() const;
    std::string label() const;

    bool operator==(const KernelSpec&) const = default;
};

/// |<Phi(x)|Phi(z)>|^2
double quantum_kernel(std::span<const double> x, std::span<const double> z, const FeatureMapSpec& fm);

double rbf_kernel(std::span<const double> x, std::span<const double> z, double h, bool squared = false);

double kernel_value(std::span<const double> x, std::span<const double> z, const KernelSpec& k);

/// Symmetric m x m matrix of K(x_i, x_j). Feature states are built once per
/// point unless `reuse_states` is false (used to check that caching is
/// transparent).
Matrix gram_matrix(const FeatureMatrix& X, const KernelSpec& k, bool reuse_states = true);

/// m_eval x m_train matrix with entry (i, j) = K(eval_i, train_j).
Matrix cross_matrix(const FeatureMatrix& X_train, const FeatureMatrix& X_eval, const KernelSpec& k);

/// Writes header c1..cm then m rows, plus a `<path>.meta.json` sidecar.
void save_gram_csv(const Matrix& K, const std::filesystem::path& path);

}  // namespace qsvm
