#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "qsvm/kernels.hpp"
#include "qsvm/linalg.hpp"

namespace qsvm {

/// Box bound and penalty weights of the regularized dual
///   max  sum (1 - lambda1) b_i - 1/2 sum_ij b_i b_j y_i y_j (K_ij + 2 lambda2 delta_ij)
///   s.t. 0 <= b_i <= C,  sum b_i y_i = 0.
struct RegularizationParams {
    double C = 1.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;

    /// Throws ConfigError unless C > 0, 0 <= lambda1 < 1, lambda2 >= 0.
    void validate() const;

    /// Coefficients below this are not support vectors.
    double sv_threshold() const noexcept { return 1e-8 * C; }

    bool operator==(const RegularizationParams&) const = default;
};

struct SolverOptions {
    double tol = 1e-6;
    long max_iter = 100000;
    // Recomputes the objective after every update and throws if it drops.
    bool check_monotone = false;
};

struct TrainReport {
    long iterations = 0;
    double final_objective = 0.0;
    double kkt_violation = 0.0;  // maximal-violating-pair gap at exit
    bool converged = false;
};

struct DualSolution {
    Vector betas;
    TrainReport report;
};

/// SMO on the dual above. Pair selection takes the maximal violating pair,
/// lowest index on ties. Throws TrainingError for single-class labels and
/// DataError for non-finite kernel entries; hitting max_iter is reported,
/// not thrown.
DualSolution solve_dual(const Matrix& K, std::span<const int> y, const RegularizationParams& reg,
                        const SolverOptions& opts = {});

/// Regularized dual objective at `betas`.
double dual_objective(const Vector& betas, const Matrix& K, std::span<const int> y,
                      const RegularizationParams& reg);

/// Offset b: mean over free support vectors, or the midpoint of the feasible
/// interval when every coefficient sits at a bound. Throws TrainingError when
/// there are no support vectors.
double compute_bias(const Vector& betas, const Matrix& K, std::span<const int> y,
                    const RegularizationParams& reg);

/// Largest KKT violation of (betas, b) measured on the lambda2-shifted kernel,
/// with margin target 1 - lambda1.
double kkt_violation(const Vector& betas, const Matrix& K, std::span<const int> y,
                     const RegularizationParams& reg, double bias);

struct SvmModel {
    KernelSpec kernel;
    RegularizationParams reg;
    FeatureMatrix points;     // training points
    std::vector<int> labels;  // +1 / -1
    Vector betas;
    double bias = 0.0;

    std::vector<Eigen::Index> support_indices() const;
    std::size_t n_features() const noexcept { return static_cast<std::size_t>(points.cols()); }
};

struct TrainResult {
    SvmModel model;
    TrainReport report;
};

TrainResult train_svm(const FeatureMatrix& X, std::span<const int> y, const KernelSpec& kernel,
                      const RegularizationParams& reg, const SolverOptions& opts = {});

/// sum_i b_i y_i K(x_i, x) + b
double decision_function(const SvmModel& model, std::span<const double> x);

/// Batched decision_function over the rows of X.
Vector decision_values(const SvmModel& model, const FeatureMatrix& X);

/// sign with sign(0) = +1
inline int predict_label(double score) noexcept { return score >= 0.0 ? 1 : -1; }

double accuracy(const SvmModel& model, const FeatureMatrix& X, std::span<const int> y);

void save_model(const SvmModel& model, const std::filesystem::path& path);
SvmModel load_model(const std::filesystem::path& path);

}  // namespace qsvm
