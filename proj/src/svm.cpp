#include "qsvm/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "qsvm/errors.hpp"

namespace qsvm {

void RegularizationParams::validate() const {
    if (!(C > 0.0) || !std::isfinite(C)) throw ConfigError(fmt::format("C must be positive, got {}", C));
    if (!(lambda1 >= 0.0 && lambda1 < 1.0)) {
        throw ConfigError(fmt::format("lambda1 must satisfy 0 <= lambda1 < 1, got {}", lambda1));
    }
    if (!(lambda2 >= 0.0) || !std::isfinite(lambda2)) {
        throw ConfigError(fmt::format("lambda2 must be non-negative, got {}", lambda2));
    }
}

namespace {

void check_problem(const Matrix& K, std::span<const int> y) {
    const auto m = static_cast<std::size_t>(K.rows());
    if (K.rows() != K.cols()) throw ArgumentError("kernel matrix is not square");
    if (y.size() != m) {
        throw ArgumentError(fmt::format("{} labels for a {}x{} kernel matrix", y.size(), m, m));
    }
    bool pos = false, neg = false;
    for (int v : y) {
        if (v == 1) pos = true;
        else if (v == -1) neg = true;
        else throw ArgumentError(fmt::format("label {} is not +1 or -1", v));
    }
    if (!pos || !neg) throw TrainingError("training labels contain a single class");
    if (!K.allFinite()) throw DataError("kernel matrix has non-finite entries");
}

// Shifted kernel entry K_ij + 2 lambda2 delta_ij.
inline double shifted(const Matrix& K, Eigen::Index i, Eigen::Index j, double lambda2) {
    return i == j ? K(i, i) + 2.0 * lambda2 : K(i, j);
}

// r_i = y_i (1 - lambda1) - sum_j b_j y_j Kshift_ij. A free coefficient has b = r_i.
Vector margins_residual(const Vector& betas, const Matrix& K, std::span<const int> y,
                        const RegularizationParams& reg) {
    const Eigen::Index m = K.rows();
    Vector by(m);
    for (Eigen::Index i = 0; i < m; ++i) by(i) = betas(i) * y[i];
    Vector r = -(K * by);
    for (Eigen::Index i = 0; i < m; ++i) {
        r(i) += y[i] * (1.0 - reg.lambda1) - 2.0 * reg.lambda2 * by(i);
    }
    return r;
}

bool in_up(int y, double b, double C) { return y > 0 ? b < C : b > 0.0; }
bool in_low(int y, double b, double C) { return y > 0 ? b > 0.0 : b < C; }

}  // namespace

double dual_objective(const Vector& betas, const Matrix& K, std::span<const int> y,
                      const RegularizationParams& reg) {
    const Eigen::Index m = K.rows();
    Vector by(m);
    for (Eigen::Index i = 0; i < m; ++i) by(i) = betas(i) * y[i];
    return (1.0 - reg.lambda1) * betas.sum() - 0.5 * by.dot(K * by) - reg.lambda2 * betas.squaredNorm();
}

DualSolution solve_dual(const Matrix& K, std::span<const int> y, const RegularizationParams& reg,
                        const SolverOptions& opts) {
    reg.validate();
    check_problem(K, y);
    const Eigen::Index m = K.rows();
    const double C = reg.C;
    const double p = 1.0 - reg.lambda1;
    constexpr double kTau = 1e-12;

    // Minimization form f = 1/2 b'Qb - p'b with Q_ij = y_i y_j Kshift_ij; G = Qb - p.
    Vector beta = Vector::Zero(m);
    Vector grad = Vector::Constant(m, -p);

    DualSolution sol;
    double prev_obj = 0.0;
    long iter = 0;
    double gap = 0.0;
    bool grad_fresh = true;
    while (true) {
        Eigen::Index i = -1, j = -1;
        double up_max = -std::numeric_limits<double>::infinity();
        double low_min = std::numeric_limits<double>::infinity();
        for (Eigen::Index t = 0; t < m; ++t) {
            const double v = -y[t] * grad(t);
            if (in_up(y[t], beta(t), C) && v > up_max) {
                up_max = v;
                i = t;
            }
            if (in_low(y[t], beta(t), C) && v < low_min) {
                low_min = v;
                j = t;
            }
        }
        gap = (i < 0 || j < 0) ? 0.0 : up_max - low_min;
        if (gap <= opts.tol) {
            if (grad_fresh) {
                sol.report.converged = true;
                break;
            }
            // Confirm against a gradient rebuilt from scratch before stopping.
            grad = -margins_residual(beta, K, y, reg);
            for (Eigen::Index t = 0; t < m; ++t) grad(t) *= y[t];
            grad_fresh = true;
            continue;
        }
        if (iter >= opts.max_iter) break;

        // Move b_i += y_i t, b_j -= y_j t along the equality constraint.
        const double eta = std::max(shifted(K, i, i, reg.lambda2) + shifted(K, j, j, reg.lambda2) -
                                        2.0 * K(i, j),
                                    kTau);
        const double cap_i = y[i] > 0 ? C - beta(i) : beta(i);
        const double cap_j = y[j] > 0 ? beta(j) : C - beta(j);
        const double t = std::min({gap / eta, cap_i, cap_j});
        // Land exactly on a bound when the step is clipped by it.
        beta(i) = t == cap_i ? (y[i] > 0 ? C : 0.0) : std::clamp(beta(i) + y[i] * t, 0.0, C);
        beta(j) = t == cap_j ? (y[j] > 0 ? 0.0 : C) : std::clamp(beta(j) - y[j] * t, 0.0, C);

        for (Eigen::Index k = 0; k < m; ++k) {
            grad(k) += y[k] * t * (shifted(K, k, i, reg.lambda2) - shifted(K, k, j, reg.lambda2));
        }
        ++iter;
        grad_fresh = false;

        if (opts.check_monotone) {
            const double obj = dual_objective(beta, K, y, reg);
            if (obj < prev_obj - 1e-12 * std::max(1.0, std::abs(prev_obj))) {
                throw TrainingError(fmt::format("objective decreased at iteration {}: {} -> {}", iter,
                                                prev_obj, obj));
            }
            prev_obj = obj;
        }
    }
    sol.report.iterations = iter;
    sol.report.kkt_violation = std::max(gap, 0.0);
    sol.report.final_objective = dual_objective(beta, K, y, reg);
    sol.betas = std::move(beta);
    return sol;
}

double compute_bias(const Vector& betas, const Matrix& K, std::span<const int> y,
                    const RegularizationParams& reg) {
    const double C = reg.C;
    const double eps = reg.sv_threshold();
    const Eigen::Index m = K.rows();
    if ((betas.array() > eps).count() == 0) throw TrainingError("model has no support vectors");

    const Vector r = margins_residual(betas, K, y, reg);
    double free_sum = 0.0;
    long n_free = 0;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
        if (betas(i) > eps && betas(i) < C - eps) {
            free_sum += r(i);
            ++n_free;
        }
        if (in_up(y[i], betas(i), C)) lower = std::max(lower, r(i));
        if (in_low(y[i], betas(i), C)) upper = std::min(upper, r(i));
    }
    if (n_free > 0) return free_sum / static_cast<double>(n_free);
    if (!std::isfinite(lower)) return upper;
    if (!std::isfinite(upper)) return lower;
    return 0.5 * (lower + upper);
}

double kkt_violation(const Vector& betas, const Matrix& K, std::span<const int> y,
                     const RegularizationParams& reg, double bias) {
    const double C = reg.C;
    const double eps = reg.sv_threshold();
    const Vector r = margins_residual(betas, K, y, reg);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < K.rows(); ++i) {
        // y_i f(x_i) - (1 - lambda1) = y_i (b - r_i)
        const double slack = y[i] * (bias - r(i));
        double v = 0.0;
        if (betas(i) <= eps) v = std::max(0.0, -slack);
        else if (betas(i) >= C - eps) v = std::max(0.0, slack);
        else v = std::abs(slack);
        worst = std::max(worst, v);
    }
    return worst;
}

std::vector<Eigen::Index> SvmModel::support_indices() const {
    std::vector<Eigen::Index> out;
    const double eps = reg.sv_threshold();
    for (Eigen::Index i = 0; i < betas.size(); ++i) {
        if (betas(i) > eps) out.push_back(i);
    }
    return out;
}

TrainResult train_svm(const FeatureMatrix& X, std::span<const int> y, const KernelSpec& kernel,
                      const RegularizationParams& reg, const SolverOptions& opts) {
    const Matrix K = gram_matrix(X, kernel);
    auto sol = solve_dual(K, y, reg, opts);
    TrainResult out;
    out.model.kernel = kernel;
    out.model.reg = reg;
    out.model.points = X;
    out.model.labels.assign(y.begin(), y.end());
    out.model.bias = compute_bias(sol.betas, K, y, reg);
    out.model.betas = std::move(sol.betas);
    out.report = sol.report;
    return out;
}

Vector decision_values(const SvmModel& model, const FeatureMatrix& X) {
    if (static_cast<std::size_t>(X.cols()) != model.n_features()) {
        throw ArgumentError(fmt::format("model expects {} features, got {}", model.n_features(), X.cols()));
    }
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < model.betas.size(); ++i) {
        if (model.betas(i) != 0.0) active.push_back(i);
    }
    Vector scores = Vector::Constant(X.rows(), model.bias);
    if (active.empty() || X.rows() == 0) return scores;
    FeatureMatrix sv(static_cast<Eigen::Index>(active.size()), model.points.cols());
    Vector coef(static_cast<Eigen::Index>(active.size()));
    for (std::size_t a = 0; a < active.size(); ++a) {
        sv.row(static_cast<Eigen::Index>(a)) = model.points.row(active[a]);
        coef(static_cast<Eigen::Index>(a)) = model.betas(active[a]) * model.labels[active[a]];
    }
    const Matrix Kx = cross_matrix(sv, X, model.kernel);
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
        double s = 0.0;
        for (Eigen::Index a = 0; a < coef.size(); ++a) s += coef(a) * Kx(r, a);
        scores(r) += s;
    }
    return scores;
}

double decision_function(const SvmModel& model, std::span<const double> x) {
    FeatureMatrix row(1, static_cast<Eigen::Index>(x.size()));
    for (std::size_t k = 0; k < x.size(); ++k) row(0, static_cast<Eigen::Index>(k)) = x[k];
    return decision_values(model, row)(0);
}

double accuracy(const SvmModel& model, const FeatureMatrix& X, std::span<const int> y) {
    if (X.rows() == 0) throw ArgumentError("accuracy of an empty evaluation set");
    if (static_cast<std::size_t>(X.rows()) != y.size()) {
        throw ArgumentError(fmt::format("{} points but {} labels", X.rows(), y.size()));
    }
    const Vector s = decision_values(model, X);
    long hits = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) hits += predict_label(s(i)) == y[i];
    return static_cast<double>(hits) / static_cast<double>(s.size());
}

}  // namespace qsvm
