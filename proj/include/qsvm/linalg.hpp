#pragma once

#include <span>

#include <Eigen/Dense>

namespace qsvm {

/// m x d sample matrix; one sample per row.
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline std::span<const double> row_span(const FeatureMatrix& X, Eigen::Index i) {
    return {X.data() + i * X.cols(), static_cast<std::size_t>(X.cols())};
}

}  // namespace qsvm
