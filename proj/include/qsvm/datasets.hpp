#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qsvm/feature_map.hpp"
#include "qsvm/linalg.hpp"

namespace qsvm {

/// Binary-labelled sample set. `y` holds +1 / -1.
struct Dataset {
    FeatureMatrix X;
    std::vector<int> y;
    std::string name;
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return y.size(); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(X.cols()); }
    std::size_t count(int label) const noexcept;

    Dataset subset(std::span<const std::size_t> rows) const;
};

// ---------------------------------------------------------------------------
// Generators

struct XorParams {
    std::size_t m = 200;
    double noise_sd = 0.3;
    double q = 1.5707963267948966;  // cluster offset from the centre
};

/// Four Gaussian blobs at (+-q, +-q) labelled by the XOR of the coordinate
/// signs ((q,q) and (-q,-q) are +1), then shifted by pi and clamped into
/// [0, 2pi]^2. Points cycle through the quadrants in the order
/// (q,q), (q,-q), (-q,-q), (-q,q).
Dataset gen_xor(const XorParams& params, std::uint64_t seed);

struct AdhocParams {
    std::size_t m = 200;
    double gap = 0.3;
    std::size_t grid = 100;  // candidate lattice is grid x grid over [0, 2pi)^2
};

/// Points labelled by the sign of <Phi(x)| V^dag (Z x Z) V |Phi(x)>, with Phi the
/// Z+ZZ feature map (alpha 1, depth 2) and V a Haar-random two-qubit unitary
/// drawn from `seed`. Only points with |expectation| >= gap are kept.
Dataset gen_adhoc_complex(const AdhocParams& params, std::uint64_t seed);

/// The labelling observable used by gen_adhoc_complex for `seed`.
double adhoc_expectation(std::span<const double> x, std::uint64_t seed);

/// The feature map the ad-hoc labels are defined through.
FeatureMapSpec adhoc_feature_map();

// ---------------------------------------------------------------------------
// CSV

/// Which original class identifiers become +1 and -1. Rows carrying any other
/// identifier are dropped.
struct ClassPair {
    std::string positive;
    std::string negative;
};

/// Reads `f1,...,fd,label`. Without a class pair the file must hold exactly two
/// class identifiers; the numerically (else lexicographically) larger one
/// becomes +1.
Dataset load_csv(const std::filesystem::path& path, const std::optional<ClassPair>& classes = std::nullopt);

/// Writes the CSV plus, when `metadata` is given, a `<path>.meta.json` sidecar
/// that gets a format_version stamped in.
void save_csv(const Dataset& ds, const std::filesystem::path& path,
              const std::optional<nlohmann::json>& metadata = std::nullopt);

// ---------------------------------------------------------------------------
// Preprocessing

struct PcaTransform {
    Vector mean;
    Eigen::Matrix<double, 2, Eigen::Dynamic> components;  // orthonormal rows
    Eigen::Vector2d explained_variance;                   // descending
};

/// Top-2 principal axes of the sample covariance (n - 1 normalization). Each
/// component is signed so that its largest-magnitude entry is positive.
PcaTransform fit_pca_2d(const FeatureMatrix& X);

FeatureMatrix apply_pca(const PcaTransform& t, const FeatureMatrix& X);

/// Per-feature affine map [min, max] -> [0, 2pi] fitted on training data.
/// Values outside the fitted range extrapolate (no clamping).
struct AngleScaler {
    Vector min;
    Vector max;

    FeatureMatrix apply(const FeatureMatrix& X) const;
};

struct ScaledData {
    FeatureMatrix X;
    AngleScaler scaler;
};

ScaledData scale_to_angle_range(const FeatureMatrix& X);

/// Column-wise zero mean / unit variance.
FeatureMatrix standardize(const FeatureMatrix& X);

struct SplitIndices {
    std::vector<std::size_t> train;  // ascending
    std::vector<std::size_t> test;   // ascending
};

/// Stratified hold-out split; per-class test counts are floor(frac * n_c) with
/// the remainder of round(frac * m) handed to the classes with the largest
/// fractional parts.
SplitIndices train_test_split(const Dataset& ds, double test_frac, std::uint64_t seed);

/// Keeps an equal number of points per class (the minority count), choosing
/// the majority-class survivors by seeded shuffle; row order is preserved.
Dataset balance_classes(const Dataset& ds, std::uint64_t seed);

}  // namespace qsvm
