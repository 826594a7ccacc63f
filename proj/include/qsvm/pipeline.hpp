#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "qsvm/datasets.hpp"

namespace qsvm {

enum class PcaMode { Auto, On, Off };

/// Where a dataset comes from and how it is preprocessed.
struct DatasetSource {
    enum class Kind { Xor, Adhoc, Csv };

    std::string name;
    Kind kind = Kind::Xor;
    std::uint64_t seed = 0;
    XorParams xor_params;
    AdhocParams adhoc_params;
    std::filesystem::path path;
    std::optional<ClassPair> classes;

    bool balance = false;
    bool standardize = true;  // before PCA only
    PcaMode pca = PcaMode::Auto;
    bool scale = true;
};

struct SplitConfig {
    double test_frac = 0.3;
    std::uint64_t seed = 1;
};

struct PreparedData {
    Dataset full;  // after class subsetting, balancing and PCA; unscaled
    SplitIndices split;
    Dataset train;  // scaled with train statistics when scaling is on
    Dataset test;
    std::optional<PcaTransform> pca;
    std::optional<AngleScaler> scaler;
};

/// Generates or loads the raw dataset (before any preprocessing).
Dataset load_source(const DatasetSource& src);

/// load -> balance -> PCA (when d > 2 under Auto) -> split -> scale with
/// train-portion min/max.
PreparedData prepare_data(const DatasetSource& src, const SplitConfig& split);

}  // namespace qsvm
