#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "qsvm/kernels.hpp"
#include "qsvm/pipeline.hpp"
#include "qsvm/svm.hpp"

namespace qsvm {

/// Everything needed to reproduce a `train` run.
struct RunConfig {
    DatasetSource dataset;
    KernelSpec kernel = KernelSpec::rbf(1.0);
    RegularizationParams reg;
    SolverOptions solver;
    SplitConfig split;
    std::filesystem::path model_path = "model.json";
    std::filesystem::path config_path;  // defaults to <model>.run.ini
    std::filesystem::path split_path;   // defaults to <model>.split.json
};

/// One model row of the benchmark: a kernel family plus its tuning grid.
struct BenchModel {
    std::string name;
    bool quantum = true;
    FeatureMapSpec feature_map;  // alpha is taken from `alphas`
    std::vector<double> alphas{1.0};
    std::vector<double> widths{1.0};  // RBF h
    bool squared = false;
    std::vector<double> Cs{1.0};
    std::vector<double> lambda2s{0.0};
    double lambda1 = 0.0;
};

struct BenchSuite {
    std::vector<DatasetSource> datasets;
    std::vector<BenchModel> models;
    SplitConfig split;
    double val_frac = 0.3;
    std::uint64_t val_seed = 2;
    SolverOptions solver;
    std::vector<std::string> checks;  // trend-check expressions, in file order
    std::vector<std::string> check_names;
};

using Ini = boost::property_tree::ptree;

Ini read_ini(const std::filesystem::path& path);

/// Parses a [dataset] style section. Relative CSV paths resolve against `base_dir`.
DatasetSource parse_dataset_section(const Ini& section, const std::string& name,
                                    const std::filesystem::path& base_dir);
KernelSpec parse_kernel_section(const Ini& section);
RegularizationParams parse_reg_section(const Ini& section);

RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const RunConfig& cfg, const std::filesystem::path& path);

BenchSuite load_bench_suite(const std::filesystem::path& path);

std::vector<double> parse_number_list(const std::string& text, const std::string& what);

}  // namespace qsvm
