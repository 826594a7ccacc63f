#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qsvm/config.hpp"
#include "qsvm/pipeline.hpp"
#include "qsvm/svm.hpp"

namespace qsvm {

/// One (dataset, model) cell of the benchmark table.
struct BenchRow {
    std::string dataset;
    std::string model;
    std::string params;            // selected hyper-parameters, "k=v;..."
    std::optional<double> alpha;   // quantum rows only
    double test_accuracy = 0.0;
    double train_accuracy = 0.0;
    double runtime_s = 0.0;
    std::uint64_t seed = 0;
    std::string error;             // non-empty when the cell failed

    // Not written to the CSV.
    std::optional<SvmModel> final_model;
    TrainReport report;

    bool ok() const noexcept { return error.empty(); }
};

struct BenchResult {
    std::vector<BenchRow> rows;  // dataset-major, in suite order

    const BenchRow* find(const std::string& dataset, const std::string& model) const;
};

struct CheckResult {
    std::string name;
    std::string expression;
    bool passed = false;
    std::string detail;
};

struct Selection {
    KernelSpec kernel;
    RegularizationParams reg;
    double val_accuracy = 0.0;
};

/// Grid search on a validation fold carved out of `train`; ties keep the
/// first grid point (alpha/h outermost, then C, then lambda2).
Selection tune_model(const BenchModel& model, const Dataset& train, double val_frac, std::uint64_t val_seed,
                     const SolverOptions& solver);

BenchRow run_cell(const BenchModel& model, const PreparedData& data, const BenchSuite& suite);

BenchResult run_bench(const BenchSuite& suite);

/// Header dataset,model,params,alpha,test_accuracy,train_accuracy,runtime_s,seed.
/// runtime_s is written only when `timing` is set ("NA" otherwise) so that
/// reruns produce identical bytes.
void write_bench_csv(const BenchResult& result, const std::filesystem::path& path, bool timing);

/// Evaluates one trend expression against the result table. Grammar:
///   ref OP ref            ref := dataset:model | number
///   |ref - ref| OP ref    OP  := >= | <= | > | <
/// A dataset:model reference stands for that cell's test accuracy.
CheckResult evaluate_check(const std::string& name, const std::string& expression, const BenchResult& result);

std::vector<CheckResult> run_checks(const BenchSuite& suite, const BenchResult& result);

/// Train/test accuracy gap with and without the l2 penalty for one feature map.
struct RegularizationStudy {
    double C = 1.0;
    double lambda2 = 0.0;          // tuned non-zero value
    double train_acc_plain = 0.0;  // lambda2 = 0
    double test_acc_plain = 0.0;
    double train_acc_reg = 0.0;
    double test_acc_reg = 0.0;

    double gap_plain() const noexcept { return train_acc_plain - test_acc_plain; }
    double gap_reg() const noexcept { return train_acc_reg - test_acc_reg; }
};

/// C is tuned on the validation fold with lambda2 = 0, then lambda2 is tuned
/// over the non-zero entries of `lambda2s` at that C.
RegularizationStudy regularization_study(const PreparedData& data, const FeatureMapSpec& fm,
                                         const std::vector<double>& Cs, const std::vector<double>& lambda2s,
                                         double val_frac, std::uint64_t val_seed, const SolverOptions& solver);

}  // namespace qsvm
