#include "qsvm/bench.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "qsvm/errors.hpp"
#include "qsvm/version.hpp"

namespace qsvm {

const BenchRow* BenchResult::find(const std::string& dataset, const std::string& model) const {
    for (const auto& r : rows) {
        if (r.dataset == dataset && r.model == model) return &r;
    }
    return nullptr;
}

namespace {

double accuracy_from_scores(const Vector& scores, std::span<const int> y) {
    long hits = 0;
    for (Eigen::Index i = 0; i < scores.size(); ++i) hits += predict_label(scores(i)) == y[i];
    return static_cast<double>(hits) / static_cast<double>(scores.size());
}

std::vector<KernelSpec> kernel_grid(const BenchModel& model) {
    std::vector<KernelSpec> out;
    if (model.quantum) {
        for (double a : model.alphas) {
            FeatureMapSpec fm = model.feature_map;
            fm.alpha = a;
            out.push_back(KernelSpec::quantum(std::move(fm)));
        }
    } else {
        for (double h : model.widths) out.push_back(KernelSpec::rbf(h, model.squared));
    }
    return out;
}

std::string describe(const KernelSpec& k, const RegularizationParams& reg) {
    std::string head;
    if (k.is_quantum()) {
        head = fmt::format("paulis={};depth={};data_map={}", k.feature_map().label(), k.feature_map().depth,
                           to_string(k.feature_map().data_map));
    } else {
        head = fmt::format("h={}{}", k.rbf_params().h, k.rbf_params().squared ? ";squared" : "");
    }
    return fmt::format("{};C={};lambda1={};lambda2={}", head, reg.C, reg.lambda1, reg.lambda2);
}

}  // namespace

Selection tune_model(const BenchModel& model, const Dataset& train, double val_frac, std::uint64_t val_seed,
                     const SolverOptions& solver) {
    const auto fold = train_test_split(train, val_frac, val_seed);
    const Dataset fit = train.subset(fold.train);
    const Dataset val = train.subset(fold.test);

    std::optional<Selection> best;
    for (const auto& kernel : kernel_grid(model)) {
        const Matrix K = gram_matrix(fit.X, kernel);
        const Matrix Kv = cross_matrix(fit.X, val.X, kernel);
        for (double C : model.Cs) {
            for (double l2 : model.lambda2s) {
                const RegularizationParams reg{C, model.lambda1, l2};
                const auto sol = solve_dual(K, fit.y, reg, solver);
                const double b = compute_bias(sol.betas, K, fit.y, reg);
                Vector coef(sol.betas.size());
                for (Eigen::Index i = 0; i < coef.size(); ++i) coef(i) = sol.betas(i) * fit.y[i];
                const Vector scores = (Kv * coef).array() + b;
                const double acc = accuracy_from_scores(scores, val.y);
                if (!best || acc > best->val_accuracy) best = Selection{kernel, reg, acc};
            }
        }
    }
    return *best;
}

BenchRow run_cell(const BenchModel& model, const PreparedData& data, const BenchSuite& suite) {
    BenchRow row;
    row.dataset = data.full.name;
    row.model = model.name;
    row.seed = suite.split.seed;
    const auto start = std::chrono::steady_clock::now();
    try {
        const auto sel = tune_model(model, data.train, suite.val_frac, suite.val_seed, suite.solver);
        auto trained = train_svm(data.train.X, data.train.y, sel.kernel, sel.reg, suite.solver);
        row.params = describe(sel.kernel, sel.reg);
        if (sel.kernel.is_quantum()) row.alpha = sel.kernel.feature_map().alpha;
        row.train_accuracy = accuracy(trained.model, data.train.X, data.train.y);
        row.test_accuracy = accuracy(trained.model, data.test.X, data.test.y);
        row.report = trained.report;
        row.final_model = std::move(trained.model);
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

BenchResult run_bench(const BenchSuite& suite) {
    BenchResult result;
    for (const auto& src : suite.datasets) {
        std::optional<PreparedData> data;
        std::string failure;
        try {
            data = prepare_data(src, suite.split);
        } catch (const std::exception& e) {
            failure = e.what();
        }
        for (const auto& model : suite.models) {
            if (data) {
                result.rows.push_back(run_cell(model, *data, suite));
            } else {
                BenchRow row;
                row.dataset = src.name;
                row.model = model.name;
                row.seed = suite.split.seed;
                row.error = failure;
                result.rows.push_back(std::move(row));
            }
        }
    }
    return result;
}

void write_bench_csv(const BenchResult& result, const std::filesystem::path& path, bool timing) {
    std::ofstream out(path);
    if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
    out << "dataset,model,params,alpha,test_accuracy,train_accuracy,runtime_s,seed\n";
    for (const auto& r : result.rows) {
        std::string params = r.ok() ? r.params : "error: " + r.error;
        for (auto& c : params) {
            if (c == ',' || c == '\n' || c == '"') c = ' ';
        }
        out << r.dataset << ',' << r.model << ',' << params << ','
            << (r.alpha ? fmt::format("{}", *r.alpha) : std::string("NA")) << ','
            << (r.ok() ? fmt::format("{}", r.test_accuracy) : std::string("NA")) << ','
            << (r.ok() ? fmt::format("{}", r.train_accuracy) : std::string("NA")) << ','
            << (timing ? fmt::format("{:.3f}", r.runtime_s) : std::string("NA")) << ',' << r.seed << '\n';
    }
    nlohmann::json meta{{"format_version", kFormatVersion}, {"kind", "bench"}, {"rows", result.rows.size()}};
    std::ofstream(path.string() + ".meta.json") << meta.dump(2) << '\n';
}

namespace {

struct Operand {
    std::string text;
    double value = 0.0;
};

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

Operand resolve(const std::string& raw, const BenchResult& result) {
    const auto t = trim(raw);
    if (t.empty()) throw ConfigError("empty operand in trend check");
    const auto colon = t.find(':');
    if (colon == std::string::npos) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(t, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != t.size()) throw ConfigError(fmt::format("trend check operand '{}' is neither a number nor dataset:model", t));
        return {t, v};
    }
    const auto* row = result.find(t.substr(0, colon), t.substr(colon + 1));
    if (!row) throw DataError(fmt::format("no benchmark cell {}", t));
    if (!row->ok()) throw DataError(fmt::format("benchmark cell {} failed: {}", t, row->error));
    return {t, row->test_accuracy};
}

}  // namespace

CheckResult evaluate_check(const std::string& name, const std::string& expression, const BenchResult& result) {
    CheckResult out{name, expression, false, {}};
    try {
        static const char* kOps[] = {">=", "<=", ">", "<"};
        std::string op;
        std::size_t pos = std::string::npos;
        for (const char* candidate : kOps) {
            pos = expression.find(candidate);
            if (pos != std::string::npos) {
                op = candidate;
                break;
            }
        }
        if (op.empty()) throw ConfigError(fmt::format("trend check '{}' has no comparison", expression));
        const auto lhs_text = trim(expression.substr(0, pos));
        const auto rhs = resolve(expression.substr(pos + op.size()), result);

        double lhs = 0.0;
        std::string lhs_desc;
        if (lhs_text.size() >= 2 && lhs_text.front() == '|' && lhs_text.back() == '|') {
            const auto inner = lhs_text.substr(1, lhs_text.size() - 2);
            const auto minus = inner.find(" - ");
            if (minus == std::string::npos) throw ConfigError(fmt::format("cannot parse '{}'", lhs_text));
            const auto a = resolve(inner.substr(0, minus), result);
            const auto b = resolve(inner.substr(minus + 3), result);
            lhs = std::abs(a.value - b.value);
            lhs_desc = fmt::format("|{} - {}| = |{} - {}| = {}", a.text, b.text, a.value, b.value, lhs);
        } else {
            const auto a = resolve(lhs_text, result);
            lhs = a.value;
            lhs_desc = fmt::format("{} = {}", a.text, a.value);
        }
        if (op == ">=") out.passed = lhs >= rhs.value;
        else if (op == "<=") out.passed = lhs <= rhs.value;
        else if (op == ">") out.passed = lhs > rhs.value;
        else out.passed = lhs < rhs.value;
        out.detail = fmt::format("{} {} {} ({})", lhs_desc, op, rhs.text, rhs.value);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        out.passed = false;
        out.detail = e.what();
    }
    return out;
}

std::vector<CheckResult> run_checks(const BenchSuite& suite, const BenchResult& result) {
    std::vector<CheckResult> out;
    for (std::size_t i = 0; i < suite.checks.size(); ++i) {
        out.push_back(evaluate_check(suite.check_names[i], suite.checks[i], result));
    }
    return out;
}

RegularizationStudy regularization_study(const PreparedData& data, const FeatureMapSpec& fm,
                                         const std::vector<double>& Cs, const std::vector<double>& lambda2s,
                                         double val_frac, std::uint64_t val_seed, const SolverOptions& solver) {
    BenchModel plain;
    plain.name = "plain";
    plain.quantum = true;
    plain.feature_map = fm;
    plain.alphas = {fm.alpha};
    plain.Cs = Cs;
    plain.lambda2s = {0.0};
    const auto sel_plain = tune_model(plain, data.train, val_frac, val_seed, solver);

    BenchModel reg = plain;
    reg.Cs = {sel_plain.reg.C};
    reg.lambda2s.clear();
    for (double l2 : lambda2s) {
        if (l2 > 0.0) reg.lambda2s.push_back(l2);
    }
    if (reg.lambda2s.empty()) throw ConfigError("regularization study needs a non-zero lambda2 candidate");
    const auto sel_reg = tune_model(reg, data.train, val_frac, val_seed, solver);

    const KernelSpec kernel = KernelSpec::quantum(fm);
    RegularizationStudy out;
    out.C = sel_plain.reg.C;
    out.lambda2 = sel_reg.reg.lambda2;
    auto fit = [&](const RegularizationParams& r, double& train_acc, double& test_acc) {
        const auto t = train_svm(data.train.X, data.train.y, kernel, r, solver);
        train_acc = accuracy(t.model, data.train.X, data.train.y);
        test_acc = accuracy(t.model, data.test.X, data.test.y);
    };
    fit(sel_plain.reg, out.train_acc_plain, out.test_acc_plain);
    fit(sel_reg.reg, out.train_acc_reg, out.test_acc_reg);
    return out;
}

}  // namespace qsvm
