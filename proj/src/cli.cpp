#include "qsvm/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "qsvm/bench.hpp"
#include "qsvm/config.hpp"
#include "qsvm/errors.hpp"
#include "qsvm/version.hpp"

namespace qsvm {

namespace fs = std::filesystem;

namespace {

struct GenArgs {
    std::string type;
    std::size_t m = 200;
    std::uint64_t seed = 0;
    double noise_sd = 0.3;
    double gap = 0.3;
    std::size_t grid = 100;
    std::string out;
    bool force = false;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
    if (a.type != "xor" && a.type != "adhoc") {
        throw ArgumentError(fmt::format("unknown generator type '{}' (expected xor or adhoc)", a.type));
    }
    if (fs::exists(a.out) && !a.force) {
        throw ArgumentError(fmt::format("{} already exists (use --force to overwrite)", a.out));
    }
    Dataset ds;
    nlohmann::json params;
    if (a.type == "xor") {
        ds = gen_xor({a.m, a.noise_sd}, a.seed);
        params = {{"m", a.m}, {"noise_sd", a.noise_sd}};
    } else {
        ds = gen_adhoc_complex({a.m, a.gap, a.grid}, a.seed);
        params = {{"m", a.m}, {"gap", a.gap}, {"grid", a.grid}};
    }
    const nlohmann::json meta{{"generator", a.type}, {"generator_version", 1}, {"seed", a.seed}, {"params", params}};
    save_csv(ds, a.out, std::optional<nlohmann::json>(std::in_place, meta));
    out << fmt::format("wrote {} points ({} positive, {} negative) to {}\n", ds.size(), ds.count(1), ds.count(-1),
                       a.out);
    return kExitOk;
}

struct TrainArgs {
    std::string config;
    std::string data;
    std::string generator;
    std::size_t m = 200;
    std::uint64_t data_seed = 0;
    double noise_sd = 0.3;
    double gap = 0.3;
    std::string positive_class;
    std::string negative_class;
    bool balance = false;
    bool no_scale = false;
    std::string kernel;
    std::string paulis = "Z,ZZ";
    std::string alpha = "1";
    int depth = 2;
    std::string data_map = "product_shifted";
    std::string h = "1";
    bool squared = false;
    double C = 1.0;
    double l1 = 0.0;
    double l2 = 0.0;
    double tol = 1e-6;
    long max_iter = 100000;
    double test_frac = 0.3;
    std::uint64_t split_seed = 1;
    std::string model;
    bool strict = false;
};

double parse_flag_number(const std::string& text, const std::string& flag) {
    const auto v = parse_number_list(text, flag);
    if (v.size() != 1) throw ConfigError(fmt::format("{} takes one number or 'tuned'", flag));
    return v.front();
}

// Grids used when --h or --alpha is given as "tuned".
const std::vector<double> kTunedWidths{0.1, 0.5, 1.0, 2.0};
const std::vector<double> kTunedAlphas{0.5, 1.0, 2.0};

KernelSpec tune_kernel(const RunConfig& cfg, const Dataset& train) {
    BenchModel m;
    m.quantum = cfg.kernel.is_quantum();
    if (m.quantum) {
        m.feature_map = cfg.kernel.feature_map();
        m.alphas = kTunedAlphas;
    } else {
        m.widths = kTunedWidths;
        m.squared = cfg.kernel.rbf_params().squared;
    }
    m.Cs = {cfg.reg.C};
    m.lambda1 = cfg.reg.lambda1;
    m.lambda2s = {cfg.reg.lambda2};
    return tune_model(m, train, 0.3, cfg.split.seed + 1, cfg.solver).kernel;
}

RunConfig config_from_flags(const TrainArgs& a, const CLI::App& app) {
    RunConfig cfg;
    if (!a.config.empty()) {
        cfg = load_run_config(a.config);
        if (app.count("--model")) cfg.model_path = a.model;
        return cfg;
    }
    auto& d = cfg.dataset;
    if (!a.data.empty()) {
        d.kind = DatasetSource::Kind::Csv;
        d.path = a.data;
        d.name = fs::path(a.data).stem().string();
        if (!a.positive_class.empty() || !a.negative_class.empty()) {
            if (a.positive_class.empty() || a.negative_class.empty()) {
                throw ConfigError("give both --positive-class and --negative-class");
            }
            d.classes = ClassPair{a.positive_class, a.negative_class};
        }
    } else if (a.generator == "xor") {
        d.kind = DatasetSource::Kind::Xor;
        d.name = "xor";
        d.xor_params = {a.m, a.noise_sd};
        d.scale = false;
    } else if (a.generator == "adhoc") {
        d.kind = DatasetSource::Kind::Adhoc;
        d.name = "adhoc";
        d.adhoc_params = {a.m, a.gap, 100};
        d.scale = false;
    } else {
        throw ConfigError("train needs --config, --data or --generator xor|adhoc");
    }
    d.seed = a.data_seed;
    d.balance = a.balance;
    if (a.no_scale) d.scale = false;

    if (a.kernel == "rbf") {
        cfg.kernel = KernelSpec::rbf(a.h == "tuned" ? 1.0 : parse_flag_number(a.h, "--h"), a.squared);
    } else if (a.kernel == "quantum") {
        FeatureMapSpec fm;
        fm.paulis = parse_pauli_list(a.paulis);
        fm.alpha = a.alpha == "tuned" ? 1.0 : parse_flag_number(a.alpha, "--alpha");
        fm.depth = a.depth;
        fm.data_map = data_map_from_string(a.data_map);
        cfg.kernel = KernelSpec::quantum(std::move(fm));
    } else {
        throw ConfigError(fmt::format("--kernel must be quantum or rbf, got '{}'", a.kernel));
    }
    cfg.kernel.validate();
    cfg.reg = {a.C, a.l1, a.l2};
    cfg.reg.validate();
    cfg.solver.tol = a.tol;
    cfg.solver.max_iter = a.max_iter;
    cfg.split = {a.test_frac, a.split_seed};
    cfg.model_path = a.model.empty() ? "model.json" : a.model;
    return cfg;
}

int cmd_train(const TrainArgs& a, const CLI::App& app, std::ostream& out) {
    RunConfig cfg = config_from_flags(a, app);
    if (cfg.config_path.empty()) cfg.config_path = cfg.model_path.string() + ".run.ini";
    if (cfg.split_path.empty()) cfg.split_path = cfg.model_path.string() + ".split.json";

    const auto data = prepare_data(cfg.dataset, cfg.split);
    if (a.config.empty() && ((a.kernel == "rbf" && a.h == "tuned") || (a.kernel == "quantum" && a.alpha == "tuned"))) {
        cfg.kernel = tune_kernel(cfg, data.train);
    }
    const auto trained = train_svm(data.train.X, data.train.y, cfg.kernel, cfg.reg, cfg.solver);
    const double train_acc = accuracy(trained.model, data.train.X, data.train.y);
    const double test_acc = accuracy(trained.model, data.test.X, data.test.y);

    save_model(trained.model, cfg.model_path);
    save_run_config(cfg, cfg.config_path);
    const nlohmann::json split{{"format_version", kFormatVersion},
                               {"test_frac", cfg.split.test_frac},
                               {"seed", cfg.split.seed},
                               {"train", data.split.train},
                               {"test", data.split.test}};
    std::ofstream(cfg.split_path) << split.dump(1) << '\n';

    const auto& r = trained.report;
    const std::string kparams = cfg.kernel.is_quantum()
                                    ? fmt::format("alpha={} depth={}", cfg.kernel.feature_map().alpha,
                                                  cfg.kernel.feature_map().depth)
                                    : fmt::format("h={}", cfg.kernel.rbf_params().h);
    out << fmt::format("kernel={} {} C={} lambda1={} lambda2={}\n", cfg.kernel.label(), kparams, cfg.reg.C,
                       cfg.reg.lambda1, cfg.reg.lambda2);
    out << fmt::format("iterations={} objective={} kkt_violation={} converged={}\n", r.iterations,
                       r.final_objective, r.kkt_violation, r.converged ? "true" : "false");
    out << fmt::format("support_vectors={} bias={}\n", trained.model.support_indices().size(), trained.model.bias);
    out << fmt::format("train_accuracy={}\ntest_accuracy={}\n", train_acc, test_acc);
    out << fmt::format("model={}\nconfig={}\nsplit={}\n", cfg.model_path.string(), cfg.config_path.string(),
                       cfg.split_path.string());
    if (!r.converged) {
        out << "warning: solver stopped at max_iter before reaching tolerance\n";
        if (a.strict) throw TrainingError("solver did not converge (--strict)");
    }
    return kExitOk;
}

struct GridArgs {
    std::string model;
    std::size_t resolution = 100;
    std::vector<double> bounds;
    std::string out;
};

int cmd_grid(const GridArgs& a, std::ostream& out) {
    if (a.resolution < 2) throw ArgumentError("--resolution must be at least 2");
    const SvmModel model = load_model(a.model);
    if (model.n_features() != 2) {
        throw ArgumentError(fmt::format("decision grids need a 2-feature model, this one has {}", model.n_features()));
    }
    double lo[2], hi[2];
    if (!a.bounds.empty()) {
        if (a.bounds.size() != 4) throw ArgumentError("--bounds takes x1min,x1max,x2min,x2max");
        lo[0] = a.bounds[0]; hi[0] = a.bounds[1];
        lo[1] = a.bounds[2]; hi[1] = a.bounds[3];
        if (!(hi[0] > lo[0] && hi[1] > lo[1])) throw ArgumentError("--bounds must have max > min");
    } else {
        for (int c = 0; c < 2; ++c) {
            const double mn = model.points.col(c).minCoeff();
            const double mx = model.points.col(c).maxCoeff();
            const double pad = 0.1 * (mx > mn ? mx - mn : 1.0);
            lo[c] = mn - pad;
            hi[c] = mx + pad;
        }
    }
    const auto n = static_cast<Eigen::Index>(a.resolution);
    FeatureMatrix lattice(n * n, 2);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double t1 = static_cast<double>(i) / static_cast<double>(n - 1);
            const double t2 = static_cast<double>(j) / static_cast<double>(n - 1);
            lattice(j * n + i, 0) = lo[0] + (hi[0] - lo[0]) * t1;
            lattice(j * n + i, 1) = lo[1] + (hi[1] - lo[1]) * t2;
        }
    }
    const Vector scores = decision_values(model, lattice);
    std::ofstream csv(a.out);
    if (!csv) throw DataError(fmt::format("cannot write {}", a.out));
    csv << "x1,x2,score,label\n";
    for (Eigen::Index r = 0; r < lattice.rows(); ++r) {
        csv << fmt::format("{},{},{},{}\n", lattice(r, 0), lattice(r, 1), scores(r), predict_label(scores(r)));
    }
    const nlohmann::json meta{{"format_version", kFormatVersion},
                              {"kind", "grid"},
                              {"model", a.model},
                              {"resolution", a.resolution},
                              {"bounds", {lo[0], hi[0], lo[1], hi[1]}}};
    std::ofstream(a.out + ".meta.json") << meta.dump(2) << '\n';
    out << fmt::format("wrote {}x{} grid over [{}, {}] x [{}, {}] to {}\n", a.resolution, a.resolution, lo[0], hi[0],
                       lo[1], hi[1], a.out);
    return kExitOk;
}

struct BenchArgs {
    std::string suite;
    std::string out;
    bool timing = false;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
    const BenchSuite suite = load_bench_suite(a.suite);
    const BenchResult result = run_bench(suite);
    write_bench_csv(result, a.out, a.timing);

    for (const auto& r : result.rows) {
        if (r.ok()) {
            out << fmt::format("{:<14} {:<6} test={:.3f} train={:.3f} ({:.2f}s) {}{}\n", r.dataset, r.model,
                               r.test_accuracy, r.train_accuracy, r.runtime_s, r.params,
                               r.report.converged ? "" : " [not converged]");
        } else {
            out << fmt::format("{:<14} {:<6} FAILED: {}\n", r.dataset, r.model, r.error);
        }
    }
    const auto checks = run_checks(suite, result);
    bool all = true;
    out << "trend checks:\n";
    for (const auto& c : checks) {
        out << fmt::format("  [{}] {}: {}  -- {}\n", c.passed ? "PASS" : "FAIL", c.name, c.expression, c.detail);
        all = all && c.passed;
    }
    out << fmt::format("wrote {} rows to {}\n", result.rows.size(), a.out);
    return all ? kExitOk : kExitTrend;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum-kernel and RBF support vector machines"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Generate a synthetic dataset CSV");
    g->add_option("--type", gen.type, "xor | adhoc")->required();
    g->add_option("--m", gen.m, "Number of points (even)");
    g->add_option("--seed", gen.seed, "Random seed");
    g->add_option("--noise-sd", gen.noise_sd, "XOR cluster noise");
    g->add_option("--gap", gen.gap, "Ad-hoc label gap");
    g->add_option("--grid", gen.grid, "Ad-hoc candidate grid resolution");
    g->add_option("--out", gen.out, "Output CSV")->required();
    g->add_flag("--force", gen.force, "Overwrite an existing file");

    TrainArgs tr;
    auto* t = app.add_subcommand("train", "Train an SVM on the train split and report accuracies");
    t->add_option("--config", tr.config, "Run config (INI); other dataset/kernel flags are ignored");
    t->add_option("--data", tr.data, "Dataset CSV");
    t->add_option("--generator", tr.generator, "xor | adhoc");
    t->add_option("--m", tr.m, "Generator size");
    t->add_option("--data-seed", tr.data_seed, "Generator / balancing seed");
    t->add_option("--noise-sd", tr.noise_sd, "XOR noise");
    t->add_option("--gap", tr.gap, "Ad-hoc gap");
    t->add_option("--positive-class", tr.positive_class, "CSV class identifier mapped to +1");
    t->add_option("--negative-class", tr.negative_class, "CSV class identifier mapped to -1");
    t->add_flag("--balance", tr.balance, "Downsample the majority class");
    t->add_flag("--no-scale", tr.no_scale, "Skip the [0, 2pi] feature scaling");
    t->add_option("--kernel", tr.kernel, "quantum | rbf");
    t->add_option("--paulis", tr.paulis, "Pauli patterns, e.g. Z,ZZ");
    t->add_option("--alpha", tr.alpha, "Rotation factor, or 'tuned'");
    t->add_option("--depth", tr.depth, "Feature-map repetitions");
    t->add_option("--data-map", tr.data_map, "product_shifted | plain_product");
    t->add_option("--h", tr.h, "RBF width, or 'tuned'");
    t->add_flag("--squared", tr.squared, "Use exp(-d^2 / 2h^2)");
    t->add_option("--C", tr.C, "Box bound");
    t->add_option("--l1", tr.l1, "l1 penalty (< 1)");
    t->add_option("--l2", tr.l2, "l2 penalty");
    t->add_option("--tol", tr.tol, "KKT tolerance");
    t->add_option("--max-iter", tr.max_iter, "Maximum pair updates");
    t->add_option("--test-frac", tr.test_frac, "Hold-out fraction");
    t->add_option("--split-seed", tr.split_seed, "Split seed");
    t->add_option("--model", tr.model, "Output model path");
    t->add_flag("--strict", tr.strict, "Fail when the solver does not converge");

    GridArgs gr;
    auto* gd = app.add_subcommand("grid", "Evaluate a trained 2-feature model on a lattice");
    gd->add_option("--model", gr.model, "Model file")->required();
    gd->add_option("--resolution", gr.resolution, "Points per axis");
    gd->add_option("--bounds", gr.bounds, "x1min,x1max,x2min,x2max")->delimiter(',');
    gd->add_option("--out", gr.out, "Output grid CSV")->required();

    BenchArgs be;
    auto* b = app.add_subcommand("bench", "Run a dataset x model benchmark suite");
    b->add_option("--suite", be.suite, "Suite config (INI)")->required();
    b->add_option("--out", be.out, "Output result CSV")->required();
    b->add_flag("--timing", be.timing, "Record wall-clock runtimes in the CSV");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kExitUsage;
    }

    try {
        if (*g) return cmd_gen(gen, out);
        if (*t) return cmd_train(tr, *t, out);
        if (*gd) return cmd_grid(gr, out);
        if (*b) return cmd_bench(be, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace qsvm
