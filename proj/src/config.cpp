#include "qsvm/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <fmt/format.h>

#include "qsvm/errors.hpp"
#include "qsvm/version.hpp"

namespace qsvm {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double to_double(const std::string& text, const std::string& what) {
    const auto t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ConfigError(fmt::format("{}: '{}' is not a number", what, text));
    }
    return v;
}

template <typename Int>
Int to_int(const std::string& text, const std::string& what) {
    const auto t = trim(text);
    Int v{};
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ConfigError(fmt::format("{}: '{}' is not an integer", what, text));
    }
    return v;
}

bool to_bool(const std::string& text, const std::string& what) {
    const auto t = trim(text);
    if (t == "true" || t == "yes" || t == "1" || t == "on") return true;
    if (t == "false" || t == "no" || t == "0" || t == "off") return false;
    throw ConfigError(fmt::format("{}: '{}' is not a boolean", what, text));
}

std::optional<std::string> get(const Ini& s, const std::string& key) {
    const auto it = s.find(key);
    if (it == s.not_found()) return std::nullopt;
    return trim(it->second.data());
}

std::string require(const Ini& s, const std::string& key, const std::string& section) {
    auto v = get(s, key);
    if (!v) throw ConfigError(fmt::format("[{}] is missing '{}'", section, key));
    return *v;
}

const Ini& child(const Ini& root, const std::string& name) {
    const auto it = root.find(name);
    if (it == root.not_found()) throw ConfigError(fmt::format("missing section [{}]", name));
    return it->second;
}

std::string fmt_num(double v) { return fmt::format("{}", v); }

}  // namespace

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(item, what));
    if (out.empty()) throw ConfigError(fmt::format("{}: empty list", what));
    return out;
}

Ini read_ini(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config {}", path.string()));
    // Strip '#' comment lines; the INI reader only knows ';'.
    std::stringstream cleaned;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (!t.empty() && t[0] == '#') continue;
        cleaned << line << '\n';
    }
    Ini root;
    try {
        pt::ini_parser::read_ini(cleaned, root);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(fmt::format("{}: {}", path.string(), e.message()));
    }
    check_format_version(get(root, "format_version").value_or(""), path.string());
    return root;
}

DatasetSource parse_dataset_section(const Ini& s, const std::string& name,
                                    const std::filesystem::path& base_dir) {
    const std::string where = fmt::format("dataset {}", name);
    DatasetSource src;
    src.name = name;
    if (auto v = get(s, "seed")) src.seed = to_int<std::uint64_t>(*v, where + " seed");
    if (auto gen = get(s, "generator")) {
        if (*gen == "xor") {
            src.kind = DatasetSource::Kind::Xor;
            if (auto v = get(s, "m")) src.xor_params.m = to_int<std::size_t>(*v, where + " m");
            if (auto v = get(s, "noise_sd")) src.xor_params.noise_sd = to_double(*v, where + " noise_sd");
        } else if (*gen == "adhoc") {
            src.kind = DatasetSource::Kind::Adhoc;
            if (auto v = get(s, "m")) src.adhoc_params.m = to_int<std::size_t>(*v, where + " m");
            if (auto v = get(s, "gap")) src.adhoc_params.gap = to_double(*v, where + " gap");
            if (auto v = get(s, "grid")) src.adhoc_params.grid = to_int<std::size_t>(*v, where + " grid");
        } else {
            throw ConfigError(fmt::format("{}: unknown generator '{}'", where, *gen));
        }
        // Generated data already lives in [0, 2pi].
        src.scale = false;
    } else if (auto path = get(s, "path")) {
        src.kind = DatasetSource::Kind::Csv;
        src.path = std::filesystem::path(*path).is_absolute() ? std::filesystem::path(*path) : base_dir / *path;
        auto pos = get(s, "positive_class");
        auto neg = get(s, "negative_class");
        if (pos.has_value() != neg.has_value()) {
            throw ConfigError(fmt::format("{}: give both positive_class and negative_class or neither", where));
        }
        if (pos) src.classes = ClassPair{*pos, *neg};
    } else {
        throw ConfigError(fmt::format("{}: needs either 'generator' or 'path'", where));
    }
    if (auto v = get(s, "balance")) src.balance = to_bool(*v, where + " balance");
    if (auto v = get(s, "standardize")) src.standardize = to_bool(*v, where + " standardize");
    if (auto v = get(s, "scale")) src.scale = to_bool(*v, where + " scale");
    if (auto v = get(s, "pca")) {
        if (*v == "auto") src.pca = PcaMode::Auto;
        else if (*v == "on" || *v == "true") src.pca = PcaMode::On;
        else if (*v == "off" || *v == "false") src.pca = PcaMode::Off;
        else throw ConfigError(fmt::format("{}: pca must be auto, on or off", where));
    }
    return src;
}

KernelSpec parse_kernel_section(const Ini& s) {
    const auto kind = require(s, "kind", "kernel");
    if (kind == "rbf") {
        auto k = KernelSpec::rbf(to_double(require(s, "h", "kernel"), "kernel h"),
                                 get(s, "squared") ? to_bool(*get(s, "squared"), "kernel squared") : false);
        k.validate();
        return k;
    }
    if (kind == "quantum") {
        FeatureMapSpec fm;
        if (auto v = get(s, "paulis")) fm.paulis = parse_pauli_list(*v);
        if (auto v = get(s, "alpha")) fm.alpha = to_double(*v, "kernel alpha");
        if (auto v = get(s, "depth")) fm.depth = to_int<int>(*v, "kernel depth");
        if (auto v = get(s, "data_map")) fm.data_map = data_map_from_string(*v);
        fm.validate();
        return KernelSpec::quantum(std::move(fm));
    }
    throw ConfigError(fmt::format("unknown kernel kind '{}' (expected quantum or rbf)", kind));
}

RegularizationParams parse_reg_section(const Ini& s) {
    RegularizationParams reg;
    if (auto v = get(s, "C")) reg.C = to_double(*v, "reg C");
    if (auto v = get(s, "lambda1")) reg.lambda1 = to_double(*v, "reg lambda1");
    if (auto v = get(s, "lambda2")) reg.lambda2 = to_double(*v, "reg lambda2");
    reg.validate();
    return reg;
}

namespace {

void parse_solver(const Ini& root, SolverOptions& opts) {
    const auto it = root.find("solver");
    if (it == root.not_found()) return;
    if (auto v = get(it->second, "tol")) opts.tol = to_double(*v, "solver tol");
    if (auto v = get(it->second, "max_iter")) opts.max_iter = to_int<long>(*v, "solver max_iter");
    if (!(opts.tol > 0.0)) throw ConfigError("solver tol must be positive");
    if (opts.max_iter < 1) throw ConfigError("solver max_iter must be positive");
}

void parse_split(const Ini& s, SplitConfig& split) {
    if (auto v = get(s, "test_frac")) split.test_frac = to_double(*v, "split test_frac");
    if (auto v = get(s, "seed")) split.seed = to_int<std::uint64_t>(*v, "split seed");
    if (!(split.test_frac > 0.0 && split.test_frac < 1.0)) {
        throw ConfigError(fmt::format("split test_frac must lie in (0, 1), got {}", split.test_frac));
    }
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
    const Ini root = read_ini(path);
    const auto base = path.parent_path();
    RunConfig cfg;
    const auto& ds = child(root, "dataset");
    cfg.dataset = parse_dataset_section(ds, get(ds, "name").value_or("dataset"), base);
    cfg.kernel = parse_kernel_section(child(root, "kernel"));
    if (root.find("reg") != root.not_found()) cfg.reg = parse_reg_section(child(root, "reg"));
    parse_solver(root, cfg.solver);
    if (root.find("split") != root.not_found()) parse_split(child(root, "split"), cfg.split);
    if (root.find("output") != root.not_found()) {
        const auto& out = child(root, "output");
        // Outputs are relative to the working directory, inputs to the config.
        if (auto v = get(out, "model")) cfg.model_path = *v;
        if (auto v = get(out, "config")) cfg.config_path = *v;
        if (auto v = get(out, "split")) cfg.split_path = *v;
    }
    return cfg;
}

void save_run_config(const RunConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
    const auto& d = cfg.dataset;
    out << "format_version = " << kFormatVersion << "\n\n[dataset]\n";
    out << "name = " << d.name << '\n';
    switch (d.kind) {
        case DatasetSource::Kind::Xor:
            out << "generator = xor\nm = " << d.xor_params.m << "\nnoise_sd = " << fmt_num(d.xor_params.noise_sd)
                << '\n';
            break;
        case DatasetSource::Kind::Adhoc:
            out << "generator = adhoc\nm = " << d.adhoc_params.m << "\ngap = " << fmt_num(d.adhoc_params.gap)
                << "\ngrid = " << d.adhoc_params.grid << '\n';
            break;
        case DatasetSource::Kind::Csv:
            out << "path = " << std::filesystem::absolute(d.path).lexically_normal().string() << '\n';
            if (d.classes) {
                out << "positive_class = " << d.classes->positive << "\nnegative_class = " << d.classes->negative
                    << '\n';
            }
            break;
    }
    out << "seed = " << d.seed << '\n';
    out << "balance = " << (d.balance ? "true" : "false") << '\n';
    out << "standardize = " << (d.standardize ? "true" : "false") << '\n';
    out << "pca = " << (d.pca == PcaMode::Auto ? "auto" : d.pca == PcaMode::On ? "on" : "off") << '\n';
    out << "scale = " << (d.scale ? "true" : "false") << "\n\n[kernel]\n";
    if (cfg.kernel.is_quantum()) {
        const auto& fm = cfg.kernel.feature_map();
        std::string paulis;
        for (const auto& p : fm.paulis) paulis += (paulis.empty() ? "" : ",") + p;
        out << "kind = quantum\npaulis = " << paulis << "\nalpha = " << fmt_num(fm.alpha)
            << "\ndepth = " << fm.depth << "\ndata_map = " << to_string(fm.data_map) << '\n';
    } else {
        out << "kind = rbf\nh = " << fmt_num(cfg.kernel.rbf_params().h)
            << "\nsquared = " << (cfg.kernel.rbf_params().squared ? "true" : "false") << '\n';
    }
    out << "\n[reg]\nC = " << fmt_num(cfg.reg.C) << "\nlambda1 = " << fmt_num(cfg.reg.lambda1)
        << "\nlambda2 = " << fmt_num(cfg.reg.lambda2) << '\n';
    out << "\n[solver]\ntol = " << fmt_num(cfg.solver.tol) << "\nmax_iter = " << cfg.solver.max_iter << '\n';
    out << "\n[split]\ntest_frac = " << fmt_num(cfg.split.test_frac) << "\nseed = " << cfg.split.seed << '\n';
    out << "\n[output]\nmodel = " << std::filesystem::absolute(cfg.model_path).lexically_normal().string() << '\n';
}

BenchSuite load_bench_suite(const std::filesystem::path& path) {
    const Ini root = read_ini(path);
    const auto base = path.parent_path();
    BenchSuite suite;
    const auto& bench = child(root, "bench");
    parse_split(bench, suite.split);
    if (auto v = get(bench, "val_frac")) suite.val_frac = to_double(*v, "bench val_frac");
    if (auto v = get(bench, "val_seed")) suite.val_seed = to_int<std::uint64_t>(*v, "bench val_seed");
    if (!(suite.val_frac > 0.0 && suite.val_frac < 1.0)) throw ConfigError("bench val_frac must lie in (0, 1)");
    parse_solver(root, suite.solver);

    auto names = [](const std::string& csv) {
        std::vector<std::string> out;
        std::stringstream ss(csv);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) out.push_back(item);
        }
        return out;
    };
    for (const auto& name : names(require(bench, "datasets", "bench"))) {
        suite.datasets.push_back(parse_dataset_section(child(root, "dataset:" + name), name, base));
    }
    for (const auto& name : names(require(bench, "models", "bench"))) {
        const auto& s = child(root, "model:" + name);
        const std::string where = "model " + name;
        BenchModel m;
        m.name = name;
        const auto kind = require(s, "kind", "model:" + name);
        if (kind == "rbf") {
            m.quantum = false;
            m.widths = parse_number_list(require(s, "h", "model:" + name), where + " h");
            if (auto v = get(s, "squared")) m.squared = to_bool(*v, where + " squared");
        } else if (kind == "quantum") {
            m.feature_map.paulis = parse_pauli_list(require(s, "paulis", "model:" + name));
            if (auto v = get(s, "depth")) m.feature_map.depth = to_int<int>(*v, where + " depth");
            if (auto v = get(s, "data_map")) m.feature_map.data_map = data_map_from_string(*v);
            m.alphas = parse_number_list(require(s, "alpha", "model:" + name), where + " alpha");
            m.feature_map.validate();
        } else {
            throw ConfigError(fmt::format("{}: unknown kind '{}'", where, kind));
        }
        if (auto v = get(s, "C")) m.Cs = parse_number_list(*v, where + " C");
        if (auto v = get(s, "lambda2")) m.lambda2s = parse_number_list(*v, where + " lambda2");
        if (auto v = get(s, "lambda1")) m.lambda1 = to_double(*v, where + " lambda1");
        for (double C : m.Cs) {
            for (double l2 : m.lambda2s) RegularizationParams{C, m.lambda1, l2}.validate();
        }
        suite.models.push_back(std::move(m));
    }
    if (const auto it = root.find("checks"); it != root.not_found()) {
        for (const auto& [key, value] : it->second) {
            suite.check_names.push_back(key);
            suite.checks.push_back(trim(value.data()));
        }
    }
    return suite;
}

}  // namespace qsvm
