#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "qsvm/errors.hpp"
#include "qsvm/svm.hpp"
#include "qsvm/version.hpp"

namespace qsvm {

using nlohmann::json;

namespace {

json kernel_to_json(const KernelSpec& k) {
    if (k.is_quantum()) {
        const auto& fm = k.feature_map();
        return {{"kind", "quantum"},
                {"paulis", fm.paulis},
                {"alpha", fm.alpha},
                {"depth", fm.depth},
                {"data_map", std::string(to_string(fm.data_map))}};
    }
    return {{"kind", "rbf"}, {"h", k.rbf_params().h}, {"squared", k.rbf_params().squared}};
}

KernelSpec kernel_from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "quantum") {
        FeatureMapSpec fm;
        fm.paulis = j.at("paulis").get<std::vector<std::string>>();
        fm.alpha = j.at("alpha").get<double>();
        fm.depth = j.at("depth").get<int>();
        fm.data_map = data_map_from_string(j.at("data_map").get<std::string>());
        return KernelSpec::quantum(std::move(fm));
    }
    if (kind == "rbf") return KernelSpec::rbf(j.at("h").get<double>(), j.value("squared", false));
    throw ConfigError(fmt::format("unknown kernel kind '{}'", kind));
}

}  // namespace

void save_model(const SvmModel& model, const std::filesystem::path& path) {
    json points = json::array();
    for (Eigen::Index i = 0; i < model.points.rows(); ++i) {
        const auto row = row_span(model.points, i);
        points.push_back(std::vector<double>(row.begin(), row.end()));
    }
    json doc{{"format_version", kFormatVersion},
             {"kernel", kernel_to_json(model.kernel)},
             {"reg", {{"C", model.reg.C}, {"lambda1", model.reg.lambda1}, {"lambda2", model.reg.lambda2}}},
             {"points", std::move(points)},
             {"labels", model.labels},
             {"betas", std::vector<double>(model.betas.begin(), model.betas.end())},
             {"bias", model.bias}};
    std::ofstream out(path);
    if (!out) throw DataError(fmt::format("cannot write model to {}", path.string()));
    out << doc.dump(1) << '\n';
}

SvmModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError(fmt::format("cannot open model file {}", path.string()));
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(fmt::format("{}: not a model document ({})", path.string(), e.what()));
    }
    try {
        check_format_version(doc.value("format_version", std::string{}), path.string());
        SvmModel m;
        m.kernel = kernel_from_json(doc.at("kernel"));
        const auto& reg = doc.at("reg");
        m.reg = {reg.at("C").get<double>(), reg.at("lambda1").get<double>(), reg.at("lambda2").get<double>()};
        const auto rows = doc.at("points").get<std::vector<std::vector<double>>>();
        m.labels = doc.at("labels").get<std::vector<int>>();
        const auto betas = doc.at("betas").get<std::vector<double>>();
        m.bias = doc.at("bias").get<double>();
        if (rows.empty() || rows.size() != m.labels.size() || rows.size() != betas.size()) {
            throw DataError(fmt::format("{}: inconsistent point/label/beta counts", path.string()));
        }
        const auto d = rows.front().size();
        m.points.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != d) throw DataError(fmt::format("{}: ragged point rows", path.string()));
            for (std::size_t k = 0; k < d; ++k) {
                m.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
            }
        }
        m.betas = Eigen::Map<const Vector>(betas.data(), static_cast<Eigen::Index>(betas.size()));
        m.kernel.validate();
        m.reg.validate();
        return m;
    } catch (const json::exception& e) {
        throw DataError(fmt::format("{}: malformed model document ({})", path.string(), e.what()));
    }
}

}  // namespace qsvm
