#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "qsvm/datasets.hpp"
#include "qsvm/errors.hpp"
#include "qsvm/version.hpp"

namespace qsvm {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto& f : out) {
        const auto b = f.find_first_not_of(" \t");
        const auto e = f.find_last_not_of(" \t");
        f = b == std::string::npos ? std::string{} : f.substr(b, e - b + 1);
    }
    return out;
}

std::optional<double> parse_number(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || first == last) return std::nullopt;
    return v;
}

// Larger identifier wins +1; numeric comparison when both parse as numbers.
bool label_less(const std::string& a, const std::string& b) {
    const auto na = parse_number(a);
    const auto nb = parse_number(b);
    if (na && nb) return *na < *nb;
    return a < b;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const std::optional<ClassPair>& classes) {
    std::ifstream in(path);
    if (!in) throw DataError(fmt::format("cannot open dataset {}", path.string()));

    const auto meta_path = std::filesystem::path(path.string() + ".meta.json");
    if (std::filesystem::exists(meta_path)) {
        std::ifstream meta_in(meta_path);
        const auto meta = nlohmann::json::parse(meta_in, nullptr, false);
        if (meta.is_discarded()) throw DataError(fmt::format("{}: unreadable metadata", meta_path.string()));
        check_format_version(meta.value("format_version", std::string{}), meta_path.string());
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(ParseError::Kind::BadHeader, fmt::format("{}: empty file", path.string()), 1);
    }
    const auto header = split_fields(line);
    if (header.size() < 2 || header.back() != "label") {
        throw ParseError(ParseError::Kind::BadHeader,
                         fmt::format("{}: header must be f1,...,fd,label", path.string()), 1);
    }
    const std::size_t d = header.size() - 1;

    std::vector<std::vector<double>> rows;
    std::vector<std::string> ids;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_fields(line);
        if (fields.size() != d + 1) {
            throw ParseError(ParseError::Kind::MalformedRow,
                             fmt::format("{} row {}: expected {} fields, found {}", path.string(), lineno,
                                         d + 1, fields.size()),
                             lineno);
        }
        std::vector<double> values(d);
        for (std::size_t k = 0; k < d; ++k) {
            const auto v = parse_number(fields[k]);
            if (!v) {
                throw ParseError(ParseError::Kind::BadNumber,
                                 fmt::format("{} row {}: cannot parse '{}' in column {}", path.string(),
                                             lineno, fields[k], header[k]),
                                 lineno);
            }
            if (!std::isfinite(*v)) {
                throw ParseError(ParseError::Kind::NonFinite,
                                 fmt::format("{} row {}: non-finite value in column {}", path.string(), lineno,
                                             header[k]),
                                 lineno);
            }
            values[k] = *v;
        }
        if (fields[d].empty()) {
            throw ParseError(ParseError::Kind::MalformedRow,
                             fmt::format("{} row {}: empty label", path.string(), lineno), lineno);
        }
        rows.push_back(std::move(values));
        ids.push_back(fields[d]);
    }

    std::string pos_id, neg_id;
    if (classes) {
        pos_id = classes->positive;
        neg_id = classes->negative;
        if (pos_id == neg_id) throw ConfigError("positive and negative class identifiers coincide");
    } else {
        std::set<std::string, decltype(&label_less)> distinct(&label_less);
        distinct.insert(ids.begin(), ids.end());
        if (distinct.size() != 2) {
            throw DataError(fmt::format("{}: expected exactly 2 classes, found {} (select a class pair)",
                                        path.string(), distinct.size()));
        }
        neg_id = *distinct.begin();
        pos_id = *std::next(distinct.begin());
    }

    Dataset ds;
    ds.name = path.stem().string();
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < ids.size(); ++r) {
        if (ids[r] == pos_id || ids[r] == neg_id) keep.push_back(r);
    }
    ds.X.resize(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(d));
    ds.y.reserve(keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) {
        for (std::size_t c = 0; c < d; ++c) {
            ds.X(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) = rows[keep[k]][c];
        }
        ds.y.push_back(ids[keep[k]] == pos_id ? 1 : -1);
    }
    if (ds.size() == 0) throw DataError(fmt::format("{}: no rows for the selected classes", path.string()));
    return ds;
}

void save_csv(const Dataset& ds, const std::filesystem::path& path,
              const std::optional<nlohmann::json>& metadata) {
    std::ofstream out(path);
    if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
    for (Eigen::Index c = 0; c < ds.X.cols(); ++c) out << 'f' << (c + 1) << ',';
    out << "label\n";
    for (Eigen::Index r = 0; r < ds.X.rows(); ++r) {
        for (Eigen::Index c = 0; c < ds.X.cols(); ++c) out << fmt::format("{},", ds.X(r, c));
        out << ds.y[static_cast<std::size_t>(r)] << '\n';
    }
    if (metadata) {
        auto meta = *metadata;
        meta["format_version"] = kFormatVersion;
        std::ofstream(path.string() + ".meta.json") << meta.dump(2) << '\n';
    }
}

}  // namespace qsvm
