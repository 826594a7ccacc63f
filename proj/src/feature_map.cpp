#include "qsvm/feature_map.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "qsvm/errors.hpp"

namespace qsvm {

std::string_view to_string(DataMap m) {
    switch (m) {
        case DataMap::ProductShifted: return "product_shifted";
        case DataMap::PlainProduct: return "plain_product";
    }
    return "?";
}

DataMap data_map_from_string(std::string_view s) {
    if (s == "product_shifted") return DataMap::ProductShifted;
    if (s == "plain_product") return DataMap::PlainProduct;
    throw ConfigError(fmt::format("unknown data_map '{}' (expected product_shifted or plain_product)", s));
}

void FeatureMapSpec::validate() const {
    if (paulis.empty()) throw ConfigError("feature map needs at least one Pauli pattern");
    for (const auto& p : paulis) {
        if (p.empty()) throw ConfigError("empty Pauli pattern");
        for (char c : p) {
            if (c != 'X' && c != 'Y' && c != 'Z') {
                throw ConfigError(fmt::format("Pauli pattern '{}' contains '{}'", p, c));
            }
        }
    }
    if (!std::isfinite(alpha)) throw ConfigError("alpha must be finite");
    if (depth < 1) throw ConfigError(fmt::format("depth must be >= 1, got {}", depth));
}

std::string FeatureMapSpec::label() const {
    std::string out;
    for (const auto& p : paulis) {
        if (!out.empty()) out += '+';
        out += p;
    }
    return out;
}

std::vector<std::string> parse_pauli_list(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
    };
    for (char c : text) {
        if (c == ',' || c == '+' || std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else {
            cur += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        }
    }
    flush();
    if (out.empty()) throw ConfigError(fmt::format("no Pauli patterns in '{}'", text));
    return out;
}

namespace {

// Calls f(indices) for every ascending k-subset of {0..n-1}, lexicographically.
template <typename F>
void for_each_combination(std::size_t n, std::size_t k, F&& f) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        f(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

std::vector<FeatureTerm> expand_terms(const FeatureMapSpec& spec, std::size_t n_features) {
    spec.validate();
    std::vector<FeatureTerm> out;
    for (const auto& pattern : spec.paulis) {
        const std::size_t k = pattern.size();
        if (k > n_features) {
            throw ConfigError(fmt::format("Pauli pattern '{}' needs {} qubits but there are {} features",
                                          pattern, k, n_features));
        }
        for_each_combination(n_features, k, [&](const std::vector<std::size_t>& idx) {
            std::vector<PauliString::Term> terms;
            terms.reserve(k);
            for (std::size_t c = 0; c < k; ++c) {
                terms.push_back({idx[c], pauli_axis_from_char(pattern[c])});
            }
            out.push_back({PauliString(std::move(terms)), idx});
        });
    }
    return out;
}

double data_map_phi(std::span<const std::size_t> subset, std::span<const double> x, DataMap map) {
    for (auto i : subset) {
        if (i >= x.size()) {
            throw ArgumentError(fmt::format("feature index {} out of range for {} features", i, x.size()));
        }
    }
    switch (subset.size()) {
        case 1:
            return x[subset[0]];
        case 2: {
            const double a = x[subset[0]];
            const double b = x[subset[1]];
            if (map == DataMap::ProductShifted) {
                return (std::numbers::pi - a) * (std::numbers::pi - b);
            }
            return a * b;
        }
        case 0:
            throw ArgumentError("empty feature subset");
        default:
            throw UnsupportedTermError(
                fmt::format("{}-local feature terms are not supported (only 1- and 2-local)", subset.size()));
    }
}

StateVector build_feature_state(std::span<const double> x, const FeatureMapSpec& spec) {
    const auto terms = expand_terms(spec, x.size());
    return build_feature_state(x, spec, terms);
}

StateVector build_feature_state(std::span<const double> x, const FeatureMapSpec& spec,
                                std::span<const FeatureTerm> terms) {
    std::vector<double> angles;
    angles.reserve(terms.size());
    for (const auto& t : terms) {
        const double a = spec.alpha * data_map_phi(t.subset, x, spec.data_map);
        if (!std::isfinite(a)) throw DataError("non-finite feature-map angle");
        angles.push_back(a);
    }
    auto state = StateVector::zero(x.size());
    for (int rep = 0; rep < spec.depth; ++rep) {
        state.hadamard_all();
        for (std::size_t t = 0; t < terms.size(); ++t) {
            state.pauli_exponential(terms[t].pauli, angles[t]);
        }
    }
    return state;
}

}  // namespace qsvm
