#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsvm/simulator.hpp"

namespace qsvm {

/// How an interaction subset S = {i, j} is turned into a rotation angle.
/// Singletons always map to x_i.
enum class DataMap {
    ProductShifted,  // (pi - x_i)(pi - x_j)
    PlainProduct,    // x_i * x_j
};

std::string_view to_string(DataMap m);
DataMap data_map_from_string(std::string_view s);

/// Declarative description of the Pauli feature-map circuit: `depth`
/// repetitions of (Hadamard on every qubit, then exp(i alpha phi_S(x) P_S)
/// for each expanded term).
struct FeatureMapSpec {
    std::vector<std::string> paulis{"Z", "ZZ"};
    double alpha = 1.0;
    int depth = 2;
    DataMap data_map = DataMap::ProductShifted;

    /// Throws ConfigError on an empty/invalid pattern, non-finite alpha or depth < 1.
    void validate() const;

    /// "Z+ZZ" style label.
    std::string label() const;

    bool operator==(const FeatureMapSpec&) const = default;
};

/// Parses "Z,ZZ" or "Z+ZZ" into the pattern list.
std::vector<std::string> parse_pauli_list(std::string_view text);

struct FeatureTerm {
    PauliString pauli;
    std::vector<std::size_t> subset;  // ascending feature indices
};

/// Enumerates every term of the feature-map sum for `n_features` qubits.
/// Patterns in declared order; within a k-character pattern, all ascending
/// index tuples in lexicographic order, with axis c applied to the c-th index.
std::vector<FeatureTerm> expand_terms(const FeatureMapSpec& spec, std::size_t n_features);

double data_map_phi(std::span<const std::size_t> subset, std::span<const double> x, DataMap map);

/// Phi(x) = U(x) |0...0> with one qubit per feature.
StateVector build_feature_state(std::span<const double> x, const FeatureMapSpec& spec);

/// Same, reusing an already expanded term list (for batch evaluation).
StateVector build_feature_state(std::span<const double> x, const FeatureMapSpec& spec,
                                std::span<const FeatureTerm> terms);

}  // namespace qsvm
