#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace qsvm {

using Complex = std::complex<double>;

enum class PauliAxis : unsigned char { X, Y, Z };

char to_char(PauliAxis axis);
PauliAxis pauli_axis_from_char(char c);

/// Tensor product of single-qubit Paulis on distinct qubits.
class PauliString {
public:
    struct Term {
        std::size_t qubit;
        PauliAxis axis;
        bool operator==(const Term&) const = default;
    };

    /// Throws ArgumentError if `terms` is empty or repeats a qubit.
    explicit PauliString(std::vector<Term> terms);

    const std::vector<Term>& terms() const noexcept { return terms_; }
    std::size_t max_qubit() const noexcept;

    /// e.g. "Z0 Z1"
    std::string to_string() const;

    bool operator==(const PauliString&) const = default;

private:
    std::vector<Term> terms_;
};

/// Dense n-qubit pure state. Qubit k is bit k of the amplitude index
/// (qubit 0 is the least-significant bit).
class StateVector {
public:
    static constexpr std::size_t kMaxQubits = 24;

    /// |0...0>. Throws ResourceError outside 1..kMaxQubits.
    static StateVector zero(std::size_t n_qubits);

    /// Wraps raw amplitudes; the length must be a power of two in range.
    /// No normalization is performed.
    static StateVector from_amplitudes(std::vector<Complex> amplitudes);

    std::size_t n_qubits() const noexcept { return n_qubits_; }
    std::size_t dimension() const noexcept { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

    double norm_squared() const noexcept;

    // In-place forms; the free functions below are the value-returning API.
    void hadamard_all() noexcept;
    void pauli_exponential(const PauliString& p, double theta);

private:
    StateVector(std::size_t n, std::vector<Complex> amps)
        : n_qubits_(n), amplitudes_(std::move(amps)) {}

    std::size_t n_qubits_;
    std::vector<Complex> amplitudes_;
};

StateVector new_zero_state(std::size_t n_qubits);

StateVector apply_hadamard_all(StateVector state);

/// exp(i*theta*P) |state>, computed as cos(theta)|s> + i sin(theta) P|s>.
StateVector apply_pauli_exponential(StateVector state, const PauliString& p, double theta);

/// <a|b>. Throws ArgumentError on a qubit-count mismatch.
Complex inner_product(const StateVector& a, const StateVector& b);

}  // namespace qsvm
