#include "qsvm/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "qsvm/errors.hpp"

namespace qsvm {

char to_char(PauliAxis axis) {
    switch (axis) {
        case PauliAxis::X: return 'X';
        case PauliAxis::Y: return 'Y';
        case PauliAxis::Z: return 'Z';
    }
    return '?';
}

PauliAxis pauli_axis_from_char(char c) {
    switch (c) {
        case 'X': case 'x': return PauliAxis::X;
        case 'Y': case 'y': return PauliAxis::Y;
        case 'Z': case 'z': return PauliAxis::Z;
        default: break;
    }
    throw ArgumentError(fmt::format("'{}' is not a Pauli axis (expected X, Y or Z)", c));
}

PauliString::PauliString(std::vector<Term> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) {
        throw ArgumentError("Pauli string must have at least one term");
    }
    for (std::size_t a = 0; a < terms_.size(); ++a) {
        for (std::size_t b = a + 1; b < terms_.size(); ++b) {
            if (terms_[a].qubit == terms_[b].qubit) {
                throw ArgumentError(fmt::format("Pauli string acts twice on qubit {}", terms_[a].qubit));
            }
        }
    }
}

std::size_t PauliString::max_qubit() const noexcept {
    std::size_t m = 0;
    for (const auto& t : terms_) m = std::max(m, t.qubit);
    return m;
}

std::string PauliString::to_string() const {
    std::string out;
    for (const auto& t : terms_) {
        if (!out.empty()) out += ' ';
        out += fmt::format("{}{}", to_char(t.axis), t.qubit);
    }
    return out;
}

StateVector StateVector::zero(std::size_t n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ResourceError(fmt::format("register of {} qubits is outside the supported range 1..{}",
                                        n_qubits, kMaxQubits));
    }
    std::vector<Complex> amps(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amps[0] = Complex{1.0, 0.0};
    return StateVector(n_qubits, std::move(amps));
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
    const std::size_t dim = amplitudes.size();
    if (dim < 2 || !std::has_single_bit(dim)) {
        throw ArgumentError(fmt::format("amplitude count {} is not a power of two >= 2", dim));
    }
    const auto n = static_cast<std::size_t>(std::countr_zero(dim));
    if (n > kMaxQubits) {
        throw ResourceError(fmt::format("register of {} qubits exceeds {}", n, kMaxQubits));
    }
    return StateVector(n, std::move(amplitudes));
}

double StateVector::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& a : amplitudes_) s += std::norm(a);
    return s;
}

void StateVector::hadamard_all() noexcept {
    const double r = 1.0 / std::numbers::sqrt2;
    const std::size_t dim = amplitudes_.size();
    for (std::size_t q = 0; q < n_qubits_; ++q) {
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t k = 0; k < dim; ++k) {
            if (k & bit) continue;
            const Complex a0 = amplitudes_[k];
            const Complex a1 = amplitudes_[k | bit];
            amplitudes_[k] = r * (a0 + a1);
            amplitudes_[k | bit] = r * (a0 - a1);
        }
    }
}

void StateVector::pauli_exponential(const PauliString& p, double theta) {
    std::size_t flip_mask = 0;   // X or Y
    std::size_t sign_mask = 0;   // Y or Z: (-1)^bit
    unsigned n_y = 0;
    for (const auto& t : p.terms()) {
        if (t.qubit >= n_qubits_) {
            throw ArgumentError(fmt::format("Pauli term on qubit {} but register has {} qubits",
                                            t.qubit, n_qubits_));
        }
        const std::size_t bit = std::size_t{1} << t.qubit;
        if (t.axis != PauliAxis::Z) flip_mask |= bit;
        if (t.axis != PauliAxis::X) sign_mask |= bit;
        if (t.axis == PauliAxis::Y) ++n_y;
    }
    // i^n_y
    static constexpr Complex kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const Complex y_phase = kIPowers[n_y % 4];

    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Complex is{0.0, s};

    // P|k> = i^n_y (-1)^popcount(k & sign_mask) |k ^ flip_mask>
    std::vector<Complex> out(amplitudes_.size());
    for (std::size_t k = 0; k < amplitudes_.size(); ++k) {
        const std::size_t src = k ^ flip_mask;
        Complex p_amp = y_phase * amplitudes_[src];
        if (std::popcount(src & sign_mask) & 1) p_amp = -p_amp;
        out[k] = c * amplitudes_[k] + is * p_amp;
    }
    amplitudes_ = std::move(out);
}

StateVector new_zero_state(std::size_t n_qubits) { return StateVector::zero(n_qubits); }

StateVector apply_hadamard_all(StateVector state) {
    state.hadamard_all();
    return state;
}

StateVector apply_pauli_exponential(StateVector state, const PauliString& p, double theta) {
    state.pauli_exponential(p, theta);
    return state;
}

Complex inner_product(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw ArgumentError(fmt::format("inner product of {}-qubit and {}-qubit states",
                                        a.n_qubits(), b.n_qubits()));
    }
    Complex acc{0.0, 0.0};
    const auto aa = a.amplitudes();
    const auto bb = b.amplitudes();
    for (std::size_t k = 0; k < aa.size(); ++k) acc += std::conj(aa[k]) * bb[k];
    return acc;
}

}  // namespace qsvm
