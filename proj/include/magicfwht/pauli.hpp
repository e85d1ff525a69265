#pragma once

#include "magicfwht/sre.hpp"
#include "magicfwht/state_vector.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace mfwht {

/// A Pauli string P = X^x Z^z identified modulo global phase by its two
/// bitmasks (bit j of x_mask: X on qubit j; bit j of z_mask: Z on qubit j;
/// both set: Y up to phase).
struct PauliLabel {
    std::uint64_t x_mask = 0;
    std::uint64_t z_mask = 0;
};

/// Render as one letter per qubit, qubit 0 first (e.g. x=0b01, z=0b10 on two
/// qubits -> "XZ").
std::string to_string(PauliLabel p, int n_qubits);

/// Parse the inverse of to_string; accepts IXYZ (case-insensitive).
PauliLabel pauli_from_string(std::string_view s);

/// <psi| X^x Z^z |psi> = sum_t (-1)^{popcount(z & t) mod 2} conj(psi[t^x]) psi[t].
///
/// Deliberately phase-free: strings containing Y are off by i^{popcount(x&z)}
/// from the Hermitian Pauli expectation. Only |<P>| feeds the entropy, so the
/// phase is never tracked; don't read this as a faithful <Y>.
cplx pauli_expectation(const StateVector& psi, PauliLabel p);

struct BruteForceOptions {
    /// Enumeration is O(8^N); refuse above this size unless allow_large.
    int guard_max_qubits = 10;
    bool allow_large = false;
    int workers = 0; // 0 = detected core count
};

/// Ground-truth M2 by explicit enumeration of all 4^N Pauli expectations,
/// O(8^N). Enumeration order is outer x ascending, inner z ascending;
/// parallel over x with the same shift-indexed pairwise reduction as the
/// engine, so it is equally deterministic.
SreResult sre2_brute_force(const StateVector& psi, const BruteForceOptions& opts = {});

} // namespace mfwht
