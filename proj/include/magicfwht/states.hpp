#pragma once

#include "magicfwht/rng.hpp"
#include "magicfwht/state_vector.hpp"

#include <filesystem>
#include <span>
#include <utility>

namespace mfwht {

// Conventions used by every constructor here: qubit 0 is the least
// significant bit of the basis index, and spin up is |0> (bit clear), spin
// down is |1> (bit set).

/// Normalized i.i.d. complex Gaussian vector: Haar-distributed pure state.
/// Amplitudes are drawn in index order, real part before imaginary part.
StateVector haar_random_state(int n_qubits, Rng& rng);
StateVector haar_random_state(int n_qubits, RngSpec spec);

/// |up down up down ...>: qubit 0 up, odd qubits down.
StateVector neel_state(int n_qubits);

/// |up...up> = |0...0>.
StateVector all_up_state(int n_qubits);

/// Product of single-qubit states cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>,
/// one (theta, phi) pair per qubit, qubit 0 first.
StateVector product_state(std::span<const std::pair<double, double>> theta_phi);

/// Random product state. Default measure: theta uniform on [0, pi), phi
/// uniform on [0, 2 pi) — uniform in the parameters, not on the Bloch
/// sphere. `sphere_uniform` switches to cos(theta) uniform on (-1, 1].
/// Draw order per qubit: theta, then phi.
StateVector random_product_state(int n_qubits, Rng& rng, bool sphere_uniform = false);

/// (|0> + e^{i pi/4} |1>) / sqrt(2), the canonical single-qubit magic state
/// with m2 = log2(4/3).
StateVector t_state();

/// t_state on qubit 0, |0> on the rest.
StateVector t_tensor_zeros(int n_qubits);

/// (|00> + |11>) / sqrt(2).
StateVector bell_state();

/// GHZ (|0...0> + |1...1>) / sqrt(2) built by actually applying a Hadamard
/// to qubit 0 and a CNOT chain, not by writing amplitudes.
StateVector ghz_from_gates(int n_qubits);

/// Kronecker combination with a's qubits as the LOW bits of the result:
/// out[(ib << a.n_qubits()) | ia] = a[ia] * b[ib].
StateVector tensor_product(const StateVector& a, const StateVector& b);

/// File round trip (format documented on StateVector::save).
void save_state(const StateVector& psi, const std::filesystem::path& path);
StateVector load_state(const std::filesystem::path& path);

} // namespace mfwht
