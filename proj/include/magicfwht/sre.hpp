#pragma once

#include "magicfwht/state_vector.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace mfwht {

enum class SreMethod { xor_fwht, brute_force };

std::string_view to_string(SreMethod m);

/// Output of one entropy computation. `m2` is the second-order stabilizer
/// Renyi entropy in bits; `fourth_moment_sum` is the raw accumulator
/// r = sum_P |<P>|^4 over all 4^N Pauli strings (before division by d), so
/// m2 = -log2(r / d). `second_moment_sum` is sum_P |<P>|^2, which equals d
/// exactly for any normalized pure state and is carried as a diagnostic.
struct SreResult {
    double m2 = 0.0;
    double fourth_moment_sum = 0.0;
    double second_moment_sum = 0.0;
    int n_qubits = 0;
    SreMethod method = SreMethod::xor_fwht;
    double wall_seconds = 0.0;
    int workers = 1;
};

/// Exact M2 in O(N 4^N): for each shift k the correlation vector
/// G_k[x] = conj(psi[x^k]) psi[x] is transformed in place, and the
/// transform's entries are exactly the Pauli expectations <X^k Z^u>, whose
/// fourth powers are accumulated.
///
/// `workers` = 0 means "detected core count". The shift loop is split across
/// workers; per-shift partial sums land in a shift-indexed array that is
/// folded by a fixed-shape pairwise tree, so the result is bit-identical for
/// every worker count.
SreResult sre2_exact(const StateVector& psi, int workers = 0);

/// Just the raw fourth moment r = sum_P |<P>|^4 (same computation as
/// sre2_exact, same determinism contract).
double pauli_fourth_moment(const StateVector& psi, int workers = 0);

/// Elementwise sre2_exact, order preserved; states run in parallel, each one
/// computed serially. All states must share one n_qubits.
std::vector<SreResult> sre2_batch(std::span<const StateVector> states, int workers = 0);

namespace detail {

/// Shared tail of the engine and the brute-force oracle: validates the two
/// moment sums against their analytic ranges (r >= 1, r <= d, second = d)
/// and assembles the result. Violations beyond tolerance are internal
/// errors, never silently clamped.
SreResult finalize_sre(double fourth_moment_sum, double second_moment_sum, int n_qubits,
                       SreMethod method, double wall_seconds, int workers);

/// Shared input policy of the engine and the brute-force oracle: accept as-is
/// up to 1e-12 norm deviation, renormalize into `storage` up to 1e-6
/// (integrator drift), reject beyond. Returns whichever state to read.
const StateVector& normalized_input(const StateVector& psi, StateVector& storage);

} // namespace detail

} // namespace mfwht
