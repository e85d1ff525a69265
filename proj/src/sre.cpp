#include "magicfwht/sre.hpp"

#include "magicfwht/errors.hpp"
#include "magicfwht/fwht.hpp"
#include "magicfwht/reduction.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace mfwht {

std::string_view to_string(SreMethod m) {
    return m == SreMethod::xor_fwht ? "xor_fwht" : "brute_force";
}

namespace detail {

SreResult finalize_sre(double fourth_moment_sum, double second_moment_sum, int n_qubits,
                       SreMethod method, double wall_seconds, int workers) {
    const double d = std::ldexp(1.0, n_qubits);
    if (!std::isfinite(fourth_moment_sum) || !std::isfinite(second_moment_sum))
        throw InternalError("non-finite moment sum");
    if (std::abs(second_moment_sum - d) > 1e-6 * d)
        throw InternalError("second moment " + std::to_string(second_moment_sum) +
                            " deviates from dimension " + std::to_string(d));
    if (fourth_moment_sum < 1.0 - 1e-9)
        throw InternalError("fourth moment " + std::to_string(fourth_moment_sum) +
                            " below its analytic floor of 1");
    const double ratio = fourth_moment_sum / d;
    if (ratio > 1.0 + 1e-9)
        throw InternalError("fourth moment exceeds dimension: ratio " + std::to_string(ratio));
    // ratio <= 1 analytically; anything above is rounding at the stabilizer
    // boundary (m2 = 0), already vetted to be within 1e-9.
    SreResult res;
    res.m2 = -std::log2(std::min(ratio, 1.0));
    if (res.m2 == 0.0) res.m2 = 0.0; // scrub the -0.0 that -log2(1) yields
    res.fourth_moment_sum = fourth_moment_sum;
    res.second_moment_sum = second_moment_sum;
    res.n_qubits = n_qubits;
    res.method = method;
    res.wall_seconds = wall_seconds;
    res.workers = workers;
    return res;
}

const StateVector& normalized_input(const StateVector& psi, StateVector& storage) {
    const double dev = std::abs(psi.norm() - 1.0);
    if (dev > 1e-6)
        throw InvalidInputError("state norm deviates from 1 by " + std::to_string(dev));
    if (dev <= 1e-12) return psi;
    std::vector<cplx> amps(psi.amplitudes().begin(), psi.amplitudes().end());
    storage = StateVector(psi.n_qubits(), std::move(amps)); // ctor renormalizes
    return storage;
}

} // namespace detail

namespace {

void check_engine_memory(std::uint64_t d, int workers) {
    const std::uint64_t mem = detected_memory_bytes();
    if (mem == 0) return; // undetectable; let the allocator be the guard
    // one scratch buffer per worker plus the two shift-indexed partial arrays
    const std::uint64_t needed =
        d * sizeof(cplx) * static_cast<std::uint64_t>(workers) + 2 * d * sizeof(double);
    const std::uint64_t budget = mem * 9 / 10;
    if (needed > budget)
        throw ResourceError("engine needs " + std::to_string(needed) + " bytes of scratch (" +
                            std::to_string(d * sizeof(cplx)) +
                            " per worker buffer), over the " + std::to_string(budget) +
                            "-byte ceiling");
}

} // namespace

SreResult sre2_exact(const StateVector& psi, int workers) {
    const auto t0 = std::chrono::steady_clock::now();
    StateVector storage = StateVector::computational_zero(1);
    const StateVector& state = detail::normalized_input(psi, storage);

    const std::uint64_t d = state.dim();
    int w = resolve_workers(workers);
    if (static_cast<std::uint64_t>(w) > d) w = static_cast<int>(d);
    check_engine_memory(d, w);

    const std::span<const cplx> amps = state.amplitudes();
    std::vector<double> partial4(d), partial2(d);

    parallel_for_chunks(0, d, w, [&](int, std::uint64_t lo, std::uint64_t hi) {
        std::vector<cplx> g(d); // per-worker scratch, reused across shifts
        for (std::uint64_t k = lo; k < hi; ++k) {
            xor_shift_product(amps, k, g);
            fwht_in_place(std::span<cplx>(g));
            // g[u] is now exactly <X^k Z^u>
            double s4 = 0.0, s2 = 0.0;
            for (std::uint64_t u = 0; u < d; ++u) {
                const double p = g[u].real() * g[u].real() + g[u].imag() * g[u].imag();
                s4 += p * p;
                s2 += p;
            }
            partial4[k] = s4;
            partial2[k] = s2;
        }
    });

    const double fourth = pairwise_sum(partial4);
    const double second = pairwise_sum(partial2);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return detail::finalize_sre(fourth, second, state.n_qubits(), SreMethod::xor_fwht, wall, w);
}

double pauli_fourth_moment(const StateVector& psi, int workers) {
    return sre2_exact(psi, workers).fourth_moment_sum;
}

std::vector<SreResult> sre2_batch(std::span<const StateVector> states, int workers) {
    if (states.empty()) return {};
    const int n = states.front().n_qubits();
    for (const auto& s : states)
        if (s.n_qubits() != n)
            throw InvalidInputError("sre2_batch: states mix different qubit counts");

    std::vector<SreResult> results(states.size());
    const int w = resolve_workers(workers);
    parallel_for_chunks(0, states.size(), w, [&](int, std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) results[i] = sre2_exact(states[i], 1);
    });
    return results;
}

} // namespace mfwht
