#include "magicfwht/pauli.hpp"

#include "magicfwht/errors.hpp"
#include "magicfwht/reduction.hpp"

#include <bit>
#include <cctype>
#include <chrono>
#include <string>

namespace mfwht {

std::string to_string(PauliLabel p, int n_qubits) {
    std::string s;
    s.reserve(static_cast<std::size_t>(n_qubits));
    for (int q = 0; q < n_qubits; ++q) {
        const bool x = (p.x_mask >> q) & 1;
        const bool z = (p.z_mask >> q) & 1;
        s += x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
    }
    return s;
}

PauliLabel pauli_from_string(std::string_view s) {
    if (s.empty() || s.size() > 64)
        throw InvalidInputError("pauli string must have 1..64 letters");
    PauliLabel p;
    for (std::size_t q = 0; q < s.size(); ++q) {
        switch (std::toupper(static_cast<unsigned char>(s[q]))) {
        case 'I': break;
        case 'X': p.x_mask |= std::uint64_t{1} << q; break;
        case 'Z': p.z_mask |= std::uint64_t{1} << q; break;
        case 'Y':
            p.x_mask |= std::uint64_t{1} << q;
            p.z_mask |= std::uint64_t{1} << q;
            break;
        default:
            throw InvalidInputError(std::string("bad pauli letter '") + s[q] + "'");
        }
    }
    return p;
}

cplx pauli_expectation(const StateVector& psi, PauliLabel p) {
    const std::uint64_t d = psi.dim();
    if (p.x_mask >= d || p.z_mask >= d)
        throw InvalidInputError("pauli mask out of range for " + std::to_string(psi.n_qubits()) +
                                " qubits");
    const std::span<const cplx> a = psi.amplitudes();
    cplx acc{0.0, 0.0};
    for (std::uint64_t t = 0; t < d; ++t) {
        const cplx term = std::conj(a[t ^ p.x_mask]) * a[t];
        acc += (std::popcount(p.z_mask & t) & 1) ? -term : term;
    }
    return acc;
}

SreResult sre2_brute_force(const StateVector& psi, const BruteForceOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    const int n = psi.n_qubits();
    if (n > opts.guard_max_qubits && !opts.allow_large)
        throw ResourceError("brute-force enumeration is O(8^N) and refuses N = " +
                            std::to_string(n) + " > " + std::to_string(opts.guard_max_qubits) +
                            " (raise the guard explicitly to insist)");

    StateVector storage = StateVector::computational_zero(1);
    const StateVector& state = detail::normalized_input(psi, storage);

    const std::uint64_t d = state.dim();
    const std::span<const cplx> a = state.amplitudes();
    const int w = resolve_workers(opts.workers);
    std::vector<double> partial4(d), partial2(d);

    parallel_for_chunks(0, d, w, [&](int, std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t x = lo; x < hi; ++x) {
            double s4 = 0.0, s2 = 0.0;
            for (std::uint64_t z = 0; z < d; ++z) {
                cplx e{0.0, 0.0};
                for (std::uint64_t t = 0; t < d; ++t) {
                    const cplx term = std::conj(a[t ^ x]) * a[t];
                    e += (std::popcount(z & t) & 1) ? -term : term;
                }
                const double p = e.real() * e.real() + e.imag() * e.imag();
                s4 += p * p;
                s2 += p;
            }
            partial4[x] = s4;
            partial2[x] = s2;
        }
    });

    const double fourth = pairwise_sum(partial4);
    const double second = pairwise_sum(partial2);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return detail::finalize_sre(fourth, second, n, SreMethod::brute_force, wall, w);
}

} // namespace mfwht
