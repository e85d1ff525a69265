#include "magicfwht/states.hpp"

#include "magicfwht/dynamics.hpp"
#include "magicfwht/errors.hpp"
#include "magicfwht/reduction.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mfwht {

namespace {

std::vector<cplx> normalized(std::vector<cplx> amps) {
    std::vector<double> sq(amps.size());
    for (std::size_t i = 0; i < amps.size(); ++i) sq[i] = std::norm(amps[i]);
    const double nrm = std::sqrt(pairwise_sum(sq));
    if (nrm == 0.0) throw InternalError("attempt to normalize a zero vector");
    const double inv = 1.0 / nrm;
    for (auto& a : amps) a *= inv;
    return amps;
}

} // namespace

StateVector haar_random_state(int n_qubits, Rng& rng) {
    if (n_qubits < 1) throw InvalidInputError("haar_random_state: n_qubits must be >= 1");
    const auto d = std::uint64_t{1} << n_qubits;
    std::vector<cplx> amps(d);
    for (auto& a : amps) {
        const double re = rng.normal();
        const double im = rng.normal();
        a = cplx{re, im};
    }
    return StateVector(n_qubits, normalized(std::move(amps)));
}

StateVector haar_random_state(int n_qubits, RngSpec spec) {
    Rng rng(spec);
    return haar_random_state(n_qubits, rng);
}

StateVector neel_state(int n_qubits) {
    std::uint64_t index = 0;
    for (int q = 1; q < n_qubits; q += 2) index |= std::uint64_t{1} << q;
    return StateVector::basis_state(n_qubits, index);
}

StateVector all_up_state(int n_qubits) { return StateVector::computational_zero(n_qubits); }

StateVector product_state(std::span<const std::pair<double, double>> theta_phi) {
    const int n = static_cast<int>(theta_phi.size());
    if (n < 1) throw InvalidInputError("product_state: need at least one qubit");
    std::vector<std::array<cplx, 2>> factor(theta_phi.size());
    for (std::size_t q = 0; q < theta_phi.size(); ++q) {
        const auto [theta, phi] = theta_phi[q];
        factor[q][0] = cplx{std::cos(theta / 2), 0.0};
        factor[q][1] = std::polar(std::sin(theta / 2), phi);
    }
    const auto d = std::uint64_t{1} << n;
    std::vector<cplx> amps(d);
    for (std::uint64_t t = 0; t < d; ++t) {
        cplx a{1.0, 0.0};
        for (int q = 0; q < n; ++q) a *= factor[q][(t >> q) & 1];
        amps[t] = a;
    }
    return StateVector(n, normalized(std::move(amps)));
}

StateVector random_product_state(int n_qubits, Rng& rng, bool sphere_uniform) {
    if (n_qubits < 1) throw InvalidInputError("random_product_state: n_qubits must be >= 1");
    std::vector<std::pair<double, double>> angles(static_cast<std::size_t>(n_qubits));
    for (auto& [theta, phi] : angles) {
        theta = sphere_uniform ? std::acos(1.0 - 2.0 * rng.uniform01())
                               : rng.uniform(0.0, std::numbers::pi);
        phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    return product_state(angles);
}

StateVector t_state() {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<cplx> amps{cplx{inv_sqrt2, 0.0},
                           std::polar(inv_sqrt2, std::numbers::pi / 4)};
    return StateVector(1, std::move(amps));
}

StateVector t_tensor_zeros(int n_qubits) {
    if (n_qubits < 1) throw InvalidInputError("t_tensor_zeros: n_qubits must be >= 1");
    if (n_qubits == 1) return t_state();
    return tensor_product(t_state(), StateVector::computational_zero(n_qubits - 1));
}

StateVector bell_state() {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<cplx> amps(4, cplx{0.0, 0.0});
    amps[0] = amps[3] = cplx{inv_sqrt2, 0.0};
    return StateVector(2, std::move(amps));
}

StateVector ghz_from_gates(int n_qubits) {
    if (n_qubits < 2) throw InvalidInputError("ghz_from_gates: n_qubits must be >= 2");
    StateVector psi = StateVector::computational_zero(n_qubits);
    apply_single_qubit_gate(psi, hadamard_gate(), 0);
    for (int q = 0; q + 1 < n_qubits; ++q)
        apply_two_qubit_gate(psi, cnot_gate(), q, q + 1);
    return psi;
}

StateVector tensor_product(const StateVector& a, const StateVector& b) {
    const int n = a.n_qubits() + b.n_qubits();
    if (n > 30) throw InvalidInputError("tensor_product: combined size exceeds 30 qubits");
    std::vector<cplx> amps(std::uint64_t{1} << n);
    const std::uint64_t da = a.dim();
    for (std::uint64_t ib = 0; ib < b.dim(); ++ib)
        for (std::uint64_t ia = 0; ia < da; ++ia)
            amps[(ib << a.n_qubits()) | ia] = a[ia] * b[ib];
    return StateVector(n, std::move(amps));
}

void save_state(const StateVector& psi, const std::filesystem::path& path) { psi.save(path); }

StateVector load_state(const std::filesystem::path& path) { return StateVector::load(path); }

} // namespace mfwht
