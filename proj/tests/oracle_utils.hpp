#pragma once

// Reference implementations for the test suite, deliberately built from the
// raw definitions (dense matrices, quadratic double loops) rather than the
// library's algorithms, so agreement between the two is evidence.

#include "magicfwht/dynamics.hpp"
#include "magicfwht/rng.hpp"
#include "magicfwht/state_vector.hpp"

#include <Eigen/Dense>

#include <bit>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace oracle {

using mfwht::cplx;

/// out[k] = sum_x (-1)^{popcount(k & x)} in[x], straight from the definition.
inline std::vector<cplx> naive_wht(const std::vector<cplx>& in) {
    const std::size_t d = in.size();
    std::vector<cplx> out(d);
    for (std::size_t k = 0; k < d; ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t x = 0; x < d; ++x)
            acc += (std::popcount(k & x) & 1) ? -in[x] : in[x];
        out[k] = acc;
    }
    return out;
}

/// (u * v)[x] = sum_y u[y] v[x ^ y], the O(4^n) double loop.
inline std::vector<cplx> xor_convolve(const std::vector<cplx>& u, const std::vector<cplx>& v) {
    const std::size_t d = u.size();
    std::vector<cplx> out(d, cplx{0.0, 0.0});
    for (std::size_t x = 0; x < d; ++x)
        for (std::size_t y = 0; y < d; ++y) out[x] += u[y] * v[x ^ y];
    return out;
}

inline std::vector<cplx> random_vector(std::size_t d, mfwht::Rng& rng) {
    std::vector<cplx> v(d);
    for (auto& a : v) {
        const double re = rng.uniform(-1.0, 1.0);
        const double im = rng.uniform(-1.0, 1.0);
        a = cplx{re, im};
    }
    return v;
}

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const std::vector<cplx>& a) {
    double m = 0.0;
    for (const auto& v : a) m = std::max(m, std::abs(v));
    return m;
}

/// Embed a single-site 2x2 operator on qubit q (LSB convention).
inline Eigen::MatrixXcd site_op(int n, int q, const Eigen::Matrix2cd& m) {
    const std::int64_t d = std::int64_t{1} << n;
    const std::uint64_t mq = std::uint64_t{1} << q;
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(d, d);
    for (std::int64_t c = 0; c < d; ++c) {
        const int cbit = static_cast<int>((static_cast<std::uint64_t>(c) >> q) & 1);
        for (int rbit = 0; rbit < 2; ++rbit) {
            const std::int64_t r = static_cast<std::int64_t>(
                (static_cast<std::uint64_t>(c) & ~mq) | (rbit ? mq : 0));
            full(r, c) += m(rbit, cbit);
        }
    }
    return full;
}

inline Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}
inline Eigen::Matrix2cd pauli_y() {
    Eigen::Matrix2cd m;
    m << cplx{0, 0}, cplx{0, -1}, cplx{0, 1}, cplx{0, 0};
    return m;
}
inline Eigen::Matrix2cd pauli_z() {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}

/// Dense Hamiltonian assembled from explicit local terms; mirrors the bond
/// convention (i, i+1 mod N) independently of the library's bit tricks.
inline Eigen::MatrixXcd dense_hamiltonian(const mfwht::QuenchSpec& spec) {
    const int n = spec.n_qubits;
    const std::int64_t d = std::int64_t{1} << n;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
    const int last = spec.boundary == mfwht::Boundary::periodic ? n : n - 1;
    for (int i = 0; i < last; ++i) {
        const int j = (i + 1) % n;
        if (j == i) continue;
        if (spec.model == mfwht::Model::xxz) {
            h += spec.j * (site_op(n, i, pauli_x()) * site_op(n, j, pauli_x()) +
                           site_op(n, i, pauli_y()) * site_op(n, j, pauli_y()));
            h += spec.delta * site_op(n, i, pauli_z()) * site_op(n, j, pauli_z());
        } else {
            h += -spec.j * site_op(n, i, pauli_z()) * site_op(n, j, pauli_z());
        }
    }
    if (spec.model == mfwht::Model::tfim_lf)
        for (int i = 0; i < n; ++i)
            h += -spec.hx * site_op(n, i, pauli_x()) - spec.hz * site_op(n, i, pauli_z());
    return h;
}

/// exp(-i H t) |psi> by full eigendecomposition.
inline std::vector<cplx> dense_propagate(const Eigen::MatrixXcd& h, const std::vector<cplx>& psi,
                                         double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXcd v =
        Eigen::Map<const Eigen::VectorXcd>(psi.data(), static_cast<std::int64_t>(psi.size()));
    Eigen::VectorXcd c = es.eigenvectors().adjoint() * v;
    for (std::int64_t k = 0; k < c.size(); ++k)
        c[k] *= std::polar(1.0, -t * es.eigenvalues()[k]);
    const Eigen::VectorXcd out = es.eigenvectors() * c;
    return {out.data(), out.data() + out.size()};
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path test_dir(const std::string& tag) {
    static int counter = 0;
    const auto dir = std::filesystem::temp_directory_path() /
                     ("magicfwht_test_" + tag + "_" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace oracle
