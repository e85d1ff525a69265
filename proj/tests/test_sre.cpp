#include "magicfwht/errors.hpp"
#include "magicfwht/pauli.hpp"
#include "magicfwht/sre.hpp"
#include "magicfwht/states.hpp"

#include "oracle_utils.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

using mfwht::cplx;
using mfwht::SreResult;
using mfwht::StateVector;
using mfwht::sre2_batch;
using mfwht::sre2_brute_force;
using mfwht::sre2_exact;

namespace {

const double kLog2FourThirds = std::log2(4.0 / 3.0);

StateVector phase_times(const StateVector& psi, cplx phase) {
    std::vector<cplx> amps(psi.amplitudes().begin(), psi.amplitudes().end());
    for (auto& a : amps) a *= phase;
    return StateVector(psi.n_qubits(), std::move(amps));
}

/// X^x Z^z |psi> up to the (irrelevant) global i^{x.z} phase.
StateVector pauli_times(const StateVector& psi, std::uint64_t x, std::uint64_t z) {
    const auto in = psi.amplitudes();
    std::vector<cplx> amps(in.size());
    for (std::uint64_t t = 0; t < in.size(); ++t) {
        const double sign = (std::popcount(z & (t ^ x)) & 1) ? -1.0 : 1.0;
        amps[t] = sign * in[t ^ x];
    }
    return StateVector(psi.n_qubits(), std::move(amps));
}

} // namespace

TEST_SUITE("sre") {

TEST_CASE("basis states have m2 == 0 with exact moments") {
    for (int n = 1; n <= 6; ++n) {
        const auto res = sre2_exact(StateVector::basis_state(n, (1u << n) - 1));
        const double d = std::pow(2.0, n);
        CHECK(res.m2 == 0.0);
        CHECK(res.fourth_moment_sum == d);
        CHECK(res.second_moment_sum == d);
        CHECK(res.n_qubits == n);
        CHECK(res.method == mfwht::SreMethod::xor_fwht);
        CHECK(!std::signbit(res.m2));
    }
}

TEST_CASE("known stabilizer states have m2 == 0 (basis exactly, gate-built to 1e-12)") {
    // Gate-built states carry sqrt(0.5) roundoff, so only basis states land
    // on 0.0 exactly.
    CHECK(sre2_exact(mfwht::neel_state(5)).m2 == 0.0);
    CHECK(std::abs(sre2_exact(mfwht::bell_state()).m2) <= 1e-12);
    CHECK(std::abs(sre2_exact(mfwht::ghz_from_gates(4)).m2) <= 1e-12);
}

TEST_CASE("single T state hits log2(4/3) to 1e-12 on both paths") {
    const auto t = mfwht::t_state();
    const auto fast = sre2_exact(t);
    const auto slow = sre2_brute_force(t);
    CHECK(std::abs(fast.m2 - kLog2FourThirds) <= 1e-12);
    CHECK(std::abs(slow.m2 - kLog2FourThirds) <= 1e-12);
    // fourth moment is exactly d * 3/4 = 3/2 up to roundoff
    CHECK(fast.fourth_moment_sum == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(slow.method == mfwht::SreMethod::brute_force);
}

TEST_CASE("T tensor zeros keeps m2 = log2(4/3) (additivity, N = 6)") {
    const auto psi = mfwht::t_tensor_zeros(6);
    const auto res = sre2_exact(psi);
    CHECK(std::abs(res.m2 - kLog2FourThirds) <= 1e-11);
}

TEST_CASE("m2 is additive under tensor products") {
    mfwht::Rng rng({314, 0});
    const auto a = mfwht::haar_random_state(3, rng);
    const auto b = mfwht::haar_random_state(2, rng);
    const auto ab = mfwht::tensor_product(a, b);
    const double m2a = sre2_exact(a).m2;
    const double m2b = sre2_exact(b).m2;
    const double m2ab = sre2_exact(ab).m2;
    CHECK(std::abs(m2ab - (m2a + m2b)) <= 1e-9);
}

TEST_CASE("engine matches the brute-force path on random states") {
    mfwht::Rng rng({271, 1});
    for (int n = 1; n <= 5; ++n) {
        const auto psi = mfwht::haar_random_state(n, rng);
        const auto fast = sre2_exact(psi);
        const auto slow = sre2_brute_force(psi);
        CHECK(std::abs(fast.m2 - slow.m2) <= 1e-9);
        CHECK(std::abs(fast.fourth_moment_sum - slow.fourth_moment_sum) <= 1e-9);
    }
}

TEST_CASE("m2 is invariant under a global phase") {
    mfwht::Rng rng({99, 2});
    const auto psi = mfwht::haar_random_state(4, rng);
    const auto rotated = phase_times(psi, std::polar(1.0, 1.234567));
    CHECK(std::abs(sre2_exact(psi).m2 - sre2_exact(rotated).m2) <= 1e-12);
}

TEST_CASE("m2 is invariant under Pauli X^x Z^z frames") {
    mfwht::Rng rng({55, 3});
    const auto psi = mfwht::haar_random_state(4, rng);
    const double base = sre2_exact(psi).m2;
    for (const auto& [x, z] : {std::pair<std::uint64_t, std::uint64_t>{5, 0},
                              {0, 11},
                              {9, 6},
                              {15, 15}}) {
        CHECK(std::abs(sre2_exact(pauli_times(psi, x, z)).m2 - base) <= 1e-10);
    }
}

TEST_CASE("moment identities: second moment is d, ratio stays in (0, 1]") {
    mfwht::Rng rng({47, 4});
    for (int n : {2, 5, 8}) {
        const auto res = sre2_exact(mfwht::haar_random_state(n, rng));
        const double d = std::pow(2.0, n);
        CHECK(std::abs(res.second_moment_sum - d) <= 1e-9 * d);
        CHECK(res.fourth_moment_sum >= 1.0 - 1e-9);
        CHECK(res.fourth_moment_sum <= d + 1e-9);
        CHECK(res.m2 >= 0.0);
        CHECK(res.m2 <= n + 1e-9);
    }
}

TEST_CASE("results are bitwise independent of the worker count") {
    mfwht::Rng rng({88, 5});
    const auto psi = mfwht::haar_random_state(6, rng);
    const auto r1 = sre2_exact(psi, 1);
    for (int w : {2, 3, 4, 8}) {
        const auto rw = sre2_exact(psi, w);
        CHECK(rw.m2 == r1.m2);
        CHECK(rw.fourth_moment_sum == r1.fourth_moment_sum);
        CHECK(rw.second_moment_sum == r1.second_moment_sum);
        CHECK(rw.workers == w);
    }
    const auto o1 = sre2_brute_force(psi, {.workers = 1});
    const auto o3 = sre2_brute_force(psi, {.workers = 3});
    CHECK(o1.fourth_moment_sum == o3.fourth_moment_sum);
}

TEST_CASE("pauli_fourth_moment agrees with the full result") {
    mfwht::Rng rng({21, 6});
    const auto psi = mfwht::haar_random_state(5, rng);
    CHECK(mfwht::pauli_fourth_moment(psi) == sre2_exact(psi).fourth_moment_sum);
}

TEST_CASE("sre2_batch matches per-state calls and is worker independent") {
    mfwht::Rng rng({61, 7});
    std::vector<StateVector> states;
    for (int i = 0; i < 5; ++i) states.push_back(mfwht::haar_random_state(4, rng));

    const auto batch1 = sre2_batch(states, 1);
    const auto batch4 = sre2_batch(states, 4);
    REQUIRE(batch1.size() == states.size());
    REQUIRE(batch4.size() == states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto solo = sre2_exact(states[i], 1);
        CHECK(batch1[i].m2 == solo.m2);
        CHECK(batch1[i].fourth_moment_sum == solo.fourth_moment_sum);
        CHECK(batch4[i].m2 == batch1[i].m2);
    }

    CHECK(sre2_batch({}, 2).empty());

    std::vector<StateVector> zt;
    zt.push_back(StateVector::basis_state(1, 0));
    zt.push_back(mfwht::t_state());
    const auto rzt = sre2_batch(zt, 1);
    CHECK(rzt[0].m2 == 0.0);
    CHECK(std::abs(rzt[1].m2 - kLog2FourThirds) <= 1e-12);

    std::vector<StateVector> mixed;
    mixed.push_back(mfwht::haar_random_state(3, rng));
    mixed.push_back(mfwht::haar_random_state(4, rng));
    CHECK_THROWS_AS(sre2_batch(mixed, 2), mfwht::InvalidInputError);
}

TEST_CASE("engine renormalizes slightly off inputs and rejects bad ones") {
    mfwht::Rng rng({77, 8});
    const auto psi = mfwht::haar_random_state(3, rng);
    const double clean = sre2_exact(psi).m2;

    // scale by (1 + 5e-7): within the renormalization band
    auto near = psi;
    for (auto& a : near.amplitudes()) a *= (1.0 + 5e-7);
    const auto res = sre2_exact(near);
    CHECK(std::abs(res.m2 - clean) <= 1e-9);
    // the input itself must not be mutated
    CHECK(near[0] == psi[0] * (1.0 + 5e-7));

    auto bad = psi;
    for (auto& a : bad.amplitudes()) a *= 1.1;
    CHECK_THROWS_AS(sre2_exact(bad), mfwht::InvalidInputError);
    CHECK_THROWS_AS(sre2_brute_force(bad), mfwht::InvalidInputError);
}

TEST_CASE("invalid worker counts are rejected") {
    const auto psi = StateVector::basis_state(2, 0);
    CHECK_THROWS_AS(sre2_exact(psi, -1), mfwht::InvalidInputError);
}

} // TEST_SUITE
