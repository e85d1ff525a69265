#include "magicfwht/errors.hpp"
#include "magicfwht/state_vector.hpp"

#include "oracle_utils.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

using mfwht::cplx;
using mfwht::StateVector;

namespace {

bool bitwise_equal(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() != b.n_qubits()) return false;
    const auto sa = a.amplitudes();
    const auto sb = b.amplitudes();
    return std::memcmp(sa.data(), sb.data(), sa.size() * sizeof(cplx)) == 0;
}

StateVector sample_state() {
    mfwht::Rng rng({2024, 17});
    auto amps = oracle::random_vector(8, rng);
    double norm2 = 0.0;
    for (const auto& a : amps) norm2 += std::norm(a);
    for (auto& a : amps) a /= std::sqrt(norm2);
    return StateVector(3, std::move(amps));
}

} // namespace

TEST_SUITE("state_vector") {

TEST_CASE("computational zero and basis states") {
    const auto z = StateVector::computational_zero(2);
    CHECK(z.n_qubits() == 2);
    CHECK(z.dim() == 4);
    CHECK(z[0] == cplx{1.0, 0.0});
    for (std::uint64_t i = 1; i < 4; ++i) CHECK(z[i] == cplx{0.0, 0.0});

    const auto b = StateVector::basis_state(3, 5);
    CHECK(b[5] == cplx{1.0, 0.0});
    CHECK(b.norm() == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(StateVector::basis_state(2, 4), mfwht::InvalidInputError);
    CHECK_THROWS_AS(StateVector::computational_zero(-1), mfwht::InvalidInputError);
    CHECK_THROWS_AS(StateVector::computational_zero(31), mfwht::InvalidInputError);
}

TEST_CASE("constructor rejects dimension mismatches") {
    std::vector<cplx> three(3, cplx{0.5, 0.0});
    CHECK_THROWS_AS(StateVector(2, std::move(three)), mfwht::InvalidInputError);
}

TEST_CASE("norm policy: deviations <= 1e-12 are kept bit-for-bit") {
    const double eps = 4e-13;
    std::vector<cplx> amps{cplx{std::sqrt(0.5) * (1.0 + eps), 0.0},
                           cplx{0.0, std::sqrt(0.5) * (1.0 + eps)}};
    const auto copy = amps;
    const StateVector psi(1, std::move(amps));
    CHECK(psi[0] == copy[0]);
    CHECK(psi[1] == copy[1]);
    CHECK(psi.norm() != 1.0); // deliberately not rescaled
}

TEST_CASE("norm policy: deviations in (1e-12, 1e-6] are renormalized") {
    const double eps = 3e-8;
    std::vector<cplx> amps{cplx{std::sqrt(0.5) * (1.0 + eps), 0.0},
                           cplx{std::sqrt(0.5) * (1.0 + eps), 0.0}};
    const auto copy = amps;
    const StateVector psi(1, std::move(amps));
    CHECK(psi[0] != copy[0]);
    CHECK(std::abs(psi.norm() - 1.0) <= 1e-14);
}

TEST_CASE("norm policy: deviations > 1e-6 are rejected") {
    std::vector<cplx> amps{cplx{1.1, 0.0}, cplx{0.0, 0.0}};
    CHECK_THROWS_AS(StateVector(1, std::move(amps)), mfwht::InvalidInputError);
    std::vector<cplx> zero(4, cplx{0.0, 0.0});
    CHECK_THROWS_AS(StateVector(2, std::move(zero)), mfwht::InvalidInputError);
}

TEST_CASE("binary save/load round trip is bit-identical") {
    const auto dir = oracle::test_dir("sv_bin");
    const auto psi = sample_state();
    const auto path = dir / "state.mfst";
    psi.save(path);
    const auto back = StateVector::load(path);
    CHECK(bitwise_equal(psi, back));
    std::filesystem::remove_all(dir);
}

TEST_CASE("jsonl save/load round trip is bit-identical") {
    const auto dir = oracle::test_dir("sv_jsonl");
    const auto psi = sample_state();
    const auto path = dir / "state.jsonl";
    psi.save(path);

    // header line is the documented one
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == R"({"format":"magicfwht-state","n_qubits":3,"version":1})");

    const auto back = StateVector::load(path);
    CHECK(bitwise_equal(psi, back));
    std::filesystem::remove_all(dir);
}

TEST_CASE("peek_n_qubits reads headers without loading amplitudes") {
    const auto dir = oracle::test_dir("sv_peek");
    const auto psi = sample_state();
    psi.save(dir / "s.mfst");
    psi.save(dir / "s.jsonl");
    CHECK(StateVector::peek_n_qubits(dir / "s.mfst") == 3);
    CHECK(StateVector::peek_n_qubits(dir / "s.jsonl") == 3);
    CHECK_THROWS_AS(StateVector::peek_n_qubits(dir / "missing.mfst"),
                    mfwht::InvalidInputError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("load rejects malformed binary files") {
    const auto dir = oracle::test_dir("sv_bad");

    SUBCASE("missing file") {
        CHECK_THROWS_AS(StateVector::load(dir / "nope.mfst"), mfwht::InvalidInputError);
    }
    SUBCASE("bad magic") {
        std::ofstream out(dir / "bad_magic.mfst", std::ios::binary);
        out.write("NOTTHEMAGICVALUE", 16);
        const std::uint32_t v = 1, n = 1;
        out.write(reinterpret_cast<const char*>(&v), 4);
        out.write(reinterpret_cast<const char*>(&n), 4);
        const double amp[4] = {1.0, 0.0, 0.0, 0.0};
        out.write(reinterpret_cast<const char*>(amp), sizeof(amp));
        out.close();
        CHECK_THROWS_AS(StateVector::load(dir / "bad_magic.mfst"), mfwht::InvalidInputError);
    }
    SUBCASE("truncated payload") {
        const auto psi = sample_state();
        psi.save(dir / "full.mfst");
        std::ifstream in(dir / "full.mfst", std::ios::binary);
        std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
        in.close();
        std::ofstream out(dir / "cut.mfst", std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 8));
        out.close();
        CHECK_THROWS_AS(StateVector::load(dir / "cut.mfst"), mfwht::InvalidInputError);
    }
    SUBCASE("trailing bytes") {
        const auto psi = sample_state();
        psi.save(dir / "pad.mfst");
        std::ofstream out(dir / "pad.mfst", std::ios::binary | std::ios::app);
        out.write("extra", 5);
        out.close();
        CHECK_THROWS_AS(StateVector::load(dir / "pad.mfst"), mfwht::InvalidInputError);
    }
    SUBCASE("unsupported version") {
        std::ofstream out(dir / "v2.mfst", std::ios::binary);
        char magic[16] = {'M', 'A', 'G', 'I', 'C', 'F', 'W', 'H', 'T', '\0'};
        out.write(magic, 16);
        const std::uint32_t v = 2, n = 0;
        out.write(reinterpret_cast<const char*>(&v), 4);
        out.write(reinterpret_cast<const char*>(&n), 4);
        const double amp[2] = {1.0, 0.0};
        out.write(reinterpret_cast<const char*>(amp), sizeof(amp));
        out.close();
        CHECK_THROWS_AS(StateVector::load(dir / "v2.mfst"), mfwht::InvalidInputError);
    }
    SUBCASE("jsonl with wrong amplitude count") {
        std::ofstream out(dir / "short.jsonl");
        out << R"({"format":"magicfwht-state","version":1,"n_qubits":2})" << "\n";
        out << "[1.0,0.0]\n"; // 3 lines missing
        out.close();
        CHECK_THROWS_AS(StateVector::load(dir / "short.jsonl"), mfwht::InvalidInputError);
    }
    SUBCASE("jsonl with garbage header") {
        std::ofstream out(dir / "garbage.jsonl");
        out << "not json\n[1.0,0.0]\n[0.0,0.0]\n";
        out.close();
        CHECK_THROWS_AS(StateVector::load(dir / "garbage.jsonl"), mfwht::InvalidInputError);
    }

    std::filesystem::remove_all(dir);
}

TEST_CASE("load applies the same norm policy as the constructor") {
    const auto dir = oracle::test_dir("sv_norm");
    // Hand-write a binary file holding a badly normalized state.
    std::ofstream out(dir / "bad_norm.mfst", std::ios::binary);
    char magic[16] = {'M', 'A', 'G', 'I', 'C', 'F', 'W', 'H', 'T', '\0'};
    out.write(magic, 16);
    const std::uint32_t v = 1, n = 1;
    out.write(reinterpret_cast<const char*>(&v), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    const double amp[4] = {2.0, 0.0, 0.0, 0.0};
    out.write(reinterpret_cast<const char*>(amp), sizeof(amp));
    out.close();
    CHECK_THROWS_AS(StateVector::load(dir / "bad_norm.mfst"), mfwht::InvalidInputError);
    std::filesystem::remove_all(dir);
}

} // TEST_SUITE
