#include "magicfwht/state_vector.hpp"

#include "magicfwht/errors.hpp"
#include "magicfwht/reduction.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

static_assert(std::endian::native == std::endian::little,
              "state files are little-endian; a byte-swapping reader is not implemented");

namespace mfwht {

namespace {

constexpr int kMaxQubits = 30;
constexpr char kMagic[16] = {'M', 'A', 'G', 'I', 'C', 'F', 'W', 'H', 'T', '\0',
                             0, 0, 0, 0, 0, 0};
constexpr std::uint32_t kVersion = 1;

void check_n_qubits(int n) {
    if (n < 1 || n > kMaxQubits)
        throw InvalidInputError("n_qubits must be in [1, " + std::to_string(kMaxQubits) +
                                "], got " + std::to_string(n));
}

double norm_of(std::span<const cplx> amps) {
    std::vector<double> sq(amps.size());
    for (std::size_t i = 0; i < amps.size(); ++i) sq[i] = std::norm(amps[i]);
    return std::sqrt(pairwise_sum(sq));
}

} // namespace

StateVector StateVector::computational_zero(int n_qubits) {
    return basis_state(n_qubits, 0);
}

StateVector StateVector::basis_state(int n_qubits, std::uint64_t index) {
    check_n_qubits(n_qubits);
    const auto d = std::uint64_t{1} << n_qubits;
    if (index >= d)
        throw InvalidInputError("basis state index " + std::to_string(index) +
                                " out of range for " + std::to_string(n_qubits) + " qubits");
    std::vector<cplx> amps(d, cplx{0.0, 0.0});
    amps[index] = cplx{1.0, 0.0};
    return StateVector(n_qubits, std::move(amps));
}

StateVector::StateVector(int n_qubits, std::vector<cplx> amps)
    : n_qubits_(n_qubits), amps_(std::move(amps)) {
    check_n_qubits(n_qubits_);
    const auto d = std::uint64_t{1} << n_qubits_;
    if (amps_.size() != d)
        throw InvalidInputError("amplitude count " + std::to_string(amps_.size()) +
                                " does not match 2^" + std::to_string(n_qubits_));
    const double nrm = norm_of(amps_);
    const double dev = std::abs(nrm - 1.0);
    if (dev > 1e-6)
        throw InvalidInputError("state norm " + std::to_string(nrm) +
                                " deviates from 1 by more than 1e-6");
    if (dev > 1e-12) {
        const double inv = 1.0 / nrm;
        for (auto& a : amps_) a *= inv;
    }
}

double StateVector::norm() const { return norm_of(amps_); }

void StateVector::save(const std::filesystem::path& path) const {
    if (path.extension() == ".jsonl") {
        std::ofstream out(path);
        if (!out) throw InvalidInputError("cannot open " + path.string() + " for writing");
        nlohmann::json header = {
            {"format", "magicfwht-state"}, {"version", kVersion}, {"n_qubits", n_qubits_}};
        out << header.dump() << '\n';
        for (const auto& a : amps_) {
            nlohmann::json line = {a.real(), a.imag()};
            out << line.dump() << '\n';
        }
        if (!out) throw InvalidInputError("write to " + path.string() + " failed");
        return;
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInputError("cannot open " + path.string() + " for writing");
    out.write(kMagic, sizeof kMagic);
    const std::uint32_t version = kVersion;
    const std::uint32_t n = static_cast<std::uint32_t>(n_qubits_);
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(amps_.data()),
              static_cast<std::streamsize>(amps_.size() * sizeof(cplx)));
    if (!out) throw InvalidInputError("write to " + path.string() + " failed");
}

int StateVector::peek_n_qubits(const std::filesystem::path& path) {
    if (path.extension() == ".jsonl") {
        std::ifstream in(path);
        if (!in) throw InvalidInputError("cannot open " + path.string());
        std::string line;
        if (!std::getline(in, line))
            throw InvalidInputError(path.string() + ": missing header line");
        nlohmann::json header;
        try {
            header = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw InvalidInputError(path.string() + ": bad header: " + e.what());
        }
        const int n = header.value("n_qubits", 0);
        check_n_qubits(n);
        return n;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInputError("cannot open " + path.string());
    char magic[16];
    std::uint32_t version = 0, n = 0;
    in.read(magic, sizeof magic);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw InvalidInputError(path.string() + ": not a magicfwht state file");
    check_n_qubits(static_cast<int>(n));
    return static_cast<int>(n);
}

StateVector StateVector::load(const std::filesystem::path& path) {
    if (path.extension() == ".jsonl") {
        std::ifstream in(path);
        if (!in) throw InvalidInputError("cannot open " + path.string());
        std::string line;
        if (!std::getline(in, line))
            throw InvalidInputError(path.string() + ": missing header line");
        nlohmann::json header;
        try {
            header = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw InvalidInputError(path.string() + ": bad header: " + e.what());
        }
        if (header.value("format", "") != "magicfwht-state")
            throw InvalidInputError(path.string() + ": not a magicfwht-state file");
        if (header.value("version", 0u) != kVersion)
            throw InvalidInputError(path.string() + ": unsupported version");
        const int n = header.value("n_qubits", 0);
        check_n_qubits(n);
        const auto d = std::uint64_t{1} << n;
        std::vector<cplx> amps;
        amps.reserve(d);
        for (std::uint64_t i = 0; i < d; ++i) {
            if (!std::getline(in, line))
                throw InvalidInputError(path.string() + ": expected " + std::to_string(d) +
                                        " amplitude lines, got " + std::to_string(i));
            nlohmann::json entry;
            try {
                entry = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                throw InvalidInputError(path.string() + ": bad amplitude line: " + e.what());
            }
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
                !entry[1].is_number())
                throw InvalidInputError(path.string() + ": amplitude lines must be [re, im]");
            amps.emplace_back(entry[0].get<double>(), entry[1].get<double>());
        }
        return StateVector(n, std::move(amps));
    }

    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInputError("cannot open " + path.string());
    char magic[16];
    std::uint32_t version = 0, n = 0;
    in.read(magic, sizeof magic);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw InvalidInputError(path.string() + ": not a magicfwht state file");
    if (version != kVersion)
        throw InvalidInputError(path.string() + ": unsupported file version " +
                                std::to_string(version));
    check_n_qubits(static_cast<int>(n));
    const auto d = std::uint64_t{1} << n;
    std::vector<cplx> amps(d);
    in.read(reinterpret_cast<char*>(amps.data()),
            static_cast<std::streamsize>(d * sizeof(cplx)));
    if (!in)
        throw InvalidInputError(path.string() + ": truncated amplitude block");
    in.peek();
    if (!in.eof())
        throw InvalidInputError(path.string() + ": trailing bytes after amplitude block");
    return StateVector(static_cast<int>(n), std::move(amps));
}

} // namespace mfwht
