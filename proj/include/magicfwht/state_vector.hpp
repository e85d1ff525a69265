#pragma once

#include "magicfwht/fwht.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace mfwht {

/// Dense pure state on n qubits, amplitudes indexed by computational basis
/// state. Qubit 0 is the least significant bit of the index, and basis state
/// |0> on every qubit is index 0.
///
/// Construction enforces normalization in three bands on the L2-norm
/// deviation e = |norm - 1|:
///   e <= 1e-12          accepted bit-for-bit (keeps save/load round trips exact)
///   1e-12 < e <= 1e-6   silently renormalized
///   e > 1e-6            rejected as invalid input
class StateVector {
public:
    /// |00...0>.
    static StateVector computational_zero(int n_qubits);

    /// A single computational basis state |index>.
    static StateVector basis_state(int n_qubits, std::uint64_t index);

    /// Takes ownership of `amps` (size must be 2^n_qubits) and applies the
    /// normalization policy above.
    StateVector(int n_qubits, std::vector<cplx> amps);

    int n_qubits() const { return n_qubits_; }
    std::uint64_t dim() const { return static_cast<std::uint64_t>(amps_.size()); }

    std::span<const cplx> amplitudes() const { return amps_; }
    std::span<cplx> amplitudes() { return amps_; }
    const cplx& operator[](std::uint64_t i) const { return amps_[i]; }

    double norm() const;

    /// Serialize. Extension ".jsonl" selects the line-oriented JSON format
    /// (header line, then one [re, im] line per amplitude); anything else
    /// selects the binary format:
    ///
    ///   bytes  0-15   magic "MAGICFWHT\0" zero-padded to 16 bytes
    ///   bytes 16-19   format version (u32 LE, currently 1)
    ///   bytes 20-23   n_qubits (u32 LE)
    ///   bytes 24-     2^n_qubits amplitudes as (re, im) f64 LE pairs
    void save(const std::filesystem::path& path) const;
    static StateVector load(const std::filesystem::path& path);

    /// Read just the qubit count from a state file header (either format),
    /// so callers can run size guards before loading the amplitudes.
    static int peek_n_qubits(const std::filesystem::path& path);

private:
    int n_qubits_;
    std::vector<cplx> amps_;
};

} // namespace mfwht
