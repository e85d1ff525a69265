#pragma once

#include <complex>
#include <cstdint>
#include <span>

namespace mfwht {

using cplx = std::complex<double>;

/// In-place unnormalized Walsh-Hadamard transform over the XOR group:
///
///   out[k] = sum_x (-1)^popcount(k & x) * in[x]
///
/// Length must be a power of two (including 1). The kernel is the classic
/// stride-doubling butterfly, (a, b) -> (a + b, a - b), so applying the
/// transform twice multiplies the input by the length. No scaling is ever
/// applied here; callers own their normalization.
void fwht_in_place(std::span<cplx> data);

/// Real-valued overload, same convention.
void fwht_in_place(std::span<double> data);

/// out[x] = conj(psi[x ^ shift]) * psi[x]. This is the correlation vector
/// whose transform the entropy engine accumulates; it is exposed separately
/// so tests can probe it against direct enumeration. `out` may not alias
/// `psi` and both spans must have equal power-of-two length > shift.
void xor_shift_product(std::span<const cplx> psi, std::uint64_t shift, std::span<cplx> out);

} // namespace mfwht
