#include "magicfwht/fwht.hpp"

#include "magicfwht/errors.hpp"

#include <string>

namespace mfwht {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

template <typename T>
void fwht_kernel(std::span<T> data) {
    const std::size_t n = data.size();
    if (!is_pow2(n))
        throw InvalidInputError("fwht: length must be a power of two, got " + std::to_string(n));
    for (std::size_t h = 1; h < n; h <<= 1) {
        for (std::size_t block = 0; block < n; block += h << 1) {
            for (std::size_t i = block; i < block + h; ++i) {
                const T a = data[i];
                const T b = data[i + h];
                data[i] = a + b;
                data[i + h] = a - b;
            }
        }
    }
}

} // namespace

void fwht_in_place(std::span<cplx> data) { fwht_kernel(data); }
void fwht_in_place(std::span<double> data) { fwht_kernel(data); }

void xor_shift_product(std::span<const cplx> psi, std::uint64_t shift, std::span<cplx> out) {
    const std::size_t n = psi.size();
    if (!is_pow2(n))
        throw InvalidInputError("xor_shift_product: length must be a power of two");
    if (out.size() != n)
        throw InvalidInputError("xor_shift_product: output length mismatch");
    if (shift >= n)
        throw InvalidInputError("xor_shift_product: shift out of range");
    if (out.data() == psi.data())
        throw InvalidInputError("xor_shift_product: in-place call not supported");
    for (std::size_t x = 0; x < n; ++x)
        out[x] = std::conj(psi[x ^ shift]) * psi[x];
}

} // namespace mfwht
