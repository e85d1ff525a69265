#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mfwht {

/// Identifies one reproducible random stream. `seed` picks the experiment,
/// `stream` picks an independent substream within it (one per sample, per
/// gate, ...), so parallel sample generation never shares generator state.
struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

/// Deterministic random source. Draws are defined entirely by (seed, stream)
/// and the call sequence: the engine is std::mt19937_64 (bit-exact by
/// standard), and the uniform/normal mappings are implemented here instead of
/// going through std::*_distribution, whose output is implementation-defined.
class Rng {
public:
    explicit Rng(RngSpec spec) : spec_(spec) {
        std::seed_seq seq{
            static_cast<std::uint32_t>(spec.seed),
            static_cast<std::uint32_t>(spec.seed >> 32),
            static_cast<std::uint32_t>(spec.stream),
            static_cast<std::uint32_t>(spec.stream >> 32),
        };
        engine_.seed(seq);
    }

    RngSpec spec() const { return spec_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller; one draw is cached, so draws come in
    /// deterministic pairs.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 == 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    RngSpec spec_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace mfwht
