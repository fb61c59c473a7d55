#pragma once

#include <cstdint>
#include <limits>

namespace trivirus {

/// PCG64 (XSL-RR output on a 128-bit LCG), the generator behind every seeded
/// draw in the library. Output is platform independent for a given seed.
/// Satisfies UniformRandomBitGenerator.
class Pcg64 {
public:
    using result_type = std::uint64_t;
    __extension__ using uint128 = unsigned __int128;

    explicit Pcg64(std::uint64_t seed, std::uint64_t stream = 0xda3e39cb94b95bdbULL);

    result_type operator()();

    /// Uniform on the open interval (0, 1), 53 random bits.
    double uniform();

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

private:
    uint128 state_ = 0;
    uint128 increment_ = 0;
};

} // namespace trivirus
