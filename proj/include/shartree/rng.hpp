#pragma once

#include <cmath>
#include <cstdint>

namespace sh {

// SplitMix64 as a counter-based generator: draw k of stream s is mix(seed, s, k)
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed, std::uint64_t stream = 0) : state_(seed ^ (stream * 0xD1B54A32D192ED03ull)) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // 53-bit uniform on [0, 1)
    double uniform() { return (next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Box-Muller, no cached second value so the stream position stays predictable
    double normal()
    {
        double u1 = uniform(), u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2 * std::log(u1)) * std::cos(2 * 3.14159265358979323846 * u2);
    }

private:
    std::uint64_t state_;
};

} // namespace sh
