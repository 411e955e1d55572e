#pragma once

#include <array>
#include <cstdint>

namespace longmem {

// Portable random stream: xoshiro256++ state-initialized with splitmix64.
// Every simulated path is a pure function of the 64-bit seed; Gaussian and
// Student-t variates come from inverse CDFs on the uniform stream so the
// draw count per variate is fixed.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform on the open interval (0,1).
    double uniform01();

    double gaussian();

    // Unit-variance Student-t draw, nu > 2.
    double std_t(double nu);

    static const char* generator_name();

private:
    std::array<std::uint64_t, 4> state_;
};

}  // namespace longmem
