#include "longmem/rng.hpp"

#include "longmem/dist.hpp"

#include <cmath>

namespace longmem {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform01() {
    // 53 random bits shifted into (0,1); the +0.5 keeps 0 and 1 unreachable.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::gaussian() {
    return normal_quantile(uniform01());
}

double Rng::std_t(double nu) {
    const double t = student_t_quantile(uniform01(), nu);
    return t * std::sqrt((nu - 2.0) / nu);
}

const char* Rng::generator_name() {
    return "xoshiro256++ (splitmix64-seeded), inverse-CDF variates";
}

}  // namespace longmem
