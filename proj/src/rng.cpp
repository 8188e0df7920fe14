#include "etgossip/rng.hpp"

#include <cmath>
#include <numbers>

namespace etg {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

RandomStream RandomStream::derive(std::uint64_t seed, Purpose purpose,
                                  std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t key = splitmix64_mix(seed + kGolden);
    key = splitmix64_mix(key ^ splitmix64_mix(static_cast<std::uint64_t>(purpose) + kGolden));
    for (std::uint64_t component : path) {
        key = splitmix64_mix(key ^ splitmix64_mix(component + kGolden));
    }
    return RandomStream(key);
}

std::uint64_t RandomStream::next_u64() noexcept {
    state_ += kGolden;
    return splitmix64_mix(state_);
}

double RandomStream::uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::below(std::uint64_t bound) noexcept {
    // Rejection of the low remainder band keeps the result unbiased.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = next_u64();
        if (r >= threshold) return r % bound;
    }
}

double RandomStream::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

bool RandomStream::bernoulli(double p) noexcept {
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return uniform() < p;
}

RandomStream gradient_stream(std::uint64_t seed, std::uint64_t rep, std::uint64_t t,
                             std::uint64_t node) noexcept {
    return RandomStream::derive(seed, Purpose::gradient, {rep, t, node});
}

RandomStream link_stream(std::uint64_t seed, std::uint64_t rep, std::uint64_t t,
                         std::uint64_t sender, std::uint64_t receiver) noexcept {
    return RandomStream::derive(seed, Purpose::link, {rep, t, sender, receiver});
}

RandomStream activation_stream(std::uint64_t seed, std::uint64_t rep, std::uint64_t t,
                               std::uint64_t node) noexcept {
    return RandomStream::derive(seed, Purpose::activation, {rep, t, node});
}

}  // namespace etg
