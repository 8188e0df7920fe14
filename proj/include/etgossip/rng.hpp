#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>

namespace etg {

// Tags separating the independent substreams derived from one base seed.
enum class Purpose : std::uint64_t {
    topology = 1,
    objective = 2,
    init = 3,
    gradient = 4,
    link = 5,
    activation = 6,
};

// Counter-based random stream.
//
// A stream is identified by a path of integers (base seed, purpose, rep,
// round, node, ...). The path is folded through the SplitMix64 finalizer
// into a 64-bit key; draws are SplitMix64 outputs of key + k * golden for
// k = 1, 2, ... . Two streams with different paths are statistically
// independent and a stream never depends on how many draws any other
// stream has consumed, so results do not depend on evaluation order.
//
// Normals use the Box-Muller transform (both outputs are used).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t key) noexcept : state_(key) {}

    static RandomStream derive(std::uint64_t seed, Purpose purpose,
                               std::initializer_list<std::uint64_t> path) noexcept;

    std::uint64_t next_u64() noexcept;
    // Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    // Unbiased integer in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept;
    double normal() noexcept;
    bool bernoulli(double p) noexcept;

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept;

// Substream helpers for the per-round draws of one run.
RandomStream gradient_stream(std::uint64_t seed, std::uint64_t rep, std::uint64_t t,
                             std::uint64_t node) noexcept;
RandomStream link_stream(std::uint64_t seed, std::uint64_t rep, std::uint64_t t,
                         std::uint64_t sender, std::uint64_t receiver) noexcept;
RandomStream activation_stream(std::uint64_t seed, std::uint64_t rep, std::uint64_t t,
                               std::uint64_t node) noexcept;

}  // namespace etg
