#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace sigdt {

/// Mixes a master seed with a stream index (splitmix64 finalizer). Used to
/// derive replication, writer and component seeds from one master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Seeded generator with distribution code that does not depend on the
/// standard library implementation, so artifacts are reproducible across
/// toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t index(std::uint64_t n);

    /// Standard normal (Marsaglia polar method).
    double normal();

    /// Fisher-Yates permutation of 0..n-1.
    std::vector<std::size_t> permutation(std::size_t n);

    /// `count` distinct values from 0..n-1 in draw order.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace sigdt
