#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sprglab {

/// Deterministic seeded generator with labeled substreams.
///
/// Every stream is a pure function of (root seed, label, index), so inserting
/// or reordering draws in one stream never shifts the values produced by
/// another. Bounded draws use an unbiased multiply-shift rejection scheme
/// instead of std distributions, keeping artifacts byte-identical across
/// standard library implementations.
class Rng {
public:
    explicit Rng(uint64_t seed);

    /// Independent substream keyed by (label, index).
    Rng stream(std::string_view label, uint64_t index = 0) const;

    uint64_t next_u64();

    /// Uniform in [0, bound). bound must be nonzero.
    uint64_t below(uint64_t bound);

    /// Uniform field element in [0, p).
    uint64_t field_element(uint64_t p) { return below(p); }

    bool bit() { return next_u64() >> 63; }

    /// True with probability threshold / 2^64.
    bool bernoulli_raw(uint64_t threshold) { return next_u64() < threshold; }

    uint64_t root() const { return root_; }

private:
    uint64_t root_;
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer; also used to derive stream keys and hash-based maps.
uint64_t mix64(uint64_t x);

} // namespace sprglab
