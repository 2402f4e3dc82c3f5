#pragma once

#include <cstdint>
#include <vector>

#include "sprglab/sprg.hpp"

namespace sprglab {

/// Parameters of the bit-packing wrapper that turns Boolean outputs into
/// bounded integer outputs resilient to small additive perturbations.
struct DrgParams {
    uint64_t lambda = 0;
    uint64_t n = 0;
    uint64_t b_bound = 0;      // magnitude bound B on adversarial perturbations
    double tau_prime = 0.0;    // target stretch exponent, below the wrapped one
    uint64_t m_prime = 0;      // output length, ceil(n^tau_prime)
    uint64_t t_bits = 0;       // bits packed per output, ceil(log2(lambda*m'*B))

    static DrgParams derive(uint64_t lambda, uint64_t n, uint64_t b_bound, double tau_prime,
                            uint64_t wrapped_m);
    void validate() const;
};

struct DrgIndex {
    SprgIndex sprg;
    DrgParams params;
};

/// Integer output vector; entries lie in [0, 2^t - 1].
struct DrgOutput {
    std::vector<uint64_t> y;
    bool zeroized = false;  // fired because m < m' * t
};

/// Samples a wrapped index. Throws ParameterError when the target stretch is
/// not below the wrapped generator's.
DrgIndex drg_setup(const SprgParams& sprg_params, const Predicate& pred, uint64_t b_bound,
                   double tau_prime, Rng& rng);

/// Seed sampling is a pass-through of the wrapped generator.
StructuredSeed drg_sample_seed(const DrgIndex& index, Rng& rng, bool keep_debug = false);

/// Little-endian packing of t consecutive output bits per coordinate; the
/// all-zero vector when the wrapped output is too short (m < m' * t).
DrgOutput drg_evaluate(const DrgIndex& index, const StructuredSeed& seed);

/// Packing applied to a raw bit string; exposed for the experiment harness.
DrgOutput pack_bits(const DrgParams& params, std::span<const uint8_t> bits);

/// Inverse of the packing on the consumed prefix.
std::vector<uint8_t> unpack_bits(const DrgParams& params, const DrgOutput& out);

struct Rational {
    uint64_t num = 0;
    uint64_t den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Analytic per-instance statistical-distance bound m' * B / (2^t - 1) for
/// smudging a [-B, B] perturbation under t uniform bits per coordinate.
Rational smudging_bound(const DrgParams& params);

/// Exact statistical distance between the uniform distribution on
/// [0, 2^t - 1] and its shift by beta, as a reduced-free rational:
/// min(|beta|, 2^t) / 2^t. Computed by enumerating the symmetric difference
/// of the two supports.
Rational shift_distance(uint64_t t_bits, int64_t beta);

} // namespace sprglab
