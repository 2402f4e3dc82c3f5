#include "sprglab/drg.hpp"

#include <bit>
#include <cmath>

#include "sprglab/rng.hpp"

namespace sprglab {

DrgParams DrgParams::derive(uint64_t lambda, uint64_t n, uint64_t b_bound, double tau_prime,
                            uint64_t wrapped_m) {
    if (b_bound < 1) throw ParameterError("perturbation bound B must be >= 1");
    if (lambda < 1) throw ParameterError("lambda must be >= 1");
    if (n < 2) throw ParameterError("seed length n must be >= 2");
    if (!(tau_prime > 0.0)) throw ParameterError("target stretch must be positive");

    const long double target = std::pow(static_cast<long double>(n),
                                        static_cast<long double>(tau_prime));
    if (target >= static_cast<long double>(wrapped_m)) {
        throw ParameterError("target stretch must stay below the wrapped generator's");
    }
    DrgParams p;
    p.lambda = lambda;
    p.n = n;
    p.b_bound = b_bound;
    p.tau_prime = tau_prime;
    p.m_prime = static_cast<uint64_t>(std::ceil(target));
    if (p.m_prime < 1) p.m_prime = 1;

    const __uint128_t product = static_cast<__uint128_t>(lambda) * p.m_prime * b_bound;
    if (product > (static_cast<__uint128_t>(1) << 62)) {
        throw ParameterTooLarge("packing width overflows the supported range");
    }
    const auto x = static_cast<uint64_t>(product);
    p.t_bits = x <= 1 ? 1 : static_cast<uint64_t>(std::bit_width(x - 1));
    p.validate();
    return p;
}

void DrgParams::validate() const {
    if (t_bits < 1) throw ParameterError("packing width t must be >= 1");
    if (t_bits > 62) throw ParameterTooLarge("packing width t must be <= 62");
    if (m_prime < 1) throw ParameterError("output length must be >= 1");
}

DrgIndex drg_setup(const SprgParams& sprg_params, const Predicate& pred, uint64_t b_bound,
                   double tau_prime, Rng& rng) {
    DrgParams params = DrgParams::derive(sprg_params.lambda, sprg_params.n, b_bound,
                                         tau_prime, sprg_params.m);
    Rng inner = rng.stream("sprg-index");
    return DrgIndex{sample_index(sprg_params, pred, inner), params};
}

StructuredSeed drg_sample_seed(const DrgIndex& index, Rng& rng, bool keep_debug) {
    return sample_seed(index.sprg, rng, keep_debug);
}

DrgOutput pack_bits(const DrgParams& params, std::span<const uint8_t> bits) {
    DrgOutput out;
    const uint64_t needed = params.m_prime * params.t_bits;
    if (bits.size() < needed) {
        out.y.assign(params.m_prime, 0);
        out.zeroized = true;
        return out;
    }
    out.y.resize(params.m_prime);
    for (uint64_t i = 0; i < params.m_prime; ++i) {
        uint64_t v = 0;
        for (uint64_t j = 0; j < params.t_bits; ++j) {
            if (bits[i * params.t_bits + j]) v |= uint64_t{1} << j;
        }
        out.y[i] = v;
    }
    return out;
}

std::vector<uint8_t> unpack_bits(const DrgParams& params, const DrgOutput& out) {
    std::vector<uint8_t> bits(params.m_prime * params.t_bits, 0);
    for (uint64_t i = 0; i < out.y.size(); ++i) {
        for (uint64_t j = 0; j < params.t_bits; ++j) {
            bits[i * params.t_bits + j] = static_cast<uint8_t>((out.y[i] >> j) & 1);
        }
    }
    return bits;
}

DrgOutput drg_evaluate(const DrgIndex& index, const StructuredSeed& seed) {
    std::vector<uint8_t> z = evaluate(index.sprg, seed);
    return pack_bits(index.params, z);
}

Rational smudging_bound(const DrgParams& params) {
    const uint64_t den = (uint64_t{1} << params.t_bits) - 1;
    const __uint128_t num = static_cast<__uint128_t>(params.m_prime) * params.b_bound;
    if (num > ~uint64_t{0}) throw ParameterTooLarge("bound numerator overflows");
    return Rational{static_cast<uint64_t>(num), den};
}

Rational shift_distance(uint64_t t_bits, int64_t beta) {
    if (t_bits < 1 || t_bits > 62) throw ParameterError("t must lie in [1, 62]");
    const uint64_t range = uint64_t{1} << t_bits;
    const uint64_t shift = static_cast<uint64_t>(beta < 0 ? -beta : beta);
    // The two supports are intervals of equal length; each distribution puts
    // 1/2^t on its own points. Half the L1 difference is the number of
    // non-overlapping points on one side.
    return Rational{std::min(shift, range), range};
}

} // namespace sprglab
