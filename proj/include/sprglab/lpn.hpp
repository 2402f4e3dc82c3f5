#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sprglab/zp.hpp"

namespace sprglab {

class Rng;

/// Parameters of a noisy linear encoding over Z_p: secret dimension ell,
/// sample count n, and per-coordinate hit rate r (nominally ell^-delta).
struct LpnParams {
    uint64_t ell = 0;
    uint64_t n = 0;
    double delta = 0.0;
    double rate = 0.0;
    PrimeModulus modulus;

    static LpnParams derive(uint64_t ell, uint64_t n, double delta, PrimeModulus modulus);
    void validate() const;
};

/// One encoding b = s*A + e + sigma. The noise vector keeps its exact draw so
/// the error support can be recovered.
struct LpnInstance {
    FieldMat a;  // ell x n
    FieldVec s;  // 1 x ell
    FieldVec e;  // 1 x n, sparse
    FieldVec b;  // 1 x n
};

/// Each coordinate is 0 with probability 1-r and uniform in Z_p otherwise
/// (so it may still be 0 by chance; the support of e is what counts as
/// erroneous).
FieldVec sample_noise(const LpnParams& params, Rng& rng);

/// Fresh (A, s, e) and b = s*A + e + sigma, exact mod p.
LpnInstance encode(const LpnParams& params, std::span<const uint8_t> sigma, Rng& rng);

/// Same encoding against a fixed public matrix A.
LpnInstance encode_with_matrix(const LpnParams& params, const FieldMat& a,
                               std::span<const uint8_t> sigma, Rng& rng);

/// Indices where the noise is nonzero.
std::vector<uint32_t> noise_support(const FieldVec& e);

/// Column decoder c_i = (-a_i || b_i): paired with sbar = s || 1 it satisfies
/// <c_i, sbar> = sigma_i + e_i.
FieldVec column_decoder(const PrimeModulus& mod, const FieldMat& a, const FieldVec& b,
                        uint32_t i);

/// The secret extended by a constant-1 coordinate.
FieldVec extended_secret(const FieldVec& s);

} // namespace sprglab
