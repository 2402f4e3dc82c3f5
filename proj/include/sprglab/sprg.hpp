#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sprglab/local_prg.hpp"
#include "sprglab/lpn.hpp"
#include "sprglab/quadform.hpp"
#include "sprglab/zp.hpp"

namespace sprglab {

class Rng;

/// Derived parameter block of the structured-seed generator. All integer
/// quantities are ceilings of the defining real-valued formulas.
struct SprgParams {
    uint64_t lambda = 0;
    uint64_t n = 0;       // PRG seed length
    uint64_t m = 0;       // output length
    uint64_t d = 0;       // multilinear degree of the wrapped PRG
    double delta = 0.0;   // noise exponent in (0, 1)
    uint64_t ell = 0;     // secret dimension, ceil(n^(1/ceil(d/2)))
    uint64_t t_slack = 0; // per-bucket slack t (defaults to lambda)
    uint64_t t_threshold = 0;  // tolerated bad outputs T, clamped to m
    uint64_t b_buckets = 0;    // bucket count B
    uint64_t c_capacity = 0;   // per-bucket capacity c
    uint64_t c_side = 0;       // correction matrix side, ceil(sqrt(c))
    PrimeModulus modulus;

    /// Fills in ell, T, B, c, c_side from (lambda, n, m, d, delta, t).
    /// t_slack == 0 selects the default t = lambda.
    static SprgParams derive(uint64_t lambda, uint64_t n, uint64_t m, uint64_t d,
                             double delta, PrimeModulus modulus, uint64_t t_slack = 0);

    void validate() const;

    uint64_t tensor_arity() const { return (d + 1) / 2; }  // ceil(d/2)
    uint64_t tensor_dim() const;                           // (ell+1)^arity
    double noise_rate() const;                             // ell^-delta

    bool operator==(const SprgParams&) const = default;
};

/// Assignment of outputs to buckets and to cells of the per-bucket
/// correction matrices. Realized as a pure function of a stored 256-bit seed
/// so the index stays small; cells are assigned within each bucket in
/// increasing output order, row-major. When some bucket overflows its
/// capacity, every cell collapses to (0, 0) and the flag logic zeroizes the
/// instance.
class BucketMaps {
public:
    BucketMaps() = default;
    static BucketMaps build(uint64_t m, uint64_t buckets, uint64_t capacity, uint64_t side,
                            const std::array<uint64_t, 4>& seed);

    uint64_t m() const { return bucket_of_.size(); }
    uint64_t buckets() const { return buckets_; }
    uint64_t capacity() const { return capacity_; }
    uint64_t side() const { return side_; }
    bool capacity_exceeded() const { return capacity_exceeded_; }

    uint32_t bucket_of(uint64_t j) const { return bucket_of_[j]; }
    /// Linear cell index row*side + col.
    uint32_t cell_of(uint64_t j) const { return cell_of_[j]; }
    std::pair<uint32_t, uint32_t> cell_rc(uint64_t j) const {
        uint32_t c = cell_of_[j];
        return {c / static_cast<uint32_t>(side_), c % static_cast<uint32_t>(side_)};
    }

    const std::vector<uint32_t>& loads() const { return loads_; }
    const std::array<uint64_t, 4>& seed() const { return seed_; }

    bool operator==(const BucketMaps&) const = default;

private:
    uint64_t buckets_ = 0;
    uint64_t capacity_ = 0;
    uint64_t side_ = 0;
    bool capacity_exceeded_ = false;
    std::array<uint64_t, 4> seed_{};
    std::vector<uint32_t> bucket_of_;
    std::vector<uint32_t> cell_of_;
    std::vector<uint32_t> loads_;
};

/// Function index: wrapped PRG index, bucket maps, public matrix, parameters.
struct SprgIndex {
    PrgIndex prg;
    BucketMaps buckets;
    FieldMat a;  // ell x n
    SprgParams params;
};

/// Optional per-seed transcript kept only for verification and experiments;
/// production seeds must not carry it.
struct DebugTranscript {
    std::vector<uint8_t> sigma;
    FieldVec noise;                 // e
    std::vector<uint32_t> err;      // support of e
    std::vector<uint32_t> bad;      // outputs reading an erroneous seed bit
    FieldVec correction;            // y - y' mod p
    std::vector<FieldMat> mats;     // per-bucket correction matrices
};

/// Seed: public part (b, flag), private part (secret tensor, factor pairs).
struct StructuredSeed {
    FieldVec b;
    uint8_t flag = 0;
    FieldVec s_tensor;          // (s || 1)^{tensor arity}
    std::vector<FieldMat> u;    // b_buckets matrices, side x t
    std::vector<FieldMat> v;    // b_buckets matrices, t x side
    std::optional<DebugTranscript> debug;
};

/// Samples a function index. The result is a pure function of (params,
/// predicate, rng root), so the same seed reproduces the same index.
SprgIndex sample_index(const SprgParams& params, const Predicate& pred, Rng& rng);

/// Outputs whose variable set meets the erroneous index set.
std::vector<uint32_t> bad_outputs(const PrgIndex& prg, std::span<const uint32_t> err);

struct FlagDecision {
    bool too_many_bad = false;      // |BAD| > T
    bool capacity_exceeded = false; // some bucket load > c
    bool bucket_overload = false;   // some bucket holds > t bad outputs
    uint8_t flag = 1;
};
FlagDecision flag_decision(std::span<const uint32_t> bad, const BucketMaps& buckets,
                           const SprgParams& params);
uint8_t compute_flag(std::span<const uint32_t> bad, const BucketMaps& buckets,
                     const SprgParams& params);

/// y - y' where y is the Boolean evaluation on sigma and y' the multilinear
/// evaluation at the field point sigma + e.
FieldVec correction_vector(const PrgIndex& prg, const PrimeModulus& mod,
                           std::span<const uint8_t> sigma, const FieldVec& noise);

struct Correction {
    FieldVec corr;
    std::vector<FieldMat> mats;
};

/// Correction vector scattered into the per-bucket matrices. Throws
/// MappingViolation if two outputs land on the same cell, which cannot happen
/// unless the maps collapsed after a capacity overflow.
Correction build_correction(const PrgIndex& prg, const PrimeModulus& mod,
                            std::span<const uint8_t> sigma, const FieldVec& noise,
                            const BucketMaps& buckets, const SprgParams& params);

/// Exact factorization M = U*V for a matrix with at most `rank_bound`
/// nonzeros: the k-th nonzero (r, c, val) contributes U[r,k] = val and
/// V[k,c] = 1. Throws RankOverflow beyond the bound.
std::pair<FieldMat, FieldMat> factor_sparse(const PrimeModulus& mod, const FieldMat& mat,
                                            uint64_t rank_bound);

/// Full seed sampling pipeline: PRG seed, noisy encoding, flag, correction,
/// factorization, secret tensor.
StructuredSeed sample_seed(const SprgIndex& index, Rng& rng, bool keep_debug = false);

struct DegreeCertificate;

/// Per-output degree-2 forms over the secret tensor that evaluate the PRG on
/// the encoded (noisy) seed. Coefficients are public functions of (A, b).
/// When `cert` is given, the structural degree report is filled in from the
/// same construction pass.
std::vector<SparseQuadraticForm> build_output_forms(const SprgIndex& index,
                                                    const FieldVec& b,
                                                    DegreeCertificate* cert = nullptr);

/// Structural complexity report gathered while building the forms.
struct DegreeCertificate {
    uint64_t max_private_degree = 0;  // over the private seed; 2 by construction
    uint64_t max_coeff_degree = 0;    // of coefficients, in the entries of b
    uint64_t max_public_degree = 0;   // including the flag multiplier
    uint64_t pair_terms = 0;
    uint64_t linear_terms = 0;
    uint64_t outputs = 0;
    bool private_degree_ok = false;   // max_private_degree <= 2
    bool coeff_degree_ok = false;     // max_coeff_degree <= d
};
DegreeCertificate certify_degree(const SprgIndex& index, const FieldVec& b);

/// Evaluation from (public seed, private seed) alone: per-output form plus
/// the matching factor-product entry, all multiplied by the flag. Returns a
/// 0/1 vector; throws MalformedSeed on dimension mismatch or when a non-bit
/// value appears with flag = 1.
std::vector<uint8_t> evaluate(const SprgIndex& index, const StructuredSeed& seed);

} // namespace sprglab
