#pragma once

#include <cstdint>
#include <vector>

#include "sprglab/errors.hpp"

namespace sprglab {

class Rng;

/// Default cap on tensor dimensions; generous for desk-scale runs, small
/// enough that a typo in the arity fails fast instead of eating all memory.
inline constexpr uint64_t kTensorDimCap = uint64_t{1} << 24;

/// Prime modulus of a field Z_p. Elements are canonical representatives in
/// [0, p) held in single 64-bit words; moduli from 8 to 62 bits are supported
/// so that products fit in 128-bit intermediates.
class PrimeModulus {
public:
    PrimeModulus() = default;

    /// Wraps a verified prime. Throws ParameterError if p is not prime or is
    /// outside the supported bit range.
    static PrimeModulus from_prime(uint64_t p);

    uint64_t p() const { return p_; }
    uint32_t bit_length() const { return bits_; }

    /// Bytes per serialized element: ceil(bit_length / 8).
    uint32_t element_bytes() const { return (bits_ + 7) / 8; }

    uint64_t add(uint64_t a, uint64_t b) const {
        uint64_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    uint64_t sub(uint64_t a, uint64_t b) const {
        return a >= b ? a - b : a + p_ - b;
    }
    uint64_t neg(uint64_t a) const { return a ? p_ - a : 0; }
    uint64_t mul(uint64_t a, uint64_t b) const {
        return static_cast<uint64_t>(static_cast<__uint128_t>(a) * b % p_);
    }
    uint64_t pow(uint64_t base, uint64_t exp) const;
    uint64_t reduce(uint64_t x) const { return x % p_; }
    uint64_t reduce_signed(int64_t x) const {
        int64_t r = x % static_cast<int64_t>(p_);
        return r < 0 ? static_cast<uint64_t>(r + static_cast<int64_t>(p_))
                     : static_cast<uint64_t>(r);
    }

    bool operator==(const PrimeModulus&) const = default;

private:
    uint64_t p_ = 0;
    uint32_t bits_ = 0;
};

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime_u64(uint64_t n);

/// Uniform prime with exactly `bits` bits. bits must lie in [8, 62].
PrimeModulus sample_prime(uint32_t bits, Rng& rng);

/// Row vector of canonical field elements.
using FieldVec = std::vector<uint64_t>;

/// Dense row-major matrix of canonical field elements.
class FieldMat {
public:
    FieldMat() = default;
    FieldMat(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, 0) {}
    static FieldMat from_entries(size_t rows, size_t cols, FieldVec entries);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    uint64_t operator()(size_t r, size_t c) const { return entries_[r * cols_ + c]; }
    uint64_t& at(size_t r, size_t c) { return entries_[r * cols_ + c]; }
    const FieldVec& entries() const { return entries_; }
    FieldVec& entries() { return entries_; }
    size_t nonzero_count() const;

    bool operator==(const FieldMat&) const = default;

private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    FieldVec entries_;
};

FieldVec random_vec(const PrimeModulus& mod, size_t n, Rng& rng);
FieldMat random_mat(const PrimeModulus& mod, size_t rows, size_t cols, Rng& rng);

uint64_t inner_product(const PrimeModulus& mod, const FieldVec& u, const FieldVec& v);

/// k-fold tensor power of v, flattened row-major: the entry at multi-index
/// (j1..jk) sits at position ((j1*dim + j2)*dim + ...)*dim + jk and equals the
/// product of the chosen coordinates mod p. The first factor is the most
/// significant digit; this layout is relied on by the form builder.
FieldVec tensor_power(const PrimeModulus& mod, const FieldVec& v, uint32_t k,
                      uint64_t dim_cap = kTensorDimCap);
FieldVec tensor_power_serial(const PrimeModulus& mod, const FieldVec& v, uint32_t k,
                             uint64_t dim_cap = kTensorDimCap);

/// Exact mod-p product. The OpenMP variant splits over rows; the serial
/// variant is the reference the tests compare against.
FieldMat mat_mul(const PrimeModulus& mod, const FieldMat& a, const FieldMat& b);
FieldMat mat_mul_serial(const PrimeModulus& mod, const FieldMat& a, const FieldMat& b);

/// row * matrix, returning a row vector.
FieldVec vec_mat_mul(const PrimeModulus& mod, const FieldVec& v, const FieldMat& a);

} // namespace sprglab
