#include "sprglab/zp.hpp"

#include <bit>

#include "sprglab/rng.hpp"

namespace sprglab {

namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(static_cast<__uint128_t>(a) * b % m);
}

uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t acc = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) acc = mulmod_u64(acc, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return acc;
}

} // namespace

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    uint64_t d = n - 1;
    int s = std::countr_zero(d);
    d >>= s;
    // This base set decides primality exactly for every 64-bit integer.
    for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

PrimeModulus PrimeModulus::from_prime(uint64_t p) {
    if (!is_prime_u64(p)) {
        throw ParameterError("modulus " + std::to_string(p) + " is not prime");
    }
    uint32_t bits = static_cast<uint32_t>(std::bit_width(p));
    if (bits < 8 || bits > 62) {
        throw ParameterError("modulus bit length " + std::to_string(bits) +
                             " outside supported range [8, 62]");
    }
    PrimeModulus mod;
    mod.p_ = p;
    mod.bits_ = bits;
    return mod;
}

uint64_t PrimeModulus::pow(uint64_t base, uint64_t exp) const {
    return powmod_u64(base, exp, p_);
}

PrimeModulus sample_prime(uint32_t bits, Rng& rng) {
    if (bits < 8 || bits > 62) {
        throw ParameterError("prime bit length must be in [8, 62], got " + std::to_string(bits));
    }
    const uint64_t lo = uint64_t{1} << (bits - 1);
    const uint64_t span = uint64_t{1} << (bits - 1);
    for (;;) {
        uint64_t cand = lo + rng.below(span);
        cand |= 1;
        if (is_prime_u64(cand)) return PrimeModulus::from_prime(cand);
    }
}

FieldMat FieldMat::from_entries(size_t rows, size_t cols, FieldVec entries) {
    if (entries.size() != rows * cols) {
        throw DimensionMismatch("matrix entry count does not match dimensions");
    }
    FieldMat m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.entries_ = std::move(entries);
    return m;
}

size_t FieldMat::nonzero_count() const {
    size_t count = 0;
    for (uint64_t x : entries_)
        if (x) ++count;
    return count;
}

FieldVec random_vec(const PrimeModulus& mod, size_t n, Rng& rng) {
    FieldVec v(n);
    for (auto& x : v) x = rng.field_element(mod.p());
    return v;
}

FieldMat random_mat(const PrimeModulus& mod, size_t rows, size_t cols, Rng& rng) {
    FieldMat m(rows, cols);
    for (auto& x : m.entries()) x = rng.field_element(mod.p());
    return m;
}

uint64_t inner_product(const PrimeModulus& mod, const FieldVec& u, const FieldVec& v) {
    if (u.size() != v.size()) {
        throw DimensionMismatch("inner product on vectors of different lengths");
    }
    uint64_t acc = 0;
    for (size_t i = 0; i < u.size(); ++i) {
        acc = mod.add(acc, mod.mul(u[i], v[i]));
    }
    return acc;
}

namespace {

uint64_t tensor_dim_checked(size_t base, uint32_t k, uint64_t cap) {
    __uint128_t dim = 1;
    for (uint32_t i = 0; i < k; ++i) {
        dim *= base;
        if (dim > cap) {
            throw ParameterTooLarge("tensor dimension exceeds cap of " + std::to_string(cap));
        }
    }
    return static_cast<uint64_t>(dim);
}

} // namespace

FieldVec tensor_power_serial(const PrimeModulus& mod, const FieldVec& v, uint32_t k,
                             uint64_t dim_cap) {
    if (k < 1) throw ParameterError("tensor power requires k >= 1");
    tensor_dim_checked(v.size(), k, dim_cap);
    FieldVec out = v;
    for (uint32_t step = 1; step < k; ++step) {
        FieldVec next(out.size() * v.size());
        for (size_t a = 0; a < out.size(); ++a) {
            for (size_t b = 0; b < v.size(); ++b) {
                next[a * v.size() + b] = mod.mul(out[a], v[b]);
            }
        }
        out = std::move(next);
    }
    return out;
}

FieldVec tensor_power(const PrimeModulus& mod, const FieldVec& v, uint32_t k,
                      uint64_t dim_cap) {
    if (k < 1) throw ParameterError("tensor power requires k >= 1");
    const uint64_t dim = tensor_dim_checked(v.size(), k, dim_cap);
    if (dim < (uint64_t{1} << 16)) return tensor_power_serial(mod, v, k, dim_cap);

    // Build the first k-1 factors serially (a small prefix of the output),
    // then split the dominant final expansion across threads.
    FieldVec prefix = tensor_power_serial(mod, v, k - 1, dim_cap);
    FieldVec out(prefix.size() * v.size());
    const size_t base = v.size();
#pragma omp parallel for schedule(static)
    for (int64_t a = 0; a < static_cast<int64_t>(prefix.size()); ++a) {
        const uint64_t pa = prefix[static_cast<size_t>(a)];
        uint64_t* row = out.data() + static_cast<size_t>(a) * base;
        for (size_t b = 0; b < base; ++b) row[b] = mod.mul(pa, v[b]);
    }
    return out;
}

FieldMat mat_mul_serial(const PrimeModulus& mod, const FieldMat& a, const FieldMat& b) {
    if (a.cols() != b.rows()) {
        throw DimensionMismatch("mat_mul: inner dimensions disagree");
    }
    FieldMat c(a.rows(), b.cols());
    for (size_t i = 0; i < a.rows(); ++i) {
        for (size_t k = 0; k < a.cols(); ++k) {
            const uint64_t aik = a(i, k);
            if (!aik) continue;
            for (size_t j = 0; j < b.cols(); ++j) {
                c.at(i, j) = mod.add(c.at(i, j), mod.mul(aik, b(k, j)));
            }
        }
    }
    return c;
}

FieldMat mat_mul(const PrimeModulus& mod, const FieldMat& a, const FieldMat& b) {
    if (a.cols() != b.rows()) {
        throw DimensionMismatch("mat_mul: inner dimensions disagree");
    }
    FieldMat c(a.rows(), b.cols());
    const int64_t rows = static_cast<int64_t>(a.rows());
#pragma omp parallel for schedule(static) if (a.rows() * a.cols() * b.cols() > (1u << 15))
    for (int64_t i = 0; i < rows; ++i) {
        for (size_t k = 0; k < a.cols(); ++k) {
            const uint64_t aik = a(i, k);
            if (!aik) continue;
            for (size_t j = 0; j < b.cols(); ++j) {
                c.at(i, j) = mod.add(c.at(i, j), mod.mul(aik, b(k, j)));
            }
        }
    }
    return c;
}

FieldVec vec_mat_mul(const PrimeModulus& mod, const FieldVec& v, const FieldMat& a) {
    if (v.size() != a.rows()) {
        throw DimensionMismatch("vec_mat_mul: dimensions disagree");
    }
    FieldVec out(a.cols(), 0);
    for (size_t k = 0; k < a.rows(); ++k) {
        const uint64_t vk = v[k];
        if (!vk) continue;
        for (size_t j = 0; j < a.cols(); ++j) {
            out[j] = mod.add(out[j], mod.mul(vk, a(k, j)));
        }
    }
    return out;
}

} // namespace sprglab
