#pragma once

// Independent reference computations the unit and acceptance tests check the
// library against. These deliberately avoid the library's own kernels: they
// work from raw 128-bit integer arithmetic and brute-force enumeration.

#include <cstdint>
#include <span>
#include <vector>

#include "sprglab/local_prg.hpp"
#include "sprglab/quadform.hpp"
#include "sprglab/zp.hpp"

namespace oracle {

inline bool trial_division_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
    return static_cast<uint64_t>(static_cast<__uint128_t>(a) * b % p);
}

inline uint64_t addmod(uint64_t a, uint64_t b, uint64_t p) {
    return (a + b) % p;
}

// Plain triple-loop product with 128-bit accumulation.
inline sprglab::FieldMat schoolbook_mat_mul(uint64_t p, const sprglab::FieldMat& a,
                                            const sprglab::FieldMat& b) {
    sprglab::FieldMat c(a.rows(), b.cols());
    for (size_t i = 0; i < a.rows(); ++i) {
        for (size_t j = 0; j < b.cols(); ++j) {
            uint64_t acc = 0;
            for (size_t k = 0; k < a.cols(); ++k) {
                acc = addmod(acc, mulmod(a(i, k), b(k, j), p), p);
            }
            c.at(i, j) = acc;
        }
    }
    return c;
}

// Term-by-term accumulation of a quadratic form, independent of the library
// evaluator.
inline uint64_t naive_form_eval(uint64_t p, const sprglab::SparseQuadraticForm& q,
                                const sprglab::FieldVec& s) {
    uint64_t acc = q.constant % p;
    for (const auto& t : q.terms) {
        __uint128_t v = t.coeff;
        v = v * s[t.a] % p;
        if (t.b != sprglab::kConstIndex) v = v * s[t.b] % p;
        acc = addmod(acc, static_cast<uint64_t>(v), p);
    }
    return acc;
}

// Multilinear evaluation at a Boolean point straight from the term list.
inline int64_t naive_poly_bool(const sprglab::MultilinearPoly& poly,
                               std::span<const uint8_t> bits) {
    int64_t acc = 0;
    for (const auto& t : poly.terms) {
        int64_t prod = t.coeff;
        for (uint32_t v : t.vars) prod *= bits[v] ? 1 : 0;
        acc += prod;
    }
    return acc;
}

// Multilinear evaluation at a field point with 128-bit arithmetic.
inline uint64_t naive_poly_field(uint64_t p, const sprglab::MultilinearPoly& poly,
                                 const sprglab::FieldVec& x) {
    uint64_t acc = 0;
    for (const auto& t : poly.terms) {
        int64_t c = t.coeff % static_cast<int64_t>(p);
        if (c < 0) c += static_cast<int64_t>(p);
        __uint128_t prod = static_cast<uint64_t>(c);
        for (uint32_t v : t.vars) prod = prod * x[v] % p;
        acc = addmod(acc, static_cast<uint64_t>(prod), p);
    }
    return acc;
}

// Brute-force scan of every edge against the erroneous index set.
inline std::vector<uint32_t> edge_scan_bad(const sprglab::Hypergraph& graph,
                                           std::span<const uint32_t> err) {
    std::vector<uint32_t> bad;
    for (uint32_t j = 0; j < graph.m; ++j) {
        bool hit = false;
        for (uint32_t v : graph.edge(j)) {
            for (uint32_t e : err) {
                if (v == e) {
                    hit = true;
                    break;
                }
            }
            if (hit) break;
        }
        if (hit) bad.push_back(j);
    }
    return bad;
}

} // namespace oracle
