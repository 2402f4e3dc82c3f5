#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sprglab/zp.hpp"

namespace sprglab {

/// Marks a purely linear term (second factor is the constant 1).
inline constexpr uint32_t kConstIndex = 0xffffffffu;

struct QuadTerm {
    uint32_t a;      // private-seed index
    uint32_t b;      // private-seed index, or kConstIndex for a linear term
    uint64_t coeff;  // canonical field element

    bool operator==(const QuadTerm&) const = default;
};

/// Sparse polynomial of degree <= 2 in the private-seed vector. Canonical
/// layout: a <= b within each term, terms sorted by (a, b), no duplicate
/// pairs, no zero coefficients.
struct SparseQuadraticForm {
    std::vector<QuadTerm> terms;
    uint64_t constant = 0;

    /// Restores the canonical layout: orders pairs, merges duplicates mod p,
    /// and drops zero coefficients.
    void canonicalize(const PrimeModulus& mod);

    bool operator==(const SparseQuadraticForm&) const = default;
};

/// Evaluates the form at s: sum of coeff*s[a]*s[b] over pair terms, plus
/// coeff*s[a] over linear terms, plus the constant, all mod p. Throws
/// MalformedForm on out-of-range indices.
uint64_t eval_quadratic(const PrimeModulus& mod, const SparseQuadraticForm& q,
                        const FieldVec& s);

/// Batch evaluation of many forms at a common point; OpenMP over forms.
/// The serial variant is the reference kept for testing.
FieldVec eval_forms(const PrimeModulus& mod, std::span<const SparseQuadraticForm> forms,
                    const FieldVec& s);
FieldVec eval_forms_serial(const PrimeModulus& mod,
                           std::span<const SparseQuadraticForm> forms, const FieldVec& s);

} // namespace sprglab
