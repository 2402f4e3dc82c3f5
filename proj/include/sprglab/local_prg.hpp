#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sprglab/zp.hpp"

namespace sprglab {

class Rng;

inline constexpr uint32_t kMaxLocality = 7;

/// Boolean predicate on a constant number of inputs, given by its truth
/// table. Table index bit k carries the value of variable k.
class Predicate {
public:
    Predicate(uint32_t locality, std::vector<uint8_t> truth_table);
    static Predicate from_hex(uint32_t locality, std::string_view hex);

    uint32_t locality() const { return locality_; }
    bool eval(uint32_t input_mask) const { return truth_table_[input_mask] != 0; }
    const std::vector<uint8_t>& truth_table() const { return truth_table_; }
    std::string truth_table_hex() const;

    static Predicate constant(uint32_t locality, bool value);
    static Predicate xor_n(uint32_t locality);
    static Predicate and_n(uint32_t locality);
    static Predicate majority(uint32_t locality);  // odd locality
    /// x0 ^ x1 ^ x2 ^ (x3 & x4); the default locality-5 candidate.
    static Predicate xor_and();

    bool operator==(const Predicate&) const = default;

private:
    uint32_t locality_;
    std::vector<uint8_t> truth_table_;
};

/// m ordered hyperedges of `locality` distinct vertices in [0, n).
struct Hypergraph {
    uint32_t n = 0;
    uint32_t m = 0;
    uint32_t locality = 0;
    std::vector<uint32_t> edges;  // flat, edge j occupies [j*locality, (j+1)*locality)

    std::span<const uint32_t> edge(uint32_t j) const {
        return {edges.data() + static_cast<size_t>(j) * locality, locality};
    }
    void validate() const;
};

/// Uniform hypergraph: each edge is an ordered tuple of distinct indices.
Hypergraph sample_hypergraph(uint32_t n, uint32_t m, uint32_t locality, Rng& rng);

/// One monomial of a multilinear polynomial: a sorted set of variable indices
/// and an integer coefficient. Coefficients are kept over Z (they are bounded
/// by 2^locality) and reduced mod p at evaluation time.
struct Monomial {
    std::vector<uint32_t> vars;
    int64_t coeff = 0;

    bool operator==(const Monomial&) const = default;
};

struct MultilinearPoly {
    std::vector<Monomial> terms;  // sorted by variable set, no zero coefficients

    uint32_t degree() const;

    bool operator==(const MultilinearPoly&) const = default;
};

/// Unique multilinear expansion of the predicate over Z, computed by Mobius
/// inversion over the subset lattice of its inputs.
MultilinearPoly multilinear_expand(const Predicate& pred);

/// Expansion with coefficients reduced into [0, p).
MultilinearPoly predicate_to_multilinear(const Predicate& pred, const PrimeModulus& mod);

/// Evaluation at a Boolean point, over Z.
int64_t eval_multilinear_bool(const MultilinearPoly& poly, std::span<const uint8_t> bits);

/// Evaluation at an arbitrary field point, mod p.
uint64_t eval_multilinear(const PrimeModulus& mod, const MultilinearPoly& poly,
                          const FieldVec& point);

/// Function index of the local PRG: predicate, hypergraph, and the
/// per-output multilinear polynomials lifted to global seed indices.
struct PrgIndex {
    Predicate predicate;
    Hypergraph hypergraph;
    std::vector<MultilinearPoly> per_output;
    uint32_t degree = 0;  // max multilinear degree across outputs

    uint32_t n() const { return hypergraph.n; }
    uint32_t m() const { return hypergraph.m; }
};

/// Samples a PRG index: hypergraph plus precomputed output polynomials.
/// Throws ParameterError when n < locality or m < 1.
PrgIndex sample_prg_index(uint32_t n, uint32_t m, const Predicate& pred, Rng& rng);

/// Rebuilds the per-output polynomials from predicate and hypergraph
/// (deterministic; used when loading serialized indices).
PrgIndex assemble_prg_index(Predicate pred, Hypergraph graph);

/// Applies the predicate edge by edge.
std::vector<uint8_t> eval_boolean(const PrgIndex& index, std::span<const uint8_t> sigma);

/// Output polynomial j together with the seed indices it reads (sorted).
struct OutputView {
    const MultilinearPoly* poly;
    std::vector<uint32_t> vars;
};
OutputView output_multilinear(const PrgIndex& index, uint32_t j);

} // namespace sprglab
