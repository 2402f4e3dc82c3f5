#include "sprglab/local_prg.hpp"

#include <algorithm>
#include <bit>

#include "sprglab/rng.hpp"

namespace sprglab {

Predicate::Predicate(uint32_t locality, std::vector<uint8_t> truth_table)
    : locality_(locality), truth_table_(std::move(truth_table)) {
    if (locality_ < 1 || locality_ > kMaxLocality) {
        throw ParameterError("predicate locality must be in [1, " +
                             std::to_string(kMaxLocality) + "]");
    }
    if (truth_table_.size() != (size_t{1} << locality_)) {
        throw ParameterError("truth table length must be 2^locality");
    }
    for (auto& v : truth_table_) v = v ? 1 : 0;
}

Predicate Predicate::from_hex(uint32_t locality, std::string_view hex) {
    if (locality < 1 || locality > kMaxLocality) {
        throw ParameterError("predicate locality must be in [1, " +
                             std::to_string(kMaxLocality) + "]");
    }
    const size_t rows = size_t{1} << locality;
    std::vector<uint8_t> table(rows, 0);
    // Hex string encodes the table LSB-first: nibble i covers rows 4i..4i+3.
    size_t row = 0;
    for (size_t i = hex.size(); i-- > 0 && row < rows;) {
        char c = hex[i];
        int nib;
        if (c >= '0' && c <= '9') nib = c - '0';
        else if (c >= 'a' && c <= 'f') nib = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') nib = c - 'A' + 10;
        else throw ParseError("invalid hex digit in truth table");
        for (int b = 0; b < 4 && row < rows; ++b, ++row) {
            table[row] = (nib >> b) & 1;
        }
    }
    return Predicate(locality, std::move(table));
}

std::string Predicate::truth_table_hex() const {
    const size_t rows = truth_table_.size();
    const size_t nibbles = (rows + 3) / 4;
    std::string out(nibbles, '0');
    for (size_t i = 0; i < nibbles; ++i) {
        int nib = 0;
        for (int b = 0; b < 4; ++b) {
            size_t row = i * 4 + b;
            if (row < rows && truth_table_[row]) nib |= 1 << b;
        }
        out[nibbles - 1 - i] = "0123456789abcdef"[nib];
    }
    return out;
}

Predicate Predicate::constant(uint32_t locality, bool value) {
    return Predicate(locality, std::vector<uint8_t>(size_t{1} << locality, value ? 1 : 0));
}

Predicate Predicate::xor_n(uint32_t locality) {
    std::vector<uint8_t> table(size_t{1} << locality);
    for (size_t i = 0; i < table.size(); ++i) {
        table[i] = static_cast<uint8_t>(std::popcount(i) & 1);
    }
    return Predicate(locality, std::move(table));
}

Predicate Predicate::and_n(uint32_t locality) {
    std::vector<uint8_t> table(size_t{1} << locality, 0);
    table.back() = 1;
    return Predicate(locality, std::move(table));
}

Predicate Predicate::majority(uint32_t locality) {
    if (locality % 2 == 0) throw ParameterError("majority needs odd locality");
    std::vector<uint8_t> table(size_t{1} << locality);
    for (size_t i = 0; i < table.size(); ++i) {
        table[i] = std::popcount(i) > static_cast<int>(locality / 2) ? 1 : 0;
    }
    return Predicate(locality, std::move(table));
}

Predicate Predicate::xor_and() {
    std::vector<uint8_t> table(32);
    for (uint32_t i = 0; i < 32; ++i) {
        uint32_t x0 = i & 1, x1 = (i >> 1) & 1, x2 = (i >> 2) & 1;
        uint32_t x3 = (i >> 3) & 1, x4 = (i >> 4) & 1;
        table[i] = static_cast<uint8_t>(x0 ^ x1 ^ x2 ^ (x3 & x4));
    }
    return Predicate(5, std::move(table));
}

void Hypergraph::validate() const {
    if (edges.size() != static_cast<size_t>(m) * locality) {
        throw ParameterError("hypergraph edge list has wrong length");
    }
    for (uint32_t j = 0; j < m; ++j) {
        auto e = edge(j);
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] >= n) throw ParameterError("hyperedge index out of range");
            for (size_t k = i + 1; k < e.size(); ++k) {
                if (e[i] == e[k]) throw ParameterError("hyperedge indices must be distinct");
            }
        }
    }
}

Hypergraph sample_hypergraph(uint32_t n, uint32_t m, uint32_t locality, Rng& rng) {
    if (n < locality) {
        throw ParameterError("seed length n=" + std::to_string(n) +
                             " is smaller than the locality " + std::to_string(locality));
    }
    if (m < 1) throw ParameterError("output length m must be >= 1");
    Hypergraph g;
    g.n = n;
    g.m = m;
    g.locality = locality;
    g.edges.resize(static_cast<size_t>(m) * locality);
    for (uint32_t j = 0; j < m; ++j) {
        uint32_t* e = g.edges.data() + static_cast<size_t>(j) * locality;
        for (uint32_t i = 0; i < locality; ++i) {
            for (;;) {
                uint32_t cand = static_cast<uint32_t>(rng.below(n));
                bool dup = false;
                for (uint32_t k = 0; k < i; ++k) {
                    if (e[k] == cand) {
                        dup = true;
                        break;
                    }
                }
                if (!dup) {
                    e[i] = cand;
                    break;
                }
            }
        }
    }
    return g;
}

uint32_t MultilinearPoly::degree() const {
    uint32_t d = 0;
    for (const auto& t : terms) d = std::max<uint32_t>(d, static_cast<uint32_t>(t.vars.size()));
    return d;
}

MultilinearPoly multilinear_expand(const Predicate& pred) {
    const uint32_t loc = pred.locality();
    const size_t rows = size_t{1} << loc;
    std::vector<int64_t> coeff(rows);
    for (size_t mask = 0; mask < rows; ++mask) {
        coeff[mask] = pred.eval(static_cast<uint32_t>(mask)) ? 1 : 0;
    }
    // Subset Mobius transform: coeff[S] = sum over T subset of S of (-1)^{|S\T|} f(T).
    for (uint32_t b = 0; b < loc; ++b) {
        const size_t bit = size_t{1} << b;
        for (size_t mask = 0; mask < rows; ++mask) {
            if (mask & bit) coeff[mask] -= coeff[mask ^ bit];
        }
    }
    MultilinearPoly poly;
    for (size_t mask = 0; mask < rows; ++mask) {
        if (coeff[mask] == 0) continue;
        Monomial mono;
        mono.coeff = coeff[mask];
        for (uint32_t b = 0; b < loc; ++b) {
            if (mask & (size_t{1} << b)) mono.vars.push_back(b);
        }
        poly.terms.push_back(std::move(mono));
    }
    return poly;
}

MultilinearPoly predicate_to_multilinear(const Predicate& pred, const PrimeModulus& mod) {
    MultilinearPoly poly = multilinear_expand(pred);
    for (auto& t : poly.terms) {
        t.coeff = static_cast<int64_t>(mod.reduce_signed(t.coeff));
    }
    std::erase_if(poly.terms, [](const Monomial& t) { return t.coeff == 0; });
    return poly;
}

int64_t eval_multilinear_bool(const MultilinearPoly& poly, std::span<const uint8_t> bits) {
    int64_t acc = 0;
    for (const auto& t : poly.terms) {
        bool on = true;
        for (uint32_t v : t.vars) {
            if (!bits[v]) {
                on = false;
                break;
            }
        }
        if (on) acc += t.coeff;
    }
    return acc;
}

uint64_t eval_multilinear(const PrimeModulus& mod, const MultilinearPoly& poly,
                          const FieldVec& point) {
    uint64_t acc = 0;
    for (const auto& t : poly.terms) {
        uint64_t val = mod.reduce_signed(t.coeff);
        for (uint32_t v : t.vars) {
            if (v >= point.size()) throw DimensionMismatch("polynomial variable out of range");
            val = mod.mul(val, point[v]);
        }
        acc = mod.add(acc, val);
    }
    return acc;
}

namespace {

MultilinearPoly lift_to_global(const MultilinearPoly& local, std::span<const uint32_t> edge) {
    MultilinearPoly out;
    out.terms.reserve(local.terms.size());
    for (const auto& t : local.terms) {
        Monomial mono;
        mono.coeff = t.coeff;
        mono.vars.reserve(t.vars.size());
        for (uint32_t v : t.vars) mono.vars.push_back(edge[v]);
        std::sort(mono.vars.begin(), mono.vars.end());
        out.terms.push_back(std::move(mono));
    }
    std::sort(out.terms.begin(), out.terms.end(),
              [](const Monomial& a, const Monomial& b) { return a.vars < b.vars; });
    return out;
}

} // namespace

PrgIndex assemble_prg_index(Predicate pred, Hypergraph graph) {
    graph.validate();
    if (graph.locality != pred.locality()) {
        throw ParameterError("hypergraph arity does not match predicate locality");
    }
    MultilinearPoly local = multilinear_expand(pred);
    PrgIndex index{std::move(pred), std::move(graph), {}, local.degree()};
    index.per_output.reserve(index.hypergraph.m);
    for (uint32_t j = 0; j < index.hypergraph.m; ++j) {
        index.per_output.push_back(lift_to_global(local, index.hypergraph.edge(j)));
    }
    return index;
}

PrgIndex sample_prg_index(uint32_t n, uint32_t m, const Predicate& pred, Rng& rng) {
    return assemble_prg_index(pred, sample_hypergraph(n, m, pred.locality(), rng));
}

std::vector<uint8_t> eval_boolean(const PrgIndex& index, std::span<const uint8_t> sigma) {
    if (sigma.size() != index.hypergraph.n) {
        throw DimensionMismatch("seed length does not match the index");
    }
    std::vector<uint8_t> out(index.hypergraph.m);
    for (uint32_t j = 0; j < index.hypergraph.m; ++j) {
        auto e = index.hypergraph.edge(j);
        uint32_t mask = 0;
        for (size_t i = 0; i < e.size(); ++i) {
            if (sigma[e[i]]) mask |= uint32_t{1} << i;
        }
        out[j] = index.predicate.eval(mask) ? 1 : 0;
    }
    return out;
}

OutputView output_multilinear(const PrgIndex& index, uint32_t j) {
    if (j >= index.hypergraph.m) throw ParameterError("output index out of range");
    auto e = index.hypergraph.edge(j);
    std::vector<uint32_t> vars(e.begin(), e.end());
    std::sort(vars.begin(), vars.end());
    return OutputView{&index.per_output[j], std::move(vars)};
}

} // namespace sprglab
