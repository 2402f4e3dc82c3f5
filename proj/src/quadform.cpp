#include "sprglab/quadform.hpp"

#include <algorithm>

namespace sprglab {

void SparseQuadraticForm::canonicalize(const PrimeModulus& mod) {
    for (auto& t : terms) {
        if (t.b != kConstIndex && t.a > t.b) std::swap(t.a, t.b);
    }
    std::sort(terms.begin(), terms.end(), [](const QuadTerm& x, const QuadTerm& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
    std::vector<QuadTerm> merged;
    merged.reserve(terms.size());
    for (const auto& t : terms) {
        if (!merged.empty() && merged.back().a == t.a && merged.back().b == t.b) {
            merged.back().coeff = mod.add(merged.back().coeff, t.coeff);
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const QuadTerm& t) { return t.coeff == 0; });
    terms = std::move(merged);
}

uint64_t eval_quadratic(const PrimeModulus& mod, const SparseQuadraticForm& q,
                        const FieldVec& s) {
    uint64_t acc = q.constant;
    const size_t dim = s.size();
    for (const auto& t : q.terms) {
        if (t.a >= dim || (t.b != kConstIndex && t.b >= dim)) {
            throw MalformedForm("quadratic form references index outside the seed vector");
        }
        uint64_t val = mod.mul(t.coeff, s[t.a]);
        if (t.b != kConstIndex) val = mod.mul(val, s[t.b]);
        acc = mod.add(acc, val);
    }
    return acc;
}

FieldVec eval_forms_serial(const PrimeModulus& mod,
                           std::span<const SparseQuadraticForm> forms, const FieldVec& s) {
    FieldVec out(forms.size());
    for (size_t j = 0; j < forms.size(); ++j) {
        out[j] = eval_quadratic(mod, forms[j], s);
    }
    return out;
}

FieldVec eval_forms(const PrimeModulus& mod, std::span<const SparseQuadraticForm> forms,
                    const FieldVec& s) {
    // Validate up front so no exception needs to escape the parallel region.
    const size_t dim = s.size();
    for (const auto& q : forms) {
        for (const auto& t : q.terms) {
            if (t.a >= dim || (t.b != kConstIndex && t.b >= dim)) {
                throw MalformedForm("quadratic form references index outside the seed vector");
            }
        }
    }
    FieldVec out(forms.size());
#pragma omp parallel for schedule(dynamic, 16) if (forms.size() > 32)
    for (int64_t j = 0; j < static_cast<int64_t>(forms.size()); ++j) {
        const auto& q = forms[static_cast<size_t>(j)];
        uint64_t acc = q.constant;
        for (const auto& t : q.terms) {
            uint64_t val = mod.mul(t.coeff, s[t.a]);
            if (t.b != kConstIndex) val = mod.mul(val, s[t.b]);
            acc = mod.add(acc, val);
        }
        out[static_cast<size_t>(j)] = acc;
    }
    return out;
}

} // namespace sprglab
