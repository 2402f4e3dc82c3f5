#include "sprglab/sprg.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "sprglab/rng.hpp"

namespace sprglab {

namespace {

// Smallest x >= 1 with x^k >= n.
uint64_t ceil_root(uint64_t n, uint64_t k) {
    if (n <= 1) return 1;
    auto pow_ge = [&](uint64_t x) {
        __uint128_t acc = 1;
        for (uint64_t i = 0; i < k; ++i) {
            acc *= x;
            if (acc >= n) return true;
        }
        return acc >= n;
    };
    uint64_t x = static_cast<uint64_t>(
        std::ceil(std::pow(static_cast<double>(n), 1.0 / static_cast<double>(k))));
    if (x < 1) x = 1;
    while (x > 1 && pow_ge(x - 1)) --x;
    while (!pow_ge(x)) ++x;
    return x;
}

uint64_t ceil_sqrt(uint64_t n) {
    uint64_t x = static_cast<uint64_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    while (x > 0 && (x - 1) * (x - 1) >= n) --x;
    while (x * x < n) ++x;
    return x;
}

uint64_t ceil_positive(long double v, const char* what) {
    if (!(v >= 0)) throw ParameterError(std::string(what) + " must be nonnegative");
    long double c = std::ceil(v);
    if (c > 9e18L) throw ParameterTooLarge(std::string(what) + " overflows");
    return static_cast<uint64_t>(c);
}

} // namespace

SprgParams SprgParams::derive(uint64_t lambda, uint64_t n, uint64_t m, uint64_t d,
                              double delta, PrimeModulus modulus, uint64_t t_slack) {
    SprgParams p;
    p.lambda = lambda;
    p.n = n;
    p.m = m;
    p.d = d;
    p.delta = delta;
    p.modulus = modulus;
    if (d < 1) throw ParameterError("multilinear degree d must be >= 1");
    if (n < 2) throw ParameterError("seed length n must be >= 2");
    p.ell = ceil_root(n, p.tensor_arity());
    p.t_slack = t_slack == 0 ? lambda : t_slack;

    const long double rate_inv = std::pow(static_cast<long double>(p.ell),
                                          static_cast<long double>(delta));  // ell^delta
    // A threshold above m can never fire, so it is clamped there.
    const uint64_t t_raw = ceil_positive(
        static_cast<long double>(m) * std::log2(static_cast<long double>(n)) / rate_inv,
        "bad-output threshold");
    p.t_threshold = std::min<uint64_t>(t_raw, m);
    p.b_buckets = ceil_positive(
        static_cast<long double>(m) * static_cast<long double>(p.t_slack) / rate_inv,
        "bucket count");
    p.c_capacity = p.t_slack * p.t_slack * ceil_positive(rate_inv, "rate power");
    p.c_side = ceil_sqrt(p.c_capacity);
    p.validate();
    return p;
}

void SprgParams::validate() const {
    if (lambda < 1) throw ParameterError("lambda must be >= 1");
    if (n < 2) throw ParameterError("seed length n must be >= 2");
    if (m < 1) throw ParameterError("output length m must be >= 1");
    if (n > (uint64_t{1} << 31) || m > (uint64_t{1} << 31)) {
        throw ParameterTooLarge("n and m must fit 32-bit indices");
    }
    if (d < 1) throw ParameterError("multilinear degree d must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) {
        throw ParameterError("delta must lie in (0, 1), got " + std::to_string(delta));
    }
    if (ell < 1) throw ParameterError("secret dimension ell must be >= 1");
    if (t_slack < 1) throw ParameterError("slack t must be >= 1");
    if (t_threshold < 1) throw ParameterError("threshold T must be >= 1");
    if (t_threshold > m) throw ParameterError("threshold T must be <= m");
    if (b_buckets < 1) throw ParameterError("bucket count B must be >= 1");
    if (c_capacity < 1) throw ParameterError("bucket capacity c must be >= 1");
    if (c_side * c_side < c_capacity) {
        throw ParameterError("matrix side does not cover the bucket capacity");
    }
    if (modulus.p() == 0) throw ParameterError("modulus not set");
    tensor_dim();  // enforces the dimension cap
}

uint64_t SprgParams::tensor_dim() const {
    __uint128_t dim = 1;
    for (uint64_t i = 0; i < tensor_arity(); ++i) {
        dim *= (ell + 1);
        if (dim > kTensorDimCap) {
            throw ParameterTooLarge("secret tensor dimension exceeds cap");
        }
    }
    return static_cast<uint64_t>(dim);
}

double SprgParams::noise_rate() const {
    return std::pow(static_cast<double>(ell), -delta);
}

BucketMaps BucketMaps::build(uint64_t m, uint64_t buckets, uint64_t capacity, uint64_t side,
                             const std::array<uint64_t, 4>& seed) {
    if (buckets < 1 || capacity < 1 || side < 1) {
        throw ParameterError("bucket maps need positive dimensions");
    }
    BucketMaps maps;
    maps.buckets_ = buckets;
    maps.capacity_ = capacity;
    maps.side_ = side;
    maps.seed_ = seed;
    maps.bucket_of_.resize(m);
    maps.cell_of_.assign(m, 0);
    maps.loads_.assign(buckets, 0);

    const uint64_t key = mix64(seed[0] ^ mix64(seed[1] ^ mix64(seed[2] ^ mix64(seed[3]))));
    for (uint64_t j = 0; j < m; ++j) {
        uint64_t h = mix64(key ^ mix64(j + 0x632be59bd9b4e019ULL));
        uint32_t b = static_cast<uint32_t>(
            (static_cast<__uint128_t>(h) * buckets) >> 64);
        maps.bucket_of_[j] = b;
        ++maps.loads_[b];
    }
    maps.capacity_exceeded_ = false;
    for (uint32_t load : maps.loads_) {
        if (load > capacity) {
            maps.capacity_exceeded_ = true;
            break;
        }
    }
    if (!maps.capacity_exceeded_) {
        // Members of each bucket take cells (0,0), (0,1), ... in increasing
        // output order; injective within the bucket since load <= c <= side^2.
        std::vector<uint32_t> next(buckets, 0);
        for (uint64_t j = 0; j < m; ++j) {
            maps.cell_of_[j] = next[maps.bucket_of_[j]]++;
        }
    }
    return maps;
}

SprgIndex sample_index(const SprgParams& params, const Predicate& pred, Rng& rng) {
    params.validate();
    const uint32_t actual_degree = multilinear_expand(pred).degree();
    if (actual_degree != params.d) {
        throw ParameterError("params declare degree " + std::to_string(params.d) +
                             " but the predicate has multilinear degree " +
                             std::to_string(actual_degree));
    }
    Rng prg_rng = rng.stream("prg");
    Rng mat_rng = rng.stream("matrix");
    Rng phi_rng = rng.stream("phi");

    SprgIndex index{
        sample_prg_index(static_cast<uint32_t>(params.n), static_cast<uint32_t>(params.m),
                         pred, prg_rng),
        {},
        random_mat(params.modulus, params.ell, params.n, mat_rng),
        params,
    };
    std::array<uint64_t, 4> phi_seed{phi_rng.next_u64(), phi_rng.next_u64(),
                                     phi_rng.next_u64(), phi_rng.next_u64()};
    index.buckets = BucketMaps::build(params.m, params.b_buckets, params.c_capacity,
                                      params.c_side, phi_seed);
    return index;
}

std::vector<uint32_t> bad_outputs(const PrgIndex& prg, std::span<const uint32_t> err) {
    std::vector<uint8_t> erroneous(prg.hypergraph.n, 0);
    for (uint32_t i : err) {
        if (i >= prg.hypergraph.n) throw ParameterError("error index out of range");
        erroneous[i] = 1;
    }
    std::vector<uint32_t> bad;
    for (uint32_t j = 0; j < prg.hypergraph.m; ++j) {
        for (uint32_t v : prg.hypergraph.edge(j)) {
            if (erroneous[v]) {
                bad.push_back(j);
                break;
            }
        }
    }
    return bad;
}

FlagDecision flag_decision(std::span<const uint32_t> bad, const BucketMaps& buckets,
                           const SprgParams& params) {
    FlagDecision d;
    d.too_many_bad = bad.size() > params.t_threshold;
    d.capacity_exceeded = buckets.capacity_exceeded();
    std::vector<uint32_t> bad_per_bucket(buckets.buckets(), 0);
    for (uint32_t j : bad) {
        if (++bad_per_bucket[buckets.bucket_of(j)] > params.t_slack) {
            d.bucket_overload = true;
        }
    }
    d.flag = (d.too_many_bad || d.capacity_exceeded || d.bucket_overload) ? 0 : 1;
    return d;
}

uint8_t compute_flag(std::span<const uint32_t> bad, const BucketMaps& buckets,
                     const SprgParams& params) {
    return flag_decision(bad, buckets, params).flag;
}

FieldVec correction_vector(const PrgIndex& prg, const PrimeModulus& mod,
                           std::span<const uint8_t> sigma, const FieldVec& noise) {
    if (sigma.size() != prg.hypergraph.n || noise.size() != prg.hypergraph.n) {
        throw DimensionMismatch("seed and noise must have length n");
    }
    std::vector<uint8_t> y = eval_boolean(prg, sigma);
    FieldVec point(prg.hypergraph.n);
    for (size_t i = 0; i < point.size(); ++i) {
        point[i] = mod.add(sigma[i] ? 1 : 0, noise[i]);
    }
    FieldVec corr(prg.hypergraph.m);
    for (uint32_t j = 0; j < prg.hypergraph.m; ++j) {
        uint64_t noisy = eval_multilinear(mod, prg.per_output[j], point);
        corr[j] = mod.sub(y[j], noisy);
    }
    return corr;
}

Correction build_correction(const PrgIndex& prg, const PrimeModulus& mod,
                            std::span<const uint8_t> sigma, const FieldVec& noise,
                            const BucketMaps& buckets, const SprgParams& params) {
    Correction out;
    out.corr = correction_vector(prg, mod, sigma, noise);
    out.mats.assign(params.b_buckets, FieldMat(params.c_side, params.c_side));
    std::vector<std::vector<bool>> occupied(
        params.b_buckets, std::vector<bool>(params.c_side * params.c_side, false));
    for (uint64_t j = 0; j < params.m; ++j) {
        const uint32_t bkt = buckets.bucket_of(j);
        const uint32_t cell = buckets.cell_of(j);
        if (occupied[bkt][cell]) {
            throw MappingViolation("outputs collide at bucket " + std::to_string(bkt) +
                                   " cell " + std::to_string(cell));
        }
        occupied[bkt][cell] = true;
        auto [r, c] = buckets.cell_rc(j);
        out.mats[bkt].at(r, c) = out.corr[j];
    }
    return out;
}

std::pair<FieldMat, FieldMat> factor_sparse(const PrimeModulus& mod, const FieldMat& mat,
                                            uint64_t rank_bound) {
    (void)mod;
    FieldMat u(mat.rows(), rank_bound);
    FieldMat v(rank_bound, mat.cols());
    uint64_t k = 0;
    for (size_t r = 0; r < mat.rows(); ++r) {
        for (size_t c = 0; c < mat.cols(); ++c) {
            const uint64_t val = mat(r, c);
            if (!val) continue;
            if (k >= rank_bound) {
                throw RankOverflow("matrix has more than " + std::to_string(rank_bound) +
                                   " nonzero entries");
            }
            u.at(r, k) = val;
            v.at(k, c) = 1;
            ++k;
        }
    }
    return {std::move(u), std::move(v)};
}

StructuredSeed sample_seed(const SprgIndex& index, Rng& rng, bool keep_debug) {
    const SprgParams& params = index.params;
    const PrimeModulus& mod = params.modulus;

    Rng sigma_rng = rng.stream("sigma");
    std::vector<uint8_t> sigma(params.n);
    for (auto& bit : sigma) bit = sigma_rng.bit() ? 1 : 0;

    LpnParams lpn = LpnParams::derive(params.ell, params.n, params.delta, mod);
    Rng lpn_rng = rng.stream("lpn");
    LpnInstance inst = encode_with_matrix(lpn, index.a, sigma, lpn_rng);

    std::vector<uint32_t> err = noise_support(inst.e);
    std::vector<uint32_t> bad = bad_outputs(index.prg, err);
    FlagDecision decision = flag_decision(bad, index.buckets, params);

    FieldVec corr;
    std::vector<FieldMat> mats;
    if (!index.buckets.capacity_exceeded()) {
        Correction correction =
            build_correction(index.prg, mod, sigma, inst.e, index.buckets, params);
        corr = std::move(correction.corr);
        mats = std::move(correction.mats);
    } else {
        // The cell map is degenerate; the matrices are ill-defined and the
        // flag logic already zeroizes this instance.
        corr = correction_vector(index.prg, mod, sigma, inst.e);
    }

    StructuredSeed seed;
    seed.b = inst.b;
    seed.flag = decision.flag;
    if (decision.flag == 1) {
        seed.u.reserve(params.b_buckets);
        seed.v.reserve(params.b_buckets);
        for (const auto& mat : mats) {
            auto [u, v] = factor_sparse(mod, mat, params.t_slack);
            seed.u.push_back(std::move(u));
            seed.v.push_back(std::move(v));
        }
    } else {
        seed.u.assign(params.b_buckets, FieldMat(params.c_side, params.t_slack));
        seed.v.assign(params.b_buckets, FieldMat(params.t_slack, params.c_side));
    }
    seed.s_tensor = tensor_power(mod, extended_secret(inst.s),
                                 static_cast<uint32_t>(params.tensor_arity()));
    if (keep_debug) {
        seed.debug = DebugTranscript{std::move(sigma), std::move(inst.e), std::move(err),
                                     std::move(bad),   std::move(corr),   std::move(mats)};
    }
    return seed;
}

namespace {

// Accumulated coefficient and the largest b-degree among its contributions.
struct TermAccum {
    uint64_t coeff = 0;
    uint32_t bdeg = 0;
};

struct TensorEntry {
    uint64_t idx;
    uint64_t val;
    uint32_t bdeg;  // number of chosen b-components
};

// Support of the tensor of `factors` padded with constant-coordinate unit
// vectors up to arity K. Factor vectors have length L = ell + 1; their last
// component is the one sourced from b.
void enumerate_half(const std::vector<const FieldVec*>& factors, uint64_t L, uint64_t K,
                    const PrimeModulus& mod, std::vector<TensorEntry>& out) {
    const uint64_t f = factors.size();
    uint64_t pad_offset = 0;
    {
        uint64_t stride = 1;
        for (uint64_t q = K; q-- > f;) {
            pad_offset += (L - 1) * stride;
            stride *= L;
        }
    }
    // Strides of the real positions q = 0..f-1 (first factor most significant).
    std::vector<uint64_t> stride(f, 1);
    {
        uint64_t s = 1;
        for (uint64_t q = 0; q < K - f; ++q) s *= L;  // skip padding strides
        for (uint64_t q = f; q-- > 0;) {
            stride[q] = s;
            s *= L;
        }
    }
    uint64_t combos = 1;
    for (uint64_t q = 0; q < f; ++q) combos *= L;
    out.clear();
    out.reserve(combos);
    std::vector<uint64_t> digit(f, 0);
    for (uint64_t count = 0; count < combos; ++count) {
        uint64_t idx = pad_offset;
        uint64_t val = 1;
        uint32_t bdeg = 0;
        for (uint64_t q = 0; q < f; ++q) {
            idx += digit[q] * stride[q];
            val = mod.mul(val, (*factors[q])[digit[q]]);
            if (digit[q] == L - 1) ++bdeg;
        }
        if (val) out.push_back({idx, val, bdeg});
        // Increment the mixed-radix counter.
        for (uint64_t q = f; q-- > 0;) {
            if (++digit[q] < L) break;
            digit[q] = 0;
        }
    }
}

struct FormStats {
    uint64_t max_private = 0;
    uint32_t max_bdeg = 0;
    uint64_t pair_terms = 0;
    uint64_t linear_terms = 0;
};

void build_form_for_output(const SprgIndex& index, const FieldVec& b, uint32_t j,
                           SparseQuadraticForm& form, FormStats& stats) {
    const SprgParams& params = index.params;
    const PrimeModulus& mod = params.modulus;
    const uint64_t L = params.ell + 1;
    const uint64_t K = params.tensor_arity();

    // Column decoders for the seed positions this output reads.
    std::unordered_map<uint32_t, FieldVec> decoders;
    for (uint32_t v : index.prg.hypergraph.edge(j)) {
        decoders.emplace(v, column_decoder(mod, index.a, b, v));
    }

    std::unordered_map<uint64_t, TermAccum> accum;
    std::vector<TensorEntry> left, right;
    std::vector<const FieldVec*> factors;

    for (const Monomial& mono : index.prg.per_output[j].terms) {
        const uint64_t coeff = mod.reduce_signed(mono.coeff);
        if (coeff == 0) continue;
        if (mono.vars.empty()) {
            form.constant = mod.add(form.constant, coeff);
            continue;
        }
        if (mono.vars.size() > 2 * K) {
            throw MalformedForm("monomial degree exceeds the declared degree bound");
        }
        const size_t half = (mono.vars.size() + 1) / 2;

        factors.clear();
        for (size_t q = 0; q < half; ++q) factors.push_back(&decoders.at(mono.vars[q]));
        enumerate_half(factors, L, K, mod, left);

        if (mono.vars.size() > half) {
            factors.clear();
            for (size_t q = half; q < mono.vars.size(); ++q) {
                factors.push_back(&decoders.at(mono.vars[q]));
            }
            enumerate_half(factors, L, K, mod, right);
            for (const auto& le : left) {
                const uint64_t lc = mod.mul(coeff, le.val);
                for (const auto& re : right) {
                    uint64_t lo = le.idx, hi = re.idx;
                    if (lo > hi) std::swap(lo, hi);
                    auto& slot = accum[(lo << 32) | hi];
                    slot.coeff = mod.add(slot.coeff, mod.mul(lc, re.val));
                    slot.bdeg = std::max(slot.bdeg, le.bdeg + re.bdeg);
                }
            }
        } else {
            for (const auto& le : left) {
                auto& slot = accum[(le.idx << 32) | kConstIndex];
                slot.coeff = mod.add(slot.coeff, mod.mul(coeff, le.val));
                slot.bdeg = std::max(slot.bdeg, le.bdeg);
            }
        }
    }

    form.terms.reserve(accum.size());
    for (const auto& [key, slot] : accum) {
        if (slot.coeff == 0) continue;
        const auto a = static_cast<uint32_t>(key >> 32);
        const auto bidx = static_cast<uint32_t>(key & 0xffffffffu);
        form.terms.push_back({a, bidx, slot.coeff});
        stats.max_bdeg = std::max(stats.max_bdeg, slot.bdeg);
        if (bidx == kConstIndex) {
            ++stats.linear_terms;
            stats.max_private = std::max<uint64_t>(stats.max_private, 1);
        } else {
            ++stats.pair_terms;
            stats.max_private = 2;
        }
    }
    std::sort(form.terms.begin(), form.terms.end(), [](const QuadTerm& x, const QuadTerm& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
}

std::vector<SparseQuadraticForm> build_forms_impl(const SprgIndex& index, const FieldVec& b,
                                                  std::vector<FormStats>* stats_out) {
    if (b.size() != index.params.n) {
        throw DimensionMismatch("public vector b must have length n");
    }
    if (index.a.rows() != index.params.ell || index.a.cols() != index.params.n) {
        throw DimensionMismatch("public matrix does not match the parameters");
    }
    for (const auto& poly : index.prg.per_output) {
        if (poly.degree() > 2 * index.params.tensor_arity()) {
            throw MalformedForm("output degree exceeds the declared degree bound");
        }
    }
    const uint64_t m = index.params.m;
    std::vector<SparseQuadraticForm> forms(m);
    std::vector<FormStats> stats(m);
    bool failed = false;
#pragma omp parallel for schedule(dynamic, 4) if (m > 8)
    for (int64_t j = 0; j < static_cast<int64_t>(m); ++j) {
        try {
            build_form_for_output(index, b, static_cast<uint32_t>(j),
                                  forms[static_cast<size_t>(j)],
                                  stats[static_cast<size_t>(j)]);
        } catch (...) {
#pragma omp atomic write
            failed = true;
        }
    }
    if (failed) throw MalformedForm("form construction failed");
    if (stats_out) *stats_out = std::move(stats);
    return forms;
}

} // namespace

namespace {

DegreeCertificate summarize_stats(const SprgIndex& index,
                                  const std::vector<FormStats>& stats) {
    DegreeCertificate cert;
    cert.outputs = index.params.m;
    for (const auto& s : stats) {
        cert.max_private_degree = std::max(cert.max_private_degree, s.max_private);
        cert.max_coeff_degree = std::max<uint64_t>(cert.max_coeff_degree, s.max_bdeg);
        cert.pair_terms += s.pair_terms;
        cert.linear_terms += s.linear_terms;
    }
    // Factor-product corrections are degree 2 in the private seed as well.
    cert.max_private_degree = std::max<uint64_t>(cert.max_private_degree, 2);
    cert.max_public_degree = cert.max_coeff_degree + 1;  // the flag multiplier
    cert.private_degree_ok = cert.max_private_degree <= 2;
    cert.coeff_degree_ok = cert.max_coeff_degree <= index.params.d;
    return cert;
}

} // namespace

std::vector<SparseQuadraticForm> build_output_forms(const SprgIndex& index,
                                                    const FieldVec& b,
                                                    DegreeCertificate* cert) {
    if (!cert) return build_forms_impl(index, b, nullptr);
    std::vector<FormStats> stats;
    auto forms = build_forms_impl(index, b, &stats);
    *cert = summarize_stats(index, stats);
    return forms;
}

DegreeCertificate certify_degree(const SprgIndex& index, const FieldVec& b) {
    std::vector<FormStats> stats;
    build_forms_impl(index, b, &stats);
    return summarize_stats(index, stats);
}

std::vector<uint8_t> evaluate(const SprgIndex& index, const StructuredSeed& seed) {
    const SprgParams& params = index.params;
    const PrimeModulus& mod = params.modulus;
    if (seed.b.size() != params.n) throw MalformedSeed("public vector has wrong length");
    if (seed.s_tensor.size() != params.tensor_dim()) {
        throw MalformedSeed("secret tensor has wrong dimension");
    }
    if (seed.u.size() != params.b_buckets || seed.v.size() != params.b_buckets) {
        throw MalformedSeed("factor list has wrong length");
    }
    for (uint64_t i = 0; i < params.b_buckets; ++i) {
        if (seed.u[i].rows() != params.c_side || seed.u[i].cols() != params.t_slack ||
            seed.v[i].rows() != params.t_slack || seed.v[i].cols() != params.c_side) {
            throw MalformedSeed("factor matrices have wrong dimensions");
        }
    }

    std::vector<SparseQuadraticForm> forms = build_output_forms(index, seed.b);
    FieldVec base = eval_forms(mod, forms, seed.s_tensor);

    std::vector<uint8_t> out(params.m, 0);
    if (seed.flag == 0) return out;

    for (uint64_t j = 0; j < params.m; ++j) {
        const uint32_t bkt = index.buckets.bucket_of(j);
        auto [r, c] = index.buckets.cell_rc(j);
        const FieldMat& u = seed.u[bkt];
        const FieldMat& v = seed.v[bkt];
        uint64_t entry = 0;
        for (uint64_t k = 0; k < params.t_slack; ++k) {
            entry = mod.add(entry, mod.mul(u(r, k), v(k, c)));
        }
        const uint64_t val = mod.add(base[j], entry);
        if (val > 1) {
            throw MalformedSeed("output " + std::to_string(j) + " is not a bit");
        }
        out[j] = static_cast<uint8_t>(val);
    }
    return out;
}

} // namespace sprglab
