#include "sprglab/lpn.hpp"

#include <cmath>

#include "sprglab/rng.hpp"

namespace sprglab {

LpnParams LpnParams::derive(uint64_t ell, uint64_t n, double delta, PrimeModulus modulus) {
    LpnParams p;
    p.ell = ell;
    p.n = n;
    p.delta = delta;
    p.rate = std::pow(static_cast<double>(ell), -delta);
    p.modulus = modulus;
    p.validate();
    return p;
}

void LpnParams::validate() const {
    if (ell < 1) throw ParameterError("secret dimension ell must be >= 1");
    if (n < 1) throw ParameterError("sample count n must be >= 1");
    if (!(rate >= 0.0 && rate <= 1.0)) throw ParameterError("noise rate must lie in [0, 1]");
    if (modulus.p() == 0) throw ParameterError("modulus not set");
}

namespace {

uint64_t rate_threshold(double rate) {
    if (rate >= 1.0) return ~uint64_t{0};
    if (rate <= 0.0) return 0;
    long double scaled = static_cast<long double>(rate) * 18446744073709551616.0L;
    return static_cast<uint64_t>(scaled);
}

} // namespace

FieldVec sample_noise(const LpnParams& params, Rng& rng) {
    params.validate();
    FieldVec e(params.n, 0);
    const uint64_t threshold = rate_threshold(params.rate);
    const uint64_t p = params.modulus.p();
    for (auto& x : e) {
        if (params.rate >= 1.0 || rng.bernoulli_raw(threshold)) {
            x = rng.field_element(p);
        }
    }
    return e;
}

LpnInstance encode_with_matrix(const LpnParams& params, const FieldMat& a,
                               std::span<const uint8_t> sigma, Rng& rng) {
    params.validate();
    if (sigma.size() != params.n) {
        throw DimensionMismatch("message length does not match sample count");
    }
    if (a.rows() != params.ell || a.cols() != params.n) {
        throw DimensionMismatch("public matrix has wrong dimensions");
    }
    const auto& mod = params.modulus;
    LpnInstance inst;
    inst.a = a;
    inst.s = random_vec(mod, params.ell, rng);
    inst.e = sample_noise(params, rng);
    inst.b = vec_mat_mul(mod, inst.s, inst.a);
    for (size_t i = 0; i < params.n; ++i) {
        inst.b[i] = mod.add(inst.b[i], mod.add(inst.e[i], sigma[i] ? 1 : 0));
    }
    return inst;
}

LpnInstance encode(const LpnParams& params, std::span<const uint8_t> sigma, Rng& rng) {
    params.validate();
    FieldMat a = random_mat(params.modulus, params.ell, params.n, rng);
    return encode_with_matrix(params, a, sigma, rng);
}

std::vector<uint32_t> noise_support(const FieldVec& e) {
    std::vector<uint32_t> support;
    for (size_t i = 0; i < e.size(); ++i) {
        if (e[i]) support.push_back(static_cast<uint32_t>(i));
    }
    return support;
}

FieldVec column_decoder(const PrimeModulus& mod, const FieldMat& a, const FieldVec& b,
                        uint32_t i) {
    if (i >= a.cols() || b.size() != a.cols()) {
        throw DimensionMismatch("column index out of range");
    }
    FieldVec c(a.rows() + 1);
    for (size_t k = 0; k < a.rows(); ++k) c[k] = mod.neg(a(k, i));
    c[a.rows()] = b[i];
    return c;
}

FieldVec extended_secret(const FieldVec& s) {
    FieldVec sbar = s;
    sbar.push_back(1);
    return sbar;
}

} // namespace sprglab
