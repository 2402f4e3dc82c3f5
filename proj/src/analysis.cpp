#include "sprglab/analysis.hpp"

#include <cmath>

#include "sprglab/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sprglab {

StretchReport seed_bits(const SprgParams& params) {
    const uint64_t eb = params.modulus.bit_length();
    StretchReport r;
    r.bits_public = params.n * eb + 1;
    r.bits_s1 = params.tensor_dim() * eb;
    r.bits_s2 = 2 * params.b_buckets * params.t_slack * params.c_side * eb;
    r.bits_total = r.bits_public + r.bits_s1 + r.bits_s2;
    r.m_bits = params.m;

    const double tau = std::log(static_cast<double>(params.m)) /
                       std::log(static_cast<double>(params.n));
    r.s2_exponent = tau - params.delta / (2.0 * static_cast<double>(params.tensor_arity()));
    const double base = std::max(
        static_cast<double>(params.n),
        std::pow(static_cast<double>(params.n), r.s2_exponent));
    r.n_prime = static_cast<uint64_t>(std::ceil(base));
    r.tau_effective = std::log(static_cast<double>(params.m)) /
                      std::log(static_cast<double>(r.n_prime));
    return r;
}

StretchVerdict check_stretch(const SprgParams& params) {
    StretchReport r = seed_bits(params);
    StretchVerdict v;
    v.margin = static_cast<double>(r.m_bits) / static_cast<double>(r.bits_total);
    v.expanding = r.m_bits > r.bits_total;
    // The seed-length exponent stays below the output exponent whenever
    // delta > 0, so a failure at small n is a lambda-factor artifact, not a
    // structural one.
    v.asymptotic_caveat = !v.expanding;
    return v;
}

double expected_bad_bound(const SprgParams& params, uint32_t locality) {
    return static_cast<double>(locality) * params.noise_rate() *
           static_cast<double>(params.m);
}

double exact_expected_bad(const SprgParams& params, uint32_t locality) {
    const double r = params.noise_rate();
    return static_cast<double>(params.m) * (1.0 - std::pow(1.0 - r, locality));
}

std::pair<double, double> wilson_interval(uint64_t successes, uint64_t trials) {
    if (trials <= 1) return {0.0, 1.0};
    const double z = 1.959963984540054;  // 95%
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = phat + z2 / (2.0 * n);
    const double spread = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
    return {std::max(0.0, (center - spread) / denom),
            std::min(1.0, (center + spread) / denom)};
}

namespace {

uint64_t rate_threshold(double rate) {
    if (rate >= 1.0) return ~uint64_t{0};
    if (rate <= 0.0) return 0;
    return static_cast<uint64_t>(static_cast<long double>(rate) * 18446744073709551616.0L);
}

struct TrialOutcome {
    FlagDecision decision;
    uint64_t bad_count;
};

// One zeroization trial: fresh variable sets, fresh noise support, fresh
// bucket assignment. Output polynomials play no role in the flag, so they
// are not built here.
TrialOutcome run_trial(const SprgParams& params, uint32_t locality, double rate,
                       Rng& rng) {
    Rng graph_rng = rng.stream("graph");
    Hypergraph graph = sample_hypergraph(static_cast<uint32_t>(params.n),
                                         static_cast<uint32_t>(params.m), locality,
                                         graph_rng);

    Rng noise_rng = rng.stream("noise");
    const uint64_t threshold = rate_threshold(rate);
    const uint64_t p = params.modulus.p();
    std::vector<uint8_t> erroneous(params.n, 0);
    for (uint64_t i = 0; i < params.n; ++i) {
        if (noise_rng.bernoulli_raw(threshold) && noise_rng.field_element(p) != 0) {
            erroneous[i] = 1;
        }
    }

    std::vector<uint32_t> bad;
    for (uint32_t j = 0; j < graph.m; ++j) {
        for (uint32_t v : graph.edge(j)) {
            if (erroneous[v]) {
                bad.push_back(j);
                break;
            }
        }
    }

    Rng phi_rng = rng.stream("phi");
    std::array<uint64_t, 4> phi_seed{phi_rng.next_u64(), phi_rng.next_u64(),
                                     phi_rng.next_u64(), phi_rng.next_u64()};
    BucketMaps buckets = BucketMaps::build(params.m, params.b_buckets, params.c_capacity,
                                           params.c_side, phi_seed);
    return {flag_decision(bad, buckets, params), bad.size()};
}

} // namespace

FlagRateReport estimate_flag_rate(const SprgParams& params, uint32_t locality,
                                  uint64_t trials, const Rng& root, int jobs,
                                  double rate_override) {
    params.validate();
    if (trials < 1) throw ParameterError("flag-rate estimation needs at least one trial");
    if (locality < 1 || locality > kMaxLocality) {
        throw ParameterError("locality out of range");
    }
    const double rate = rate_override >= 0.0 ? rate_override : params.noise_rate();
    if (rate > 1.0) throw ParameterError("noise rate must lie in [0, 1]");

    FlagRateReport report;
    report.trials = trials;
    uint64_t flag_zero = 0, c1 = 0, c2 = 0, c3 = 0, bad_sum = 0;

#ifdef _OPENMP
    const int workers = jobs > 0 ? jobs : omp_get_max_threads();
#else
    const int workers = 1;
    (void)jobs;
#endif
#pragma omp parallel for schedule(dynamic, 8) num_threads(workers) \
    reduction(+ : flag_zero, c1, c2, c3, bad_sum) if (trials > 16)
    for (int64_t i = 0; i < static_cast<int64_t>(trials); ++i) {
        Rng trial_rng = root.stream("trial", static_cast<uint64_t>(i));
        TrialOutcome outcome = run_trial(params, locality, rate, trial_rng);
        if (outcome.decision.flag == 0) ++flag_zero;
        if (outcome.decision.too_many_bad) ++c1;
        if (outcome.decision.capacity_exceeded) ++c2;
        if (outcome.decision.bucket_overload) ++c3;
        bad_sum += outcome.bad_count;
    }

    report.flag_zero = flag_zero;
    report.cond_too_many_bad = c1;
    report.cond_capacity = c2;
    report.cond_bucket_overload = c3;
    report.rate = static_cast<double>(flag_zero) / static_cast<double>(trials);
    report.mean_bad = static_cast<double>(bad_sum) / static_cast<double>(trials);
    auto [lo, hi] = wilson_interval(flag_zero, trials);
    report.ci_low = lo;
    report.ci_high = hi;
    return report;
}

} // namespace sprglab
