#pragma once

#include <cstdint>

#include "sprglab/sprg.hpp"

namespace sprglab {

class Rng;

/// Exact bit counts of a seed at the given parameters, from the stored
/// dimensions rather than asymptotics.
struct StretchReport {
    uint64_t bits_public = 0;   // n * ceil(log2 p) + 1 flag bit
    uint64_t bits_s1 = 0;       // (ell+1)^arity * ceil(log2 p)
    uint64_t bits_s2 = 0;       // 2 * B * t * side * ceil(log2 p)
    uint64_t bits_total = 0;
    uint64_t m_bits = 0;        // output length
    uint64_t n_prime = 0;       // seed-length base with lambda factors dropped
    double tau_effective = 0.0; // log(m) / log(n_prime)
    double s2_exponent = 0.0;   // tau - delta / (2 * arity)
};

StretchReport seed_bits(const SprgParams& params);

struct StretchVerdict {
    bool expanding = false;       // m > bits_total
    double margin = 0.0;          // m / bits_total
    bool asymptotic_caveat = false; // failure attributable to lambda factors at small n
};

StretchVerdict check_stretch(const SprgParams& params);

/// Union-bound expectation of the number of affected outputs:
/// locality * rate * m.
double expected_bad_bound(const SprgParams& params, uint32_t locality);

/// Exact expectation m * (1 - (1 - rate)^locality) for independent
/// per-coordinate errors.
double exact_expected_bad(const SprgParams& params, uint32_t locality);

struct FlagRateReport {
    uint64_t trials = 0;
    uint64_t flag_zero = 0;
    double rate = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    uint64_t cond_too_many_bad = 0;   // trials with |BAD| > T
    uint64_t cond_capacity = 0;       // trials with an over-capacity bucket
    uint64_t cond_bucket_overload = 0;// trials with > t bad outputs in a bucket
    double mean_bad = 0.0;
};

/// Monte-Carlo estimate of the zeroization probability, resampling the
/// hypergraph, noise, and bucket maps each trial. Uses independent labeled
/// substreams per trial, so the result is invariant under the thread count.
/// rate_override >= 0 replaces the derived noise rate (experiment knob).
FlagRateReport estimate_flag_rate(const SprgParams& params, uint32_t locality,
                                  uint64_t trials, const Rng& root, int jobs = 1,
                                  double rate_override = -1.0);

/// 95% Wilson score interval; [0, 1] for a single trial.
std::pair<double, double> wilson_interval(uint64_t successes, uint64_t trials);

} // namespace sprglab
