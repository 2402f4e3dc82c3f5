#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sprglab/analysis.hpp"
#include "sprglab/rng.hpp"
#include "sprglab/serialize.hpp"

using namespace sprglab;

namespace {

SprgParams stretch_family(uint64_t n, double tau, double delta, uint64_t lambda,
                          uint64_t t_slack, const PrimeModulus& mod) {
    const auto m = static_cast<uint64_t>(
        std::ceil(std::pow(static_cast<double>(n), tau)));
    return SprgParams::derive(lambda, n, m, /*d=*/2, delta, mod, t_slack);
}

} // namespace

TEST_CASE("seed bit formulas under direct substitution") {
    Rng rng(500);
    PrimeModulus mod = sample_prime(16, rng);
    const uint64_t eb = mod.bit_length();

    SUBCASE("arity one makes S1 bits (ell+1) elements") {
        SprgParams p = SprgParams::derive(4, 32, 64, 2, 0.5, mod, 4);
        REQUIRE(p.tensor_arity() == 1);
        StretchReport r = seed_bits(p);
        CHECK(r.bits_s1 == (p.ell + 1) * eb);
        CHECK(r.bits_public == p.n * eb + 1);
        CHECK(r.bits_total == r.bits_public + r.bits_s1 + r.bits_s2);
    }
    SUBCASE("degenerate bucket block") {
        SprgParams p;
        p.lambda = 1;
        p.n = 16;
        p.m = 8;
        p.d = 2;
        p.delta = 0.5;
        p.ell = 16;
        p.t_slack = 1;
        p.t_threshold = 8;
        p.b_buckets = 1;
        p.c_capacity = 1;
        p.c_side = 1;
        p.modulus = mod;
        StretchReport r = seed_bits(p);
        CHECK(r.bits_s2 == 2 * eb);
    }
}

TEST_CASE("seed bit report matches serialized payload sizes") {
    Rng rng(501);
    Predicate pred = Predicate::xor_and();
    PrimeModulus mod = sample_prime(31, rng);
    SprgParams params = SprgParams::derive(4, 32, 24, 5, 0.5, mod, 4);
    SprgIndex index = sample_index(params, pred, rng);
    Rng seed_rng = rng.stream("seed");
    StructuredSeed seed = sample_seed(index, seed_rng, false);

    SeedSizeBreakdown sizes;
    serialize_seed(seed, mod, 501, &sizes);
    StretchReport report = seed_bits(params);
    const uint64_t eb = mod.bit_length();
    const uint64_t elem_bytes = mod.element_bytes();

    // Element counts from the bit report equal payload bytes divided by the
    // serialized element width; the flag bit is the +1 in the public count.
    CHECK((report.bits_public - 1) % eb == 0);
    CHECK(sizes.public_payload == (report.bits_public - 1) / eb * elem_bytes);
    CHECK(sizes.flag_bytes == 1);
    CHECK(sizes.s1_payload == report.bits_s1 / eb * elem_bytes);
    CHECK(sizes.s2_payload == report.bits_s2 / eb * elem_bytes);
}

TEST_CASE("stretch verdicts") {
    Rng rng(502);
    PrimeModulus mod = sample_prime(16, rng);

    SUBCASE("toy parameters fail with a caveat") {
        SprgParams p = stretch_family(64, 1.5, 0.5, 4, 4, mod);
        StretchVerdict v = check_stretch(p);
        CHECK(!v.expanding);
        CHECK(v.margin < 1.0);
        CHECK(v.asymptotic_caveat);
    }
    SUBCASE("the bucket-block exponent sits below the output exponent") {
        SprgParams p = stretch_family(1024, 1.5, 0.5, 4, 4, mod);
        StretchReport r = seed_bits(p);
        CHECK(r.s2_exponent == doctest::Approx(1.5 - 0.5 / 2.0));
        CHECK(r.s2_exponent < 1.5);
    }
    SUBCASE("doubling n improves the margin monotonically") {
        double prev = 0.0;
        for (uint64_t n : {uint64_t{256}, uint64_t{512}, uint64_t{1024},
                           uint64_t{2048}}) {
            StretchVerdict v = check_stretch(stretch_family(n, 1.5, 0.5, 4, 4, mod));
            CHECK(v.margin > prev);
            prev = v.margin;
        }
    }
    SUBCASE("fitted bucket-block exponent tracks the formula") {
        // log-log slope of bits_s2 across a 4x n range.
        std::vector<double> xs, ys;
        for (uint64_t n : {uint64_t{1} << 10, uint64_t{1} << 12, uint64_t{1} << 14}) {
            SprgParams p = stretch_family(n, 1.5, 0.5, 16, 16, mod);
            xs.push_back(std::log2(static_cast<double>(n)));
            ys.push_back(std::log2(static_cast<double>(seed_bits(p).bits_s2)));
        }
        const double slope = (ys.back() - ys.front()) / (xs.back() - xs.front());
        CHECK(std::abs(slope - 1.25) < 0.05);
    }
}

TEST_CASE("expected bad accounting") {
    Rng rng(503);
    PrimeModulus mod = sample_prime(16, rng);
    SprgParams p = SprgParams::derive(4, 64, 100, 2, 0.5, mod, 4);
    // ell = 64, rate = 1/8.
    CHECK(expected_bad_bound(p, 1) == doctest::Approx(12.5));
    CHECK(exact_expected_bad(p, 1) == doctest::Approx(12.5));
    CHECK(expected_bad_bound(p, 3) == doctest::Approx(37.5));
    CHECK(exact_expected_bad(p, 3) <= expected_bad_bound(p, 3));

    SUBCASE("Monte-Carlo mean stays near the exact expectation") {
        const uint64_t trials = 4000;
        Rng root(5030);
        FlagRateReport rep = estimate_flag_rate(p, 3, trials, root, 2);
        const double exact = exact_expected_bad(p, 3);
        // Per-trial |BAD| is bounded by m; a generous 3-sigma envelope.
        const double sigma =
            std::sqrt(exact * (1.0 + exact) / static_cast<double>(trials));
        CHECK(rep.mean_bad <= expected_bad_bound(p, 3) + 3 * sigma);
        CHECK(std::abs(rep.mean_bad - exact) <= 3 * sigma + 0.5);
    }
}

TEST_CASE("flag rate estimation") {
    Rng rng(504);
    PrimeModulus mod = sample_prime(16, rng);

    SUBCASE("degenerate interval at one trial") {
        SprgParams p = SprgParams::derive(4, 32, 16, 2, 0.5, mod, 4);
        Rng root(1);
        FlagRateReport rep = estimate_flag_rate(p, 2, 1, root, 1);
        CHECK(rep.ci_low == 0.0);
        CHECK(rep.ci_high == 1.0);
    }
    SUBCASE("thread count does not change the tally") {
        SprgParams p = SprgParams::derive(4, 64, 128, 2, 0.5, mod, 4);
        Rng root(77);
        FlagRateReport serial = estimate_flag_rate(p, 2, 400, root, 1);
        FlagRateReport parallel = estimate_flag_rate(p, 2, 400, root, 2);
        CHECK(serial.flag_zero == parallel.flag_zero);
        CHECK(serial.cond_too_many_bad == parallel.cond_too_many_bad);
        CHECK(serial.cond_capacity == parallel.cond_capacity);
        CHECK(serial.cond_bucket_overload == parallel.cond_bucket_overload);
    }
    SUBCASE("full noise with a binding threshold zeroizes almost surely") {
        // rate 1 makes nearly every seed index erroneous, so |BAD| = m > T.
        SprgParams p = SprgParams::derive(4, 16, 128, 2, 0.75, mod, 4);
        REQUIRE(p.t_threshold < p.m);
        Rng root(5040);
        FlagRateReport rep = estimate_flag_rate(p, 2, 300, root, 1, /*rate=*/1.0);
        CHECK(rep.rate >= 0.999);
        CHECK(rep.cond_too_many_bad == rep.trials);
    }
    SUBCASE("zero noise never zeroizes") {
        SprgParams p = SprgParams::derive(4, 32, 64, 2, 0.5, mod, 4);
        Rng root(5042);
        FlagRateReport rep = estimate_flag_rate(p, 2, 300, root, 1, /*rate=*/0.0);
        CHECK(rep.rate == 0.0);
        CHECK(rep.mean_bad == 0.0);
    }
    SUBCASE("Markov consistency at a point where the threshold binds") {
        // n=16, d=2, delta=0.75: ell=16, rate=0.125, T = ceil(m/2).
        SprgParams p = SprgParams::derive(4, 16, 128, 2, 0.75, mod, 4);
        REQUIRE(p.t_threshold < p.m);
        const uint64_t trials = 3000;
        Rng root(5041);
        FlagRateReport rep = estimate_flag_rate(p, 2, trials, root, 2);
        const double markov =
            expected_bad_bound(p, 2) / static_cast<double>(p.t_threshold);
        const double observed = static_cast<double>(rep.cond_too_many_bad) /
                                static_cast<double>(trials);
        const double sigma = std::sqrt(0.25 / static_cast<double>(trials));
        CHECK(observed <= std::min(1.0, markov) + 3 * sigma);
    }
    SUBCASE("wilson interval sanity") {
        auto [lo, hi] = wilson_interval(50, 100);
        CHECK(lo > 0.40);
        CHECK(hi < 0.60);
        CHECK(lo < 0.5);
        CHECK(hi > 0.5);
    }
}
