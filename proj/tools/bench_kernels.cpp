// Timing comparison of the OpenMP kernels against their serial references,
// plus the Monte-Carlo trial loop at one and many threads.

#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sprglab/analysis.hpp"
#include "sprglab/quadform.hpp"
#include "sprglab/rng.hpp"
#include "sprglab/sprg.hpp"
#include "sprglab/zp.hpp"

using namespace sprglab;

namespace {

double time_ms(const std::function<void()>& fn, int reps = 3) {
    double best = 1e18;
    for (int i = 0; i < reps; ++i) {
        auto start = std::chrono::steady_clock::now();
        fn();
        auto stop = std::chrono::steady_clock::now();
        best = std::min(best,
                        std::chrono::duration<double, std::milli>(stop - start).count());
    }
    return best;
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s serial %9.2f ms   parallel %9.2f ms   speedup %.2fx\n", name,
                serial_ms, parallel_ms, serial_ms / parallel_ms);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif

    Rng rng(1);
    PrimeModulus mod = sample_prime(31, rng);

    {
        FieldMat a = random_mat(mod, 384, 384, rng);
        FieldMat b = random_mat(mod, 384, 384, rng);
        FieldMat out;
        report("mat_mul 384x384",
               time_ms([&] { out = mat_mul_serial(mod, a, b); }),
               time_ms([&] { out = mat_mul(mod, a, b); }));
    }
    {
        FieldVec v = random_vec(mod, 24, rng);
        FieldVec out;
        report("tensor_power dim 24^5",
               time_ms([&] { out = tensor_power_serial(mod, v, 5); }),
               time_ms([&] { out = tensor_power(mod, v, 5); }));
    }
    {
        FieldVec s = random_vec(mod, 512, rng);
        std::vector<SparseQuadraticForm> forms(2000);
        for (auto& q : forms) {
            q.constant = rng.field_element(mod.p());
            for (int t = 0; t < 600; ++t) {
                q.terms.push_back({static_cast<uint32_t>(rng.below(512)),
                                   static_cast<uint32_t>(rng.below(512)),
                                   rng.field_element(mod.p())});
            }
            q.canonicalize(mod);
        }
        FieldVec out;
        report("eval_forms 2000x600",
               time_ms([&] { out = eval_forms_serial(mod, forms, s); }),
               time_ms([&] { out = eval_forms(mod, forms, s); }));
    }
    {
        SprgParams params =
            SprgParams::derive(16, 1 << 10, 1 << 15, 5, 0.5, mod, 16);
        Rng root(7);
        FlagRateReport r1, rn;
        const double serial_ms =
            time_ms([&] { r1 = estimate_flag_rate(params, 5, 200, root, 1); }, 1);
        const double parallel_ms =
            time_ms([&] { rn = estimate_flag_rate(params, 5, 200, root, 0); }, 1);
        report("flag trials n=2^10 m=2^15", serial_ms, parallel_ms);
        if (r1.flag_zero != rn.flag_zero) {
            std::printf("MISMATCH: thread count changed the tally\n");
            return 1;
        }
    }
    return 0;
}
