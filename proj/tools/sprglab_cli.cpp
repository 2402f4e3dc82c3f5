// Command-line front end: parameter generation, instance runs, verification,
// and statistical experiments with reproducible seeds.
//
// Exit codes: 0 pass, 1 verification failure, 2 usage or parameter error,
// 3 IO or parse error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sprglab/analysis.hpp"
#include "sprglab/drg.hpp"
#include "sprglab/json_io.hpp"
#include "sprglab/rng.hpp"
#include "sprglab/serialize.hpp"
#include "sprglab/sprg.hpp"

using nlohmann::json;
using namespace sprglab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct Options {
    uint64_t n = 64;
    uint64_t m = 0;
    uint64_t d = 0;  // 0: take the predicate's multilinear degree
    double delta = 0.5;
    double tau = 0.0;  // when set, m = ceil(n^tau)
    uint64_t lambda = 16;
    uint64_t t_slack = 0;  // 0: default to lambda
    uint32_t prime_bits = 31;
    uint64_t rng_seed = 1;
    uint64_t trials = 1000;
    bool keep_debug = false;
    int jobs = 1;
    std::string out = ".";

    std::string predicate = "xor-and";
    uint32_t locality = 0;
    std::string truth_table_hex;

    double rate_override = -1.0;  // experiment knob for the flag estimator

    uint64_t b_bound = 0;     // perturbation bound for drg subcommands
    double tau_prime = 0.0;   // target stretch for drg subcommands

    std::string index_path;
    std::string seed_path;
};

Predicate resolve_predicate(const Options& opt) {
    if (opt.predicate == "xor-and") return Predicate::xor_and();
    const uint32_t loc = opt.locality;
    if (loc == 0) {
        throw ParameterError("predicate '" + opt.predicate + "' needs --locality");
    }
    if (opt.predicate == "xor") return Predicate::xor_n(loc);
    if (opt.predicate == "and") return Predicate::and_n(loc);
    if (opt.predicate == "majority") return Predicate::majority(loc);
    if (opt.predicate == "hex") {
        if (opt.truth_table_hex.empty()) {
            throw ParameterError("predicate 'hex' needs --truth-table");
        }
        return Predicate::from_hex(loc, opt.truth_table_hex);
    }
    throw ParameterError("unknown predicate '" + opt.predicate +
                         "' (expected xor-and, xor, and, majority, or hex)");
}

struct Resolved {
    SprgParams params;
    Predicate predicate;
};

Resolved resolve_params(const Options& opt, Rng& root) {
    Predicate pred = resolve_predicate(opt);
    const uint32_t degree = multilinear_expand(pred).degree();
    if (opt.d != 0 && opt.d != degree) {
        throw ParameterError("--d " + std::to_string(opt.d) +
                             " does not match the predicate's multilinear degree " +
                             std::to_string(degree));
    }
    uint64_t m = opt.m;
    if (opt.tau > 0.0) {
        m = static_cast<uint64_t>(
            std::ceil(std::pow(static_cast<double>(opt.n), opt.tau)));
    }
    if (m == 0) throw ParameterError("either --m or --tau is required");
    Rng prime_rng = root.stream("prime");
    PrimeModulus mod = sample_prime(opt.prime_bits, prime_rng);
    SprgParams params =
        SprgParams::derive(opt.lambda, opt.n, m, degree, opt.delta, mod, opt.t_slack);
    if (params.m <= params.n) {
        std::cerr << "note: m <= n, this configuration is not expanding\n";
    }
    return Resolved{params, std::move(pred)};
}

void apply_config_file(const std::string& path, Options& opt) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("config file " + path + ": " + e.what());
    }
    auto get = [&](const char* key, auto& slot) {
        if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
    };
    get("n", opt.n);
    get("m", opt.m);
    get("d", opt.d);
    get("delta", opt.delta);
    get("tau", opt.tau);
    get("lambda", opt.lambda);
    get("t_slack", opt.t_slack);
    get("prime_bits", opt.prime_bits);
    get("rng_seed", opt.rng_seed);
    get("trials", opt.trials);
    get("keep_debug", opt.keep_debug);
    get("jobs", opt.jobs);
    get("out", opt.out);
    get("predicate", opt.predicate);
    get("locality", opt.locality);
    get("truth_table_hex", opt.truth_table_hex);
    get("rate", opt.rate_override);
    get("b_bound", opt.b_bound);
    get("tau_prime", opt.tau_prime);
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

int cmd_gen(const Options& opt) {
    std::error_code ec;
    std::filesystem::create_directories(opt.out, ec);
    Rng root(opt.rng_seed);
    Resolved r = resolve_params(opt, root);
    Rng index_rng = root.stream("index");
    SprgIndex index = sample_index(r.params, r.predicate, index_rng);
    Rng seed_rng = root.stream("seed");
    StructuredSeed seed = sample_seed(index, seed_rng, opt.keep_debug);

    const std::string index_path = opt.out + "/index.bin";
    const std::string seed_path = opt.out + "/seed.bin";
    write_file(index_path, serialize_index(index, opt.rng_seed));
    SeedSizeBreakdown sizes;
    write_file(seed_path, serialize_seed(seed, r.params.modulus, opt.rng_seed, &sizes));

    json summary{{"schema", kSchemaTag},
                 {"rng_seed", opt.rng_seed},
                 {"index", index_path},
                 {"seed", seed_path},
                 {"flag", seed.flag},
                 {"params", params_to_json(r.params)},
                 {"seed_bytes",
                  {{"header", sizes.header_bytes},
                   {"public", sizes.public_payload},
                   {"flag", sizes.flag_bytes},
                   {"s1", sizes.s1_payload},
                   {"s2", sizes.s2_payload},
                   {"debug", sizes.debug_bytes}}}};
    if (opt.keep_debug) {
        const std::string transcript_path = opt.out + "/transcript.json";
        write_json(transcript_path, transcript_json(index, seed, opt.rng_seed));
        summary["transcript"] = transcript_path;
    }
    std::cout << summary.dump(2) << "\n";
    return kExitPass;
}

struct CheckReport {
    json checks = json::array();
    bool all_ok = true;

    void add(const std::string& name, bool ok, const std::string& detail = "") {
        checks.push_back(json{{"check", name},
                              {"status", ok ? "ok" : (detail.empty() ? "FAIL" : "FAIL")},
                              {"detail", detail}});
        std::cout << (ok ? "ok   " : "FAIL ") << name
                  << (detail.empty() ? "" : "  (" + detail + ")") << "\n";
        all_ok = all_ok && ok;
    }
    void skip(const std::string& name, const std::string& why) {
        checks.push_back(json{{"check", name}, {"status", "skipped"}, {"detail", why}});
        std::cout << "skip " << name << "  (" << why << ")\n";
    }
};

int cmd_verify(const Options& opt) {
    std::vector<uint8_t> index_bytes = read_file(opt.index_path);
    std::vector<uint8_t> seed_bytes = read_file(opt.seed_path);
    uint64_t index_seed_word = 0, seed_seed_word = 0;
    SprgIndex index = deserialize_index(index_bytes, &index_seed_word);
    PrimeModulus seed_mod;
    StructuredSeed seed = deserialize_seed(seed_bytes, &seed_seed_word, &seed_mod);
    const SprgParams& params = index.params;
    const PrimeModulus& mod = params.modulus;

    CheckReport report;

    {
        bool ok = seed_mod == mod && seed.b.size() == params.n &&
                  seed.s_tensor.size() == params.tensor_dim() &&
                  seed.u.size() == params.b_buckets && seed.v.size() == params.b_buckets;
        for (uint64_t i = 0; ok && i < params.b_buckets; ++i) {
            ok = seed.u[i].rows() == params.c_side && seed.u[i].cols() == params.t_slack &&
                 seed.v[i].rows() == params.t_slack && seed.v[i].cols() == params.c_side;
        }
        report.add("seed-dimensions", ok);
        if (!ok) return kExitVerifyFail;
    }

    {
        bool ok = true;
        std::string detail;
        if (!index.buckets.capacity_exceeded()) {
            std::vector<std::vector<uint8_t>> seen(
                params.b_buckets,
                std::vector<uint8_t>(params.c_side * params.c_side, 0));
            for (uint64_t j = 0; j < params.m && ok; ++j) {
                uint8_t& cell = seen[index.buckets.bucket_of(j)][index.buckets.cell_of(j)];
                if (cell) {
                    ok = false;
                    detail = "cell reused in bucket " +
                             std::to_string(index.buckets.bucket_of(j));
                }
                cell = 1;
            }
        } else {
            for (uint64_t j = 0; j < params.m && ok; ++j) {
                ok = index.buckets.cell_of(j) == 0;
            }
            if (!ok) detail = "collapsed map must be constant";
        }
        report.add("cell-map-injectivity", ok, detail);
    }

    {
        DegreeCertificate cert = certify_degree(index, seed.b);
        report.add("degree-certificate",
                   cert.private_degree_ok && cert.coeff_degree_ok,
                   "private " + std::to_string(cert.max_private_degree) + ", public " +
                       std::to_string(cert.max_public_degree));
    }

    if (!seed.debug) {
        report.skip("factorization", "no debug transcript in the seed");
        report.skip("eval-equality", "no debug transcript in the seed");
    } else {
        const DebugTranscript& dbg = *seed.debug;
        bool flag_ok = true;
        {
            std::vector<uint32_t> bad = bad_outputs(index.prg, dbg.err);
            const uint8_t expect = compute_flag(bad, index.buckets, params);
            flag_ok = expect == seed.flag;
            report.add("flag-consistency", flag_ok);
        }
        {
            bool ok = true;
            std::string detail;
            if (seed.flag == 1 && !index.buckets.capacity_exceeded()) {
                Correction corr = build_correction(index.prg, mod, dbg.sigma, dbg.noise,
                                                   index.buckets, params);
                for (uint64_t i = 0; i < params.b_buckets && ok; ++i) {
                    if (mat_mul(mod, seed.u[i], seed.v[i]) != corr.mats[i]) {
                        ok = false;
                        detail = "bucket " + std::to_string(i);
                    }
                }
            } else {
                for (uint64_t i = 0; i < params.b_buckets && ok; ++i) {
                    if (seed.u[i].nonzero_count() || seed.v[i].nonzero_count()) {
                        ok = false;
                        detail = "bucket " + std::to_string(i) +
                                 " must be zero when the flag is down";
                    }
                }
            }
            report.add("factorization", ok, detail);
        }
        {
            bool ok = true;
            std::string detail;
            try {
                std::vector<uint8_t> got = evaluate(index, seed);
                std::vector<uint8_t> y = eval_boolean(index.prg, dbg.sigma);
                for (uint64_t j = 0; j < params.m && ok; ++j) {
                    const uint8_t expect = seed.flag ? y[j] : 0;
                    if (got[j] != expect) {
                        ok = false;
                        detail = "output " + std::to_string(j);
                    }
                }
            } catch (const Error& e) {
                ok = false;
                detail = e.what();
            }
            report.add("eval-equality", ok, detail);
        }
    }

    json out{{"schema", kSchemaTag},
             {"index", opt.index_path},
             {"seed", opt.seed_path},
             {"rng_seed", index_seed_word},
             {"checks", report.checks},
             {"pass", report.all_ok}};
    if (opt.out != ".") write_json(opt.out, out);
    return report.all_ok ? kExitPass : kExitVerifyFail;
}

int cmd_stats(const Options& opt) {
    if (opt.trials < 1) throw ParameterError("--trials must be >= 1");
    Rng root(opt.rng_seed);
    Resolved r = resolve_params(opt, root);

    SprgParams params = r.params;
    const uint32_t locality = r.predicate.locality();
    Rng trials_rng = root.stream("flag-trials");
    FlagRateReport flag_report = estimate_flag_rate(
        params, locality, opt.trials, trials_rng, opt.jobs, opt.rate_override);

    json out = flag_rate_json(params, locality, flag_report, opt.rng_seed);
    out["stretch"] = stretch_json(params, seed_bits(params), check_stretch(params));
    out["exact_expected_bad"] = exact_expected_bad(params, locality);

    if (opt.b_bound > 0) {
        const double tau_prime = opt.tau_prime > 0.0 ? opt.tau_prime : 0.5;
        DrgParams drg = DrgParams::derive(params.lambda, params.n, opt.b_bound, tau_prime,
                                          params.m);
        Rational bound = smudging_bound(drg);
        Rng beta_rng = root.stream("beta");
        double worst = 0.0;
        for (uint64_t i = 0; i < opt.trials; ++i) {
            const auto beta = static_cast<int64_t>(beta_rng.below(2 * opt.b_bound + 1)) -
                              static_cast<int64_t>(opt.b_bound);
            worst = std::max(worst, shift_distance(drg.t_bits, beta).value());
        }
        out["smudging"] = smudging_json(drg, bound, worst, opt.trials, opt.rng_seed);
    }

    if (opt.out != ".") {
        write_json(opt.out, out);
    }
    std::cout << out.dump(2) << "\n";
    return kExitPass;
}

int cmd_params(const Options& opt) {
    Rng root(opt.rng_seed);
    Resolved r = resolve_params(opt, root);
    json out = stretch_json(r.params, seed_bits(r.params), check_stretch(r.params));
    out["expected_bad_bound"] = expected_bad_bound(r.params, r.predicate.locality());
    out["noise_rate"] = r.params.noise_rate();
    out["rng_seed"] = opt.rng_seed;
    if (opt.out != ".") write_json(opt.out, out);
    std::cout << out.dump(2) << "\n";
    return kExitPass;
}

int cmd_drg_eval(const Options& opt) {
    if (opt.b_bound < 1) throw ParameterError("--b-bound is required");
    std::vector<uint8_t> index_bytes = read_file(opt.index_path);
    std::vector<uint8_t> seed_bytes = read_file(opt.seed_path);
    uint64_t rng_word = 0;
    SprgIndex sprg = deserialize_index(index_bytes, &rng_word);
    StructuredSeed seed = deserialize_seed(seed_bytes);

    const double tau_prime = opt.tau_prime > 0.0 ? opt.tau_prime : 0.5;
    DrgParams params = DrgParams::derive(sprg.params.lambda, sprg.params.n, opt.b_bound,
                                         tau_prime, sprg.params.m);
    DrgIndex index{std::move(sprg), params};
    DrgOutput out = drg_evaluate(index, seed);

    json j{{"schema", kSchemaTag},
           {"rng_seed", rng_word},
           {"m_prime", params.m_prime},
           {"t_bits", params.t_bits},
           {"b_bound", params.b_bound},
           {"zeroized", out.zeroized},
           {"smudging_bound", smudging_bound(params).value()},
           {"y", out.y}};
    if (opt.out != ".") write_json(opt.out, j);
    std::cout << j.dump(2) << "\n";
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    Options opt;

    // A config file provides defaults; explicit flags override it.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                apply_config_file(argv[i + 1], opt);
            } catch (const ParseError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitIo;
            } catch (const Error& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitIo;
            }
        }
    }

    CLI::App app{"structured-seed generator laboratory"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file with flag defaults");

    auto add_common = [&](CLI::App* sub, bool with_predicate = true) {
        sub->add_option("--config", config_path,
                        "JSON config file with flag defaults (applied first)");
        sub->add_option("--n", opt.n, "PRG seed length");
        sub->add_option("--m", opt.m, "output length");
        sub->add_option("--tau", opt.tau, "derive m = ceil(n^tau)");
        sub->add_option("--d", opt.d, "multilinear degree (checked against the predicate)");
        sub->add_option("--delta", opt.delta, "noise exponent in (0,1)");
        sub->add_option("--lambda", opt.lambda, "security parameter");
        sub->add_option("--t-slack", opt.t_slack, "per-bucket slack t (default lambda)");
        sub->add_option("--prime-bits", opt.prime_bits, "modulus width in bits");
        sub->add_option("--rng-seed", opt.rng_seed, "root seed for all randomness");
        sub->add_option("--jobs", opt.jobs, "worker threads for independent trials");
        if (with_predicate) {
            sub->add_option("--predicate", opt.predicate,
                            "xor-and | xor | and | majority | hex");
            sub->add_option("--locality", opt.locality, "predicate locality");
            sub->add_option("--truth-table", opt.truth_table_hex,
                            "truth table hex for --predicate hex");
        }
    };

    CLI::App* gen = app.add_subcommand("gen", "sample an index and seed to disk");
    add_common(gen);
    gen->add_flag("--keep-debug", opt.keep_debug,
                  "embed the debug transcript and write transcript.json");
    gen->add_option("--out", opt.out, "output directory");

    CLI::App* verify = app.add_subcommand("verify", "check artifacts against invariants");
    verify->add_option("--index", opt.index_path, "index file")->required();
    verify->add_option("--seed", opt.seed_path, "seed file")->required();
    verify->add_option("--out", opt.out, "also write a JSON report here");

    CLI::App* stats = app.add_subcommand("stats", "statistical experiments");
    add_common(stats);
    stats->add_option("--trials", opt.trials, "Monte-Carlo trials");
    stats->add_option("--rate", opt.rate_override,
                      "override the noise rate for the flag experiment");
    stats->add_option("--b-bound", opt.b_bound, "include a smudging experiment");
    stats->add_option("--tau-prime", opt.tau_prime, "target stretch for smudging");
    stats->add_option("--out", opt.out, "write the JSON report here");

    CLI::App* params_cmd = app.add_subcommand("params", "stretch and bound arithmetic");
    add_common(params_cmd);
    params_cmd->add_option("--out", opt.out, "write the JSON report here");

    CLI::App* drg = app.add_subcommand("drg-eval", "pack a seed's outputs into integers");
    drg->add_option("--index", opt.index_path, "index file")->required();
    drg->add_option("--seed", opt.seed_path, "seed file")->required();
    drg->add_option("--b-bound", opt.b_bound, "perturbation magnitude bound")->required();
    drg->add_option("--tau-prime", opt.tau_prime, "target stretch exponent");
    drg->add_option("--out", opt.out, "write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

#ifdef _OPENMP
    omp_set_num_threads(opt.jobs > 0 ? opt.jobs : 1);
#endif

    try {
        if (gen->parsed()) return cmd_gen(opt);
        if (verify->parsed()) return cmd_verify(opt);
        if (stats->parsed()) return cmd_stats(opt);
        if (params_cmd->parsed()) return cmd_params(opt);
        if (drg->parsed()) return cmd_drg_eval(opt);
        std::cerr << "error: no subcommand\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParameterTooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}
