#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sprglab/serialize.hpp"
#include "sprglab/zp.hpp"

using namespace sprglab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kBin = SPRGLAB_BIN;

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd =
        kBin + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) : dir(fs::path("cli_scratch") / name) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
};

} // namespace

TEST_CASE("gen then verify round trips with identical artifacts") {
    Scratch s("roundtrip");
    const std::string common =
        "gen --n 24 --m 16 --delta 0.5 --prime-bits 31 --rng-seed 11 --keep-debug --out ";
    fs::create_directories(s.dir / "a");
    fs::create_directories(s.dir / "b");
    RunResult gen1 = run(common + (s.dir / "a").string(), s.dir);
    REQUIRE(gen1.exit_code == 0);
    RunResult gen2 = run(common + (s.dir / "b").string(), s.dir);
    REQUIRE(gen2.exit_code == 0);

    CHECK(read_file((s.dir / "a/index.bin").string()) ==
          read_file((s.dir / "b/index.bin").string()));
    CHECK(read_file((s.dir / "a/seed.bin").string()) ==
          read_file((s.dir / "b/seed.bin").string()));
    CHECK(slurp(s.dir / "a/transcript.json") == slurp(s.dir / "b/transcript.json"));

    RunResult verify = run("verify --index " + (s.dir / "a/index.bin").string() +
                               " --seed " + (s.dir / "a/seed.bin").string(),
                           s.dir);
    CHECK(verify.exit_code == 0);
    CHECK(verify.out.find("eval-equality") != std::string::npos);
}

TEST_CASE("rejected parameters name the field and exit 2") {
    Scratch s("badparam");
    RunResult r = run("gen --n 24 --m 16 --delta 1.25 --out " + s.dir.string(), s.dir);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("delta") != std::string::npos);
}

TEST_CASE("corrupt artifacts exit 3 with a parse offset") {
    Scratch s("corrupt");
    fs::create_directories(s.dir / "a");
    REQUIRE(run("gen --n 24 --m 16 --rng-seed 3 --out " + (s.dir / "a").string(),
                s.dir).exit_code == 0);
    std::vector<uint8_t> bytes = read_file((s.dir / "a/index.bin").string());
    bytes.resize(bytes.size() / 3);
    write_file((s.dir / "a/trunc.bin").string(), bytes);
    RunResult r = run("verify --index " + (s.dir / "a/trunc.bin").string() + " --seed " +
                          (s.dir / "a/seed.bin").string(),
                      s.dir);
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("offset") != std::string::npos);
}

TEST_CASE("fault-injected factor fails verification naming the bucket") {
    Scratch s("fault");
    fs::create_directories(s.dir / "a");
    // rng seed chosen so the sampled seed has flag = 1.
    REQUIRE(run("gen --n 32 --m 24 --delta 0.5 --rng-seed 11 --keep-debug --out " +
                    (s.dir / "a").string(),
                s.dir).exit_code == 0);
    auto bytes = read_file((s.dir / "a/seed.bin").string());
    PrimeModulus mod;
    StructuredSeed seed = deserialize_seed(bytes, nullptr, &mod);
    REQUIRE(seed.flag == 1);

    FieldMat original = mat_mul(mod, seed.u[0], seed.v[0]);
    const uint64_t u0 = seed.u[0](0, 0), v0 = seed.v[0](0, 0);
    for (uint64_t bump = 1;; ++bump) {
        seed.u[0].at(0, 0) = mod.reduce(u0 + bump);
        seed.v[0].at(0, 0) = mod.reduce(v0 + bump);
        if (mat_mul(mod, seed.u[0], seed.v[0]) != original) break;
    }
    write_file((s.dir / "a/seed.bin").string(), serialize_seed(seed, mod, 11));

    RunResult r = run("verify --index " + (s.dir / "a/index.bin").string() + " --seed " +
                          (s.dir / "a/seed.bin").string(),
                      s.dir);
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("FAIL factorization") != std::string::npos);
    CHECK(r.out.find("bucket 0") != std::string::npos);
}

TEST_CASE("stats emits valid versioned JSON even at one trial") {
    Scratch s("stats");
    RunResult r = run("stats --n 24 --m 16 --predicate and --locality 2 --delta 0.5 "
                      "--trials 1 --rng-seed 5",
                      s.dir);
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j.at("schema") == "sprg-lab/v1");
    CHECK(j.at("trials") == 1);
    CHECK(j.at("ci") == json::array({0.0, 1.0}));
    CHECK(j.at("rng_seed") == 5);
}

TEST_CASE("a zero rate override yields flag rate zero") {
    Scratch s("rate0");
    RunResult r = run("stats --n 24 --m 16 --predicate and --locality 2 --delta 0.5 "
                      "--trials 200 --rate 0 --rng-seed 6",
                      s.dir);
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j.at("flag_rate") == 0.0);
    CHECK(j.at("condition_breakdown").at("too_many_bad") == 0);
}

TEST_CASE("fixed rng seed reproduces the stats report byte for byte") {
    Scratch s("repro");
    const std::string cmd = "stats --n 32 --m 64 --predicate xor --locality 3 "
                            "--delta 0.5 --trials 300 --rng-seed 77 --jobs 2";
    RunResult r1 = run(cmd, s.dir);
    RunResult r2 = run(cmd, s.dir);
    REQUIRE(r1.exit_code == 0);
    CHECK(r1.out == r2.out);
}

TEST_CASE("config file supplies defaults and flags override it") {
    Scratch s("config");
    {
        std::ofstream cfg(s.dir / "cfg.json");
        cfg << R"({"n": 20, "m": 12, "delta": 0.5, "rng_seed": 9,
                   "predicate": "and", "locality": 2})";
    }
    fs::create_directories(s.dir / "a");
    RunResult r = run("gen --config " + (s.dir / "cfg.json").string() + " --m 16 --out " +
                          (s.dir / "a").string(),
                      s.dir);
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j.at("params").at("n") == 20);
    CHECK(j.at("params").at("m") == 16);  // the flag wins
    CHECK(j.at("rng_seed") == 9);
}

TEST_CASE("usage errors exit 2") {
    Scratch s("usage");
    CHECK(run("frobnicate", s.dir).exit_code == 2);
    CHECK(run("verify --index only.bin", s.dir).exit_code == 2);
}
