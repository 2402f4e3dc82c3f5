#include "sprglab/json_io.hpp"

#include <map>

namespace sprglab {

using nlohmann::json;

json predicate_to_json(const Predicate& pred) {
    return json{{"locality", pred.locality()}, {"truth_table_hex", pred.truth_table_hex()}};
}

Predicate predicate_from_json(const json& j) {
    return Predicate::from_hex(j.at("locality").get<uint32_t>(),
                               j.at("truth_table_hex").get<std::string>());
}

json hypergraph_to_json(const Hypergraph& graph) {
    json edges = json::array();
    for (uint32_t j = 0; j < graph.m; ++j) {
        auto e = graph.edge(j);
        edges.push_back(std::vector<uint32_t>(e.begin(), e.end()));
    }
    return json{{"n", graph.n}, {"m", graph.m}, {"locality", graph.locality},
                {"edges", std::move(edges)}};
}

Hypergraph hypergraph_from_json(const json& j) {
    Hypergraph graph;
    graph.n = j.at("n").get<uint32_t>();
    graph.m = j.at("m").get<uint32_t>();
    graph.locality = j.at("locality").get<uint32_t>();
    graph.edges.reserve(static_cast<size_t>(graph.m) * graph.locality);
    for (const auto& edge : j.at("edges")) {
        for (const auto& v : edge) graph.edges.push_back(v.get<uint32_t>());
    }
    graph.validate();
    return graph;
}

json params_to_json(const SprgParams& p) {
    return json{{"lambda", p.lambda},
                {"n", p.n},
                {"m", p.m},
                {"d", p.d},
                {"delta", p.delta},
                {"ell", p.ell},
                {"t_slack", p.t_slack},
                {"t_threshold", p.t_threshold},
                {"b_buckets", p.b_buckets},
                {"c_capacity", p.c_capacity},
                {"c_side", p.c_side},
                {"p", p.modulus.p()},
                {"prime_bits", p.modulus.bit_length()}};
}

namespace {

std::string bits_hex(std::span<const uint8_t> bits) {
    const size_t nibbles = (bits.size() + 3) / 4;
    std::string out(nibbles, '0');
    for (size_t i = 0; i < nibbles; ++i) {
        int nib = 0;
        for (int b = 0; b < 4; ++b) {
            size_t pos = i * 4 + b;
            if (pos < bits.size() && bits[pos]) nib |= 1 << b;
        }
        out[nibbles - 1 - i] = "0123456789abcdef"[nib];
    }
    return out;
}

} // namespace

json transcript_json(const SprgIndex& index, const StructuredSeed& seed,
                     uint64_t rng_seed) {
    json j{{"schema", kSchemaTag},
           {"rng_seed", rng_seed},
           {"flag", seed.flag},
           {"params", params_to_json(index.params)},
           {"predicate", predicate_to_json(index.prg.predicate)},
           {"hypergraph", hypergraph_to_json(index.prg.hypergraph)}};

    // Histogram of bucket loads: load value -> bucket count.
    std::map<uint32_t, uint64_t> histogram;
    for (uint32_t load : index.buckets.loads()) ++histogram[load];
    json hist = json::object();
    for (auto [load, count] : histogram) hist[std::to_string(load)] = count;
    j["bucket_load_histogram"] = std::move(hist);
    j["capacity_exceeded"] = index.buckets.capacity_exceeded();

    if (seed.debug) {
        const auto& dbg = *seed.debug;
        j["sigma_hex"] = bits_hex(dbg.sigma);
        j["err"] = dbg.err;
        j["err_size"] = dbg.err.size();
        j["bad_size"] = dbg.bad.size();
    }
    return j;
}

json stretch_json(const SprgParams& params, const StretchReport& report,
                  const StretchVerdict& verdict) {
    return json{{"schema", kSchemaTag},
                {"params", params_to_json(params)},
                {"bits",
                 {{"public", report.bits_public},
                  {"s1", report.bits_s1},
                  {"s2", report.bits_s2},
                  {"total", report.bits_total}}},
                {"m_bits", report.m_bits},
                {"n_prime", report.n_prime},
                {"tau_effective", report.tau_effective},
                {"s2_exponent", report.s2_exponent},
                {"expanding", verdict.expanding},
                {"margin", verdict.margin},
                {"asymptotic_caveat", verdict.asymptotic_caveat}};
}

json flag_rate_json(const SprgParams& params, uint32_t locality,
                    const FlagRateReport& report, uint64_t rng_seed) {
    return json{{"schema", kSchemaTag},
                {"params", params_to_json(params)},
                {"locality", locality},
                {"trials", report.trials},
                {"flag_rate", report.rate},
                {"ci", {report.ci_low, report.ci_high}},
                {"condition_breakdown",
                 {{"too_many_bad", report.cond_too_many_bad},
                  {"capacity_exceeded", report.cond_capacity},
                  {"bucket_overload", report.cond_bucket_overload}}},
                {"mean_bad", report.mean_bad},
                {"expected_bad_bound", expected_bad_bound(params, locality)},
                {"rng_seed", rng_seed}};
}

json smudging_json(const DrgParams& params, const Rational& analytic, double empirical_sd,
                   uint64_t trials, uint64_t rng_seed) {
    return json{{"schema", kSchemaTag},
                {"t", params.t_bits},
                {"B", params.b_bound},
                {"m_prime", params.m_prime},
                {"analytic_bound", analytic.value()},
                {"analytic_bound_num", analytic.num},
                {"analytic_bound_den", analytic.den},
                {"empirical_sd", empirical_sd},
                {"trials", trials},
                {"rng_seed", rng_seed}};
}

} // namespace sprglab
