#pragma once

#include <string>

#include <json.hpp>

#include "sprglab/analysis.hpp"
#include "sprglab/drg.hpp"
#include "sprglab/sprg.hpp"

namespace sprglab {

inline constexpr const char* kSchemaTag = "sprg-lab/v1";

nlohmann::json predicate_to_json(const Predicate& pred);
Predicate predicate_from_json(const nlohmann::json& j);

nlohmann::json hypergraph_to_json(const Hypergraph& graph);
Hypergraph hypergraph_from_json(const nlohmann::json& j);

nlohmann::json params_to_json(const SprgParams& params);

/// Debug-run transcript: sigma, error/bad sets, flag, bucket load histogram,
/// plus the predicate and hypergraph fixtures for reproduction.
nlohmann::json transcript_json(const SprgIndex& index, const StructuredSeed& seed,
                               uint64_t rng_seed);

nlohmann::json stretch_json(const SprgParams& params, const StretchReport& report,
                            const StretchVerdict& verdict);

nlohmann::json flag_rate_json(const SprgParams& params, uint32_t locality,
                              const FlagRateReport& report, uint64_t rng_seed);

/// Smudging experiment report: worst enumerated shift distance over the
/// sampled perturbations against the analytic bound.
nlohmann::json smudging_json(const DrgParams& params, const Rational& analytic,
                             double empirical_sd, uint64_t trials, uint64_t rng_seed);

} // namespace sprglab
