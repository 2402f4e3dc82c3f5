#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sprglab/sprg.hpp"

namespace sprglab {

inline constexpr uint32_t kFormatVersion = 1;

/// Byte accounting of a serialized seed, separating element payload from
/// framing (magic, version, dimensions, the flag byte's padding).
struct SeedSizeBreakdown {
    uint64_t header_bytes = 0;
    uint64_t public_payload = 0;  // the n encoded elements
    uint64_t flag_bytes = 0;      // one byte carrying the single flag bit
    uint64_t s1_payload = 0;      // secret tensor
    uint64_t s2_payload = 0;      // factor matrices
    uint64_t debug_bytes = 0;

    uint64_t total() const {
        return header_bytes + public_payload + flag_bytes + s1_payload + s2_payload +
               debug_bytes;
    }
};

/// Canonical little-endian encoding: fixed-width element limbs of
/// ceil(bit_length/8) bytes, length-prefixed vectors, bit-packed Boolean
/// strings. Identical inputs produce identical bytes.
std::vector<uint8_t> serialize_index(const SprgIndex& index, uint64_t rng_seed);
SprgIndex deserialize_index(std::span<const uint8_t> bytes, uint64_t* rng_seed = nullptr);

/// Seeds are self-contained: dimensions travel in the header. Debug
/// transcripts store sigma and the noise vector; derived sets are recomputed
/// against the index on load or during verification.
std::vector<uint8_t> serialize_seed(const StructuredSeed& seed, const PrimeModulus& mod,
                                    uint64_t rng_seed,
                                    SeedSizeBreakdown* breakdown = nullptr);
StructuredSeed deserialize_seed(std::span<const uint8_t> bytes,
                                uint64_t* rng_seed = nullptr,
                                PrimeModulus* mod_out = nullptr);

void write_file(const std::string& path, std::span<const uint8_t> bytes);
std::vector<uint8_t> read_file(const std::string& path);

} // namespace sprglab
