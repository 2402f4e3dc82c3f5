#include "sprglab/rng.hpp"

namespace sprglab {

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

uint64_t hash_label(std::string_view label) {
    // FNV-1a over the label bytes, finalized through mix64.
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
        h ^= static_cast<uint8_t>(c);
        h *= 0x100000001b3ULL;
    }
    return mix64(h);
}

} // namespace

Rng::Rng(uint64_t seed) : root_(seed), engine_(mix64(seed)) {}

Rng Rng::stream(std::string_view label, uint64_t index) const {
    uint64_t key = root_;
    key = mix64(key ^ hash_label(label));
    key = mix64(key ^ index);
    return Rng(key);
}

uint64_t Rng::next_u64() {
    return engine_();
}

uint64_t Rng::below(uint64_t bound) {
    // Lemire's multiply-shift with rejection; exact uniformity on [0, bound).
    __uint128_t m = static_cast<__uint128_t>(next_u64()) * bound;
    auto lo = static_cast<uint64_t>(m);
    if (lo < bound) {
        const uint64_t t = (0 - bound) % bound;
        while (lo < t) {
            m = static_cast<__uint128_t>(next_u64()) * bound;
            lo = static_cast<uint64_t>(m);
        }
    }
    return static_cast<uint64_t>(m >> 64);
}

} // namespace sprglab
