#include "sprglab/serialize.hpp"

#include <cstring>
#include <fstream>

namespace sprglab {

namespace {

constexpr char kIndexMagic[8] = {'S', 'P', 'R', 'G', 'L', 'A', 'B', 'I'};
constexpr char kSeedMagic[8] = {'S', 'P', 'R', 'G', 'L', 'A', 'B', 'S'};

class Writer {
public:
    void u8(uint8_t v) { buf_.push_back(v); }
    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void u64(uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void f64(double v) {
        uint64_t bits;
        std::memcpy(&bits, &v, 8);
        u64(bits);
    }
    void raw(const char* data, size_t len) {
        buf_.insert(buf_.end(), data, data + len);
    }
    void element(uint64_t v, uint32_t width) {
        for (uint32_t i = 0; i < width; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void elements(const FieldVec& v, uint32_t width) {
        for (uint64_t x : v) element(x, width);
    }
    void bits(std::span<const uint8_t> b) {
        for (size_t i = 0; i < b.size(); i += 8) {
            uint8_t byte = 0;
            for (size_t k = 0; k < 8 && i + k < b.size(); ++k) {
                if (b[i + k]) byte |= static_cast<uint8_t>(1 << k);
            }
            buf_.push_back(byte);
        }
    }
    size_t size() const { return buf_.size(); }
    std::vector<uint8_t> take() { return std::move(buf_); }

private:
    std::vector<uint8_t> buf_;
};

class Reader {
public:
    explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("parse error at offset " + std::to_string(pos_) + ": " + what);
    }
    void need(size_t n, const char* what) const {
        if (pos_ + n > bytes_.size()) {
            throw ParseError("parse error at offset " + std::to_string(pos_) +
                             ": truncated while reading " + what);
        }
    }
    uint8_t u8(const char* what) {
        need(1, what);
        return bytes_[pos_++];
    }
    uint32_t u32(const char* what) {
        need(4, what);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(bytes_[pos_++]) << (8 * i);
        return v;
    }
    uint64_t u64(const char* what) {
        need(8, what);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(bytes_[pos_++]) << (8 * i);
        return v;
    }
    double f64(const char* what) {
        uint64_t bits = u64(what);
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    void magic(const char (&expect)[8]) {
        need(8, "magic");
        if (std::memcmp(bytes_.data() + pos_, expect, 8) != 0) fail("bad magic");
        pos_ += 8;
    }
    uint64_t element(uint32_t width, uint64_t p, const char* what) {
        need(width, what);
        uint64_t v = 0;
        for (uint32_t i = 0; i < width; ++i) {
            v |= static_cast<uint64_t>(bytes_[pos_++]) << (8 * i);
        }
        if (v >= p) fail(std::string(what) + " element not reduced mod p");
        return v;
    }
    FieldVec elements(uint64_t count, uint32_t width, uint64_t p, const char* what) {
        FieldVec v(count);
        for (auto& x : v) x = element(width, p, what);
        return v;
    }
    std::vector<uint8_t> bits(uint64_t count, const char* what) {
        const uint64_t bytes = (count + 7) / 8;
        need(bytes, what);
        std::vector<uint8_t> out(count);
        for (uint64_t i = 0; i < count; ++i) {
            out[i] = (bytes_[pos_ + i / 8] >> (i % 8)) & 1;
        }
        pos_ += bytes;
        return out;
    }
    void done() const {
        if (pos_ != bytes_.size()) {
            throw ParseError("parse error at offset " + std::to_string(pos_) +
                             ": trailing bytes");
        }
    }
    size_t pos() const { return pos_; }

private:
    std::span<const uint8_t> bytes_;
    size_t pos_ = 0;
};

void write_params(Writer& w, const SprgParams& p) {
    w.u64(p.lambda);
    w.u64(p.n);
    w.u64(p.m);
    w.u64(p.d);
    w.f64(p.delta);
    w.u64(p.ell);
    w.u64(p.t_slack);
    w.u64(p.t_threshold);
    w.u64(p.b_buckets);
    w.u64(p.c_capacity);
    w.u64(p.c_side);
    w.u64(p.modulus.p());
}

SprgParams read_params(Reader& r) {
    SprgParams p;
    p.lambda = r.u64("lambda");
    p.n = r.u64("n");
    p.m = r.u64("m");
    p.d = r.u64("d");
    p.delta = r.f64("delta");
    p.ell = r.u64("ell");
    p.t_slack = r.u64("t_slack");
    p.t_threshold = r.u64("t_threshold");
    p.b_buckets = r.u64("b_buckets");
    p.c_capacity = r.u64("c_capacity");
    p.c_side = r.u64("c_side");
    uint64_t prime = r.u64("p");
    try {
        p.modulus = PrimeModulus::from_prime(prime);
        p.validate();
    } catch (const Error& e) {
        r.fail(e.what());
    }
    return p;
}

} // namespace

std::vector<uint8_t> serialize_index(const SprgIndex& index, uint64_t rng_seed) {
    Writer w;
    w.raw(kIndexMagic, 8);
    w.u32(kFormatVersion);
    w.u64(rng_seed);
    write_params(w, index.params);

    const Predicate& pred = index.prg.predicate;
    w.u32(pred.locality());
    w.bits(pred.truth_table());

    for (uint32_t e : index.prg.hypergraph.edges) w.u32(e);

    const uint32_t width = index.params.modulus.element_bytes();
    w.elements(index.a.entries(), width);

    for (uint64_t word : index.buckets.seed()) w.u64(word);
    return w.take();
}

SprgIndex deserialize_index(std::span<const uint8_t> bytes, uint64_t* rng_seed) {
    Reader r(bytes);
    r.magic(kIndexMagic);
    if (r.u32("version") != kFormatVersion) r.fail("unsupported format version");
    const uint64_t seed_word = r.u64("rng_seed");
    if (rng_seed) *rng_seed = seed_word;
    SprgParams params = read_params(r);

    const uint32_t locality = r.u32("locality");
    if (locality < 1 || locality > kMaxLocality) r.fail("locality out of range");
    std::vector<uint8_t> table = r.bits(uint64_t{1} << locality, "truth table");
    Predicate pred(locality, std::move(table));

    Hypergraph graph;
    graph.n = static_cast<uint32_t>(params.n);
    graph.m = static_cast<uint32_t>(params.m);
    graph.locality = locality;
    graph.edges.resize(static_cast<size_t>(params.m) * locality);
    for (auto& e : graph.edges) e = r.u32("edge index");

    const uint32_t width = params.modulus.element_bytes();
    FieldVec entries =
        r.elements(params.ell * params.n, width, params.modulus.p(), "matrix");

    std::array<uint64_t, 4> phi_seed{};
    for (auto& word : phi_seed) word = r.u64("phi seed");
    r.done();

    SprgIndex index{{Predicate::constant(1, false), {}, {}, 0},
                    BucketMaps::build(params.m, params.b_buckets, params.c_capacity,
                                      params.c_side, phi_seed),
                    FieldMat::from_entries(params.ell, params.n, std::move(entries)),
                    params};
    try {
        index.prg = assemble_prg_index(std::move(pred), std::move(graph));
    } catch (const Error& e) {
        throw ParseError(std::string("parse error: inconsistent index: ") + e.what());
    }
    if (index.prg.degree != params.d) {
        throw ParseError("parse error: predicate degree disagrees with parameters");
    }
    return index;
}

std::vector<uint8_t> serialize_seed(const StructuredSeed& seed, const PrimeModulus& mod,
                                    uint64_t rng_seed, SeedSizeBreakdown* breakdown) {
    const uint32_t width = mod.element_bytes();
    SeedSizeBreakdown sizes;

    Writer w;
    w.raw(kSeedMagic, 8);
    w.u32(kFormatVersion);
    w.u64(rng_seed);
    w.u64(seed.b.size());
    w.u64(seed.s_tensor.size());
    w.u64(seed.u.size());
    w.u64(seed.u.empty() ? 0 : seed.u.front().rows());  // side
    w.u64(seed.u.empty() ? 0 : seed.u.front().cols());  // t
    w.u64(mod.p());
    sizes.header_bytes = w.size();

    size_t mark = w.size();
    w.elements(seed.b, width);
    sizes.public_payload = w.size() - mark;

    w.u8(seed.flag);
    sizes.flag_bytes = 1;

    mark = w.size();
    w.elements(seed.s_tensor, width);
    sizes.s1_payload = w.size() - mark;

    mark = w.size();
    for (size_t i = 0; i < seed.u.size(); ++i) {
        w.elements(seed.u[i].entries(), width);
        w.elements(seed.v[i].entries(), width);
    }
    sizes.s2_payload = w.size() - mark;

    const size_t before_debug = w.size();
    w.u8(seed.debug.has_value() ? 1 : 0);
    if (seed.debug) {
        if (seed.debug->sigma.size() != seed.b.size() ||
            seed.debug->noise.size() != seed.b.size()) {
            throw MalformedSeed("debug transcript dimensions disagree with the seed");
        }
        w.bits(seed.debug->sigma);
        w.elements(seed.debug->noise, width);
    }
    sizes.debug_bytes = w.size() - before_debug;

    if (breakdown) *breakdown = sizes;
    return w.take();
}

StructuredSeed deserialize_seed(std::span<const uint8_t> bytes, uint64_t* rng_seed,
                                PrimeModulus* mod_out) {
    Reader r(bytes);
    r.magic(kSeedMagic);
    if (r.u32("version") != kFormatVersion) r.fail("unsupported format version");
    const uint64_t seed_word = r.u64("rng_seed");
    if (rng_seed) *rng_seed = seed_word;

    const uint64_t n = r.u64("n");
    const uint64_t tensor_dim = r.u64("tensor_dim");
    const uint64_t buckets = r.u64("buckets");
    const uint64_t side = r.u64("side");
    const uint64_t t = r.u64("t");
    PrimeModulus mod;
    try {
        mod = PrimeModulus::from_prime(r.u64("p"));
    } catch (const Error& e) {
        r.fail(e.what());
    }
    if (mod_out) *mod_out = mod;
    const uint32_t width = mod.element_bytes();
    const uint64_t p = mod.p();

    StructuredSeed seed;
    seed.b = r.elements(n, width, p, "public vector");
    seed.flag = r.u8("flag");
    if (seed.flag > 1) r.fail("flag is not a bit");
    seed.s_tensor = r.elements(tensor_dim, width, p, "secret tensor");
    seed.u.reserve(buckets);
    seed.v.reserve(buckets);
    for (uint64_t i = 0; i < buckets; ++i) {
        seed.u.push_back(
            FieldMat::from_entries(side, t, r.elements(side * t, width, p, "factor U")));
        seed.v.push_back(
            FieldMat::from_entries(t, side, r.elements(t * side, width, p, "factor V")));
    }
    const uint8_t has_debug = r.u8("debug marker");
    if (has_debug > 1) r.fail("debug marker is not a bit");
    if (has_debug) {
        DebugTranscript debug;
        debug.sigma = r.bits(n, "sigma");
        debug.noise = r.elements(n, width, p, "noise");
        for (size_t i = 0; i < debug.noise.size(); ++i) {
            if (debug.noise[i]) debug.err.push_back(static_cast<uint32_t>(i));
        }
        seed.debug = std::move(debug);
    }
    r.done();
    return seed;
}

void write_file(const std::string& path, std::span<const uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("short write to " + path);
}

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw Error("cannot open " + path + " for reading");
    const std::streamsize size = in.tellg();
    in.seekg(0);
    std::vector<uint8_t> bytes(static_cast<size_t>(size));
    in.read(reinterpret_cast<char*>(bytes.data()), size);
    if (!in) throw Error("short read from " + path);
    return bytes;
}

} // namespace sprglab
