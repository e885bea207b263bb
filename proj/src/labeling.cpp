#include "subsync/labeling.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <utility>

#include "subsync/error.hpp"
#include "subsync/intmath.hpp"
#include "subsync/rng.hpp"

namespace subsync {

namespace {

BigInt from_words(std::span<const std::uint64_t> words) {
    BigInt v;
    if (!words.empty())
        mpz_import(v.get_mpz_t(), words.size(), 1, sizeof(std::uint64_t), 0, 0, words.data());
    return v;
}

class IdentityLabeling final : public LabelingScheme {
public:
    BigInt label(const BitString& x) const override {
        const std::size_t n = x.size();
        BigInt v = from_words(x.words());
        v >>= static_cast<mp_bitcnt_t>(64 * x.words().size() - n);
        BigInt prefix = static_cast<unsigned long>(n);
        prefix += BigInt(1) << static_cast<mp_bitcnt_t>(length_bits(n));
        prefix <<= static_cast<mp_bitcnt_t>(n);
        return prefix + v;
    }

    std::size_t width(std::size_t n) const override { return n + length_bits(n) + 1; }
    std::string name() const override { return "identity"; }

private:
    // ceil(log2(n + 1))
    static std::size_t length_bits(std::size_t n) { return bit_length(BigInt(static_cast<unsigned long>(n))); }
};

class HashLabeling final : public LabelingScheme {
public:
    HashLabeling(std::size_t width_bits, std::uint64_t seed) : width_(width_bits), seed_(seed) {}

    BigInt label(const BitString& x) const override {
        std::uint64_t h = mix_seed(seed_, x.size());
        for (std::uint64_t w : x.words()) h = mix_seed(h, w);
        const std::size_t blocks = (width_ + 63) / 64;
        std::vector<std::uint64_t> digest(blocks);
        for (std::size_t j = 0; j < blocks; ++j) digest[j] = mix_seed(h, 0x100000000ULL + j);
        BigInt v = from_words(digest);
        v >>= static_cast<mp_bitcnt_t>(64 * blocks - width_);
        return v;
    }

    std::size_t width(std::size_t) const override { return width_; }
    std::string name() const override { return "hash:" + std::to_string(width_) + "@" + std::to_string(seed_); }

private:
    std::size_t width_;
    std::uint64_t seed_;
};

// Divisibility by a fixed odd m without a hardware divide: v is a multiple of m
// iff v * m^-1 mod 2^64 does not exceed (2^64 - 1) / m.
class OddDivisibility {
public:
    explicit OddDivisibility(std::uint64_t m) : limit_(~std::uint64_t{0} / m) {
        std::uint64_t inv = m;  // Newton iteration, 5 steps reach 64 bits
        for (int i = 0; i < 5; ++i) inv *= 2 - m * inv;
        inverse_ = inv;
    }

    bool operator()(std::uint64_t v) const noexcept { return v * inverse_ <= limit_; }

private:
    std::uint64_t inverse_ = 0;
    std::uint64_t limit_ = 0;
};

// A difference d = 2^s * o with o odd. For a = 2^e * m (m odd), a | d iff
// s >= e and m | o. Odd parts are usually far shorter than d, since edits leave
// long common suffixes.
struct OddPart {
    std::uint64_t odd;
    unsigned shift;
};

// Odd parts too long for a machine word, as little-endian 32-bit chunks grouped
// by chunk count. For m * chunks < 2^32, sum(chunk_j * (2^(32 j) mod m)) fits in
// 64 bits and has the same residue mod m as the odd part.
struct ChunkGroup {
    std::size_t chunks = 0;
    std::size_t rows = 0;
    std::size_t offset = 0;  // into chunk data
    std::size_t first = 0;   // into row shifts
};

struct DifferencePool {
    std::vector<bool> small;  // small[d] set iff d occurs, d <= small_max
    std::vector<std::uint64_t> small_list;
    std::size_t small_max = 0;
    std::vector<OddPart> medium;
    std::vector<BigInt> large_odd;  // ascending by size
    std::vector<unsigned> large_shift;
    std::vector<std::uint32_t> chunk_data;
    std::vector<ChunkGroup> groups;
    std::size_t max_chunks = 0;
    BigInt max_diff = 0;
};

DifferencePool build_pool(const BigInt& label_x, std::span<const BigInt> others) {
    DifferencePool pool;
    const std::size_t small_cap =
        std::min<std::size_t>(std::size_t{1} << 26, std::max<std::size_t>(1024, 16 * others.size()));
    std::vector<std::pair<BigInt, unsigned>> large;
    BigInt d;
    for (const BigInt& l : others) {
        d = l - label_x;
        mpz_abs(d.get_mpz_t(), d.get_mpz_t());
        if (d == 0) throw Error(Errc::NotSeparable, "label of x collides with another label");
        if (d > pool.max_diff) pool.max_diff = d;
        if (mpz_sizeinbase(d.get_mpz_t(), 2) <= 64) {
            std::uint64_t v = 0;
            mpz_export(&v, nullptr, -1, sizeof(v), 0, 0, d.get_mpz_t());
            if (v <= small_cap) {
                pool.small_list.push_back(v);
                pool.small_max = std::max<std::size_t>(pool.small_max, v);
            } else {
                const auto shift = static_cast<unsigned>(__builtin_ctzll(v));
                pool.medium.push_back({v >> shift, shift});
            }
            continue;
        }
        const auto shift = static_cast<unsigned>(mpz_scan1(d.get_mpz_t(), 0));
        mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), shift);
        if (mpz_sizeinbase(d.get_mpz_t(), 2) <= 64) {
            std::uint64_t v = 0;
            mpz_export(&v, nullptr, -1, sizeof(v), 0, 0, d.get_mpz_t());
            pool.medium.push_back({v, shift});
        } else {
            large.emplace_back(d, shift);
        }
    }
    if (!pool.small_list.empty()) {
        pool.small.assign(pool.small_max + 1, false);
        for (std::uint64_t v : pool.small_list) pool.small[v] = true;
    }
    std::stable_sort(large.begin(), large.end(), [](const auto& lhs, const auto& rhs) {
        return mpz_sizeinbase(lhs.first.get_mpz_t(), 2) < mpz_sizeinbase(rhs.first.get_mpz_t(), 2);
    });
    for (auto& [odd, shift] : large) {
        const std::size_t chunks = (mpz_sizeinbase(odd.get_mpz_t(), 2) + 31) / 32;
        if (pool.groups.empty() || pool.groups.back().chunks != chunks)
            pool.groups.push_back({chunks, 0, pool.chunk_data.size(), pool.large_odd.size()});
        ++pool.groups.back().rows;
        const std::size_t at = pool.chunk_data.size();
        pool.chunk_data.resize(at + chunks, 0);
        mpz_export(&pool.chunk_data[at], nullptr, -1, sizeof(std::uint32_t), 0, 0, odd.get_mpz_t());
        pool.max_chunks = chunks;
        pool.large_odd.push_back(std::move(odd));
        pool.large_shift.push_back(shift);
    }
    return pool;
}

// A divisor hit promotes the element halfway towards the front, so differences
// with many small divisors get tested first. Order never affects the result.
template <typename T, typename Divides>
bool any_divisible(std::vector<T>& values, Divides&& divides) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (divides(values[i])) {
            if (i > 0) std::swap(values[i], values[i / 2]);
            return true;
        }
    }
    return false;
}

template <std::size_t C>
bool group_divisible(const std::uint32_t* data, const unsigned* shifts, std::size_t rows, std::size_t chunks,
                     const std::uint32_t* weights, const OddDivisibility& test, unsigned e) {
    const std::size_t c = C == 0 ? chunks : C;
    for (std::size_t i = 0; i < rows; ++i) {
        const std::uint32_t* row = data + i * c;
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < c; ++j) acc += std::uint64_t{row[j]} * weights[j];
        if (shifts[i] >= e && test(acc)) return true;
    }
    return false;
}

// Whether 2^e * m divides some large difference, for m * max_chunks < 2^32.
bool large_divisible(const DifferencePool& pool, std::uint64_t m, unsigned e, std::vector<std::uint32_t>& weights) {
    weights.resize(pool.max_chunks);
    std::uint64_t w = 1 % m;
    for (auto& wj : weights) {
        wj = static_cast<std::uint32_t>(w);
        w = (w << 32) % m;
    }
    const OddDivisibility test(m);
    for (const ChunkGroup& g : pool.groups) {
        const std::uint32_t* data = pool.chunk_data.data() + g.offset;
        const unsigned* shifts = pool.large_shift.data() + g.first;
        bool hit = false;
        switch (g.chunks) {
#define SUBSYNC_GROUP_CASE(N) \
    case N: hit = group_divisible<N>(data, shifts, g.rows, g.chunks, weights.data(), test, e); break;
            SUBSYNC_GROUP_CASE(3) SUBSYNC_GROUP_CASE(4) SUBSYNC_GROUP_CASE(5) SUBSYNC_GROUP_CASE(6)
            SUBSYNC_GROUP_CASE(7) SUBSYNC_GROUP_CASE(8) SUBSYNC_GROUP_CASE(9) SUBSYNC_GROUP_CASE(10)
            SUBSYNC_GROUP_CASE(11) SUBSYNC_GROUP_CASE(12) SUBSYNC_GROUP_CASE(13) SUBSYNC_GROUP_CASE(14)
            SUBSYNC_GROUP_CASE(15) SUBSYNC_GROUP_CASE(16) SUBSYNC_GROUP_CASE(17) SUBSYNC_GROUP_CASE(18)
#undef SUBSYNC_GROUP_CASE
            default: hit = group_divisible<0>(data, shifts, g.rows, g.chunks, weights.data(), test, e); break;
        }
        if (hit) return true;
    }
    return false;
}

}  // namespace

LabelingPtr identity_labeling() { return std::make_shared<IdentityLabeling>(); }

LabelingPtr hash_labeling(std::size_t width_bits, std::uint64_t seed) {
    if (width_bits < 1) throw Error(Errc::ConfigError, "hash labeling needs R >= 1");
    return std::make_shared<HashLabeling>(width_bits, seed);
}

std::size_t ids_label_width_bound(unsigned tau, std::size_t n) {
    if (tau < 1 || n < 2) throw Error(Errc::ConfigError, "width bound needs tau >= 1 and n >= 2");
    const unsigned long t2 = static_cast<unsigned long>(tau) * tau;
    const unsigned long coeff = (t2 + 1) * (2 * t2 + 1) + 2 * t2 * (tau - 1);
    return ceil_log2_pow(n, coeff);
}

bool verify_labeling(const LabelingScheme& f, const StringSet& ball, const BitString& x) {
    const BigInt lx = f.label(x);
    for (const BitString& y : ball)
        if (y != x && f.label(y) == lx) return false;
    return true;
}

Modulus::Modulus(BigInt value) : value_(std::move(value)) {
    if (value_ < 2) throw Error(Errc::ConfigError, "modulus must be >= 2");
}

Modulus find_separating_modulus(const BigInt& label_x, std::span<const BigInt> others) {
    // a separates iff it divides none of the differences |l - l_x|; candidates
    // are tried in increasing order so the first survivor is the minimum.
    DifferencePool pool = build_pool(label_x, others);
    std::vector<std::uint32_t> weights;
    const std::uint64_t last_native = std::numeric_limits<std::uint64_t>::max() - 1;
    for (std::uint64_t a = 2; a <= last_native; ++a) {
        if (a > pool.max_diff) return Modulus(BigInt(static_cast<unsigned long>(a)));
        bool hit = false;
        // Walk multiples of a through the bitmap or test the list, whichever is shorter.
        if (pool.small_max / a < pool.small_list.size()) {
            for (std::size_t v = a; v <= pool.small_max && !hit; v += a) hit = pool.small[v];
        } else {
            hit = any_divisible(pool.small_list, [a](std::uint64_t d) { return d % a == 0; });
        }
        if (hit) continue;
        const auto e = static_cast<unsigned>(__builtin_ctzll(a));
        const std::uint64_t m = a >> e;
        const OddDivisibility odd_test(m);
        if (any_divisible(pool.medium, [&](const OddPart& d) { return d.shift >= e && odd_test(d.odd); })) continue;
        if (pool.large_odd.empty()) return Modulus(BigInt(static_cast<unsigned long>(a)));
        if (m * pool.max_chunks < (std::uint64_t{1} << 32)) {
            hit = large_divisible(pool, m, e, weights);
        } else {
            for (std::size_t i = 0; i < pool.large_odd.size() && !hit; ++i)
                hit = pool.large_shift[i] >= e &&
                      mpz_divisible_ui_p(pool.large_odd[i].get_mpz_t(), static_cast<unsigned long>(m)) != 0;
        }
        if (!hit) return Modulus(BigInt(static_cast<unsigned long>(a)));
    }
    // Beyond 64-bit candidates: plain big-integer scan (bounded by max_diff + 1).
    BigInt diff;
    for (BigInt a = BigInt(static_cast<unsigned long>(last_native)) + 1;; ++a) {
        if (a > pool.max_diff) return Modulus(a);
        bool hit = false;
        for (const BigInt& l : others) {
            diff = l - label_x;
            if (mpz_divisible_p(diff.get_mpz_t(), a.get_mpz_t()) != 0) {
                hit = true;
                break;
            }
        }
        if (!hit) return Modulus(a);
    }
}

bool separates(const BigInt& label_x, std::span<const BigInt> others, const BigInt& modulus) {
    BigInt rx, r;
    mpz_fdiv_r(rx.get_mpz_t(), label_x.get_mpz_t(), modulus.get_mpz_t());
    for (const BigInt& l : others) {
        mpz_fdiv_r(r.get_mpz_t(), l.get_mpz_t(), modulus.get_mpz_t());
        if (r == rx) return false;
    }
    return true;
}

std::vector<BigInt> labels_of(const LabelingScheme& f, const StringSet& set, const BitString& skip) {
    std::vector<BigInt> out;
    out.reserve(set.size());
    for (const BitString& y : set)
        if (y != skip) out.push_back(f.label(y));
    return out;
}

}  // namespace subsync
