#include "subsync/bitstring.hpp"

#include <algorithm>
#include <cmath>

#include "subsync/error.hpp"
#include "subsync/intmath.hpp"

namespace subsync {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidEdit: return "InvalidEdit";
        case Errc::InvalidDensityConfig: return "InvalidDensityConfig";
        case Errc::BallTooLarge: return "BallTooLarge";
        case Errc::OracleTooLarge: return "OracleTooLarge";
        case Errc::NotDense: return "NotDense";
        case Errc::NotSeparable: return "NotSeparable";
        case Errc::LabelingUnsound: return "LabelingUnsound";
        case Errc::NoCandidate: return "NoCandidate";
        case Errc::Ambiguous: return "Ambiguous";
        case Errc::FormatError: return "FormatError";
        case Errc::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

BitString::BitString(std::size_t length, bool fill) : words_((length + 63) / 64, fill ? ~0ULL : 0ULL), size_(length) {
    if (fill && (size_ & 63) != 0) words_.back() &= ~0ULL << (64 - (size_ & 63));
}

BitString BitString::parse(std::string_view text) {
    BitString out;
    out.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') throw Error(Errc::FormatError, "bit string may only contain '0' and '1'");
        out.push_back(c == '1');
    }
    return out;
}

BitString BitString::random(std::size_t length, SplitMix64& rng) {
    BitString out;
    out.reserve(length);
    std::size_t left = length;
    while (left >= 64) {
        out.append_bits(rng.next(), 64);
        left -= 64;
    }
    if (left > 0) out.append_bits(rng.next() >> (64 - left), static_cast<unsigned>(left));
    return out;
}

BitString BitString::repeat(const BitString& unit, std::size_t times) {
    BitString out;
    out.reserve(unit.size() * times);
    for (std::size_t i = 0; i < times; ++i) out.append(unit);
    return out;
}

void BitString::set(std::size_t index, bool value) noexcept {
    const std::uint64_t mask = 1ULL << (63 - (index & 63));
    if (value)
        words_[index >> 6] |= mask;
    else
        words_[index >> 6] &= ~mask;
}

std::uint64_t BitString::read_bits(std::size_t pos, unsigned count) const noexcept {
    if (count == 0) return 0;
    const std::size_t w = pos >> 6;
    const unsigned off = pos & 63;
    std::uint64_t hi = words_[w] << off;
    if (off != 0 && off + count > 64) hi |= words_[w + 1] >> (64 - off);
    return count == 64 ? hi : hi >> (64 - count);
}

void BitString::append_bits(std::uint64_t value, unsigned count) {
    if (count == 0) return;
    const std::uint64_t aligned = count == 64 ? value : value << (64 - count);
    const unsigned off = size_ & 63;
    if (off == 0) {
        words_.push_back(aligned);
    } else {
        words_.back() |= aligned >> off;
        if (off + count > 64) words_.push_back(aligned << (64 - off));
    }
    size_ += count;
}

void BitString::append(const BitString& src, std::size_t from, std::size_t count) {
    while (count >= 64) {
        append_bits(src.read_bits(from, 64), 64);
        from += 64;
        count -= 64;
    }
    if (count > 0) append_bits(src.read_bits(from, static_cast<unsigned>(count)), static_cast<unsigned>(count));
}

BitString BitString::substr(std::size_t from, std::size_t count) const {
    BitString out;
    out.reserve(count);
    out.append(*this, from, count);
    return out;
}

std::size_t BitString::find(const BitString& pattern, std::size_t from) const noexcept {
    const std::size_t m = pattern.size();
    if (m > size_) return npos;
    if (m == 0) return from <= size_ ? from : npos;
    if (m <= 64) {
        const std::uint64_t want = pattern.read_bits(0, static_cast<unsigned>(m));
        for (std::size_t j = from; j + m <= size_; ++j)
            if (read_bits(j, static_cast<unsigned>(m)) == want) return j;
        return npos;
    }
    for (std::size_t j = from; j + m <= size_; ++j) {
        bool match = true;
        for (std::size_t i = 0; i < m && match; ++i) match = bit(j + i) == pattern.bit(i);
        if (match) return j;
    }
    return npos;
}

std::string BitString::str() const {
    std::string out(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
        if (bit(i)) out[i] = '1';
    return out;
}

std::size_t BitString::hash() const noexcept {
    std::uint64_t h = mix_seed(0x5bd1e995ULL, size_);
    for (std::uint64_t w : words_) h = mix_seed(h, w);
    return static_cast<std::size_t>(h);
}

std::strong_ordering operator<=>(const BitString& a, const BitString& b) noexcept {
    if (auto c = a.size_ <=> b.size_; c != 0) return c;
    return std::lexicographical_compare_three_way(a.words_.begin(), a.words_.end(), b.words_.begin(), b.words_.end());
}

std::vector<std::uint8_t> to_binary(const BitString& s) {
    if (s.size() > 0xFFFF) throw Error(Errc::FormatError, "bit string longer than 65535 bits");
    std::vector<std::uint8_t> out;
    out.reserve(2 + (s.size() + 7) / 8);
    out.push_back(static_cast<std::uint8_t>(s.size() >> 8));
    out.push_back(static_cast<std::uint8_t>(s.size() & 0xFF));
    for (std::size_t pos = 0; pos < s.size(); pos += 8) {
        const unsigned take = static_cast<unsigned>(std::min<std::size_t>(8, s.size() - pos));
        out.push_back(static_cast<std::uint8_t>(s.read_bits(pos, take) << (8 - take)));
    }
    return out;
}

std::pair<BitString, std::size_t> from_binary(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2) throw Error(Errc::FormatError, "truncated bit string length");
    const std::size_t len = (std::size_t{bytes[0]} << 8) | bytes[1];
    const std::size_t nbytes = (len + 7) / 8;
    if (bytes.size() < 2 + nbytes) throw Error(Errc::FormatError, "truncated bit string body");
    BitString out;
    out.reserve(len);
    for (std::size_t i = 0; i < nbytes; ++i) {
        const unsigned take = static_cast<unsigned>(std::min<std::size_t>(8, len - 8 * i));
        const std::uint8_t byte = bytes[2 + i];
        if (take < 8 && (byte & ((1U << (8 - take)) - 1)) != 0)
            throw Error(Errc::FormatError, "non-zero padding in bit string");
        out.append_bits(byte >> (8 - take), take);
    }
    return {std::move(out), 2 + nbytes};
}

void EditParams::validate() const {
    if (n < 1) throw Error(Errc::ConfigError, "n must be >= 1");
    if (k < 1) throw Error(Errc::ConfigError, "k must be >= 1");
}

BitString apply_substring_edit(const BitString& x, const SubstringEdit& e) {
    const std::size_t n = x.size();
    const std::size_t ulen = e.deleted.size();
    if (e.position < 1 || ulen > n || e.position > n - ulen + 1)
        throw Error(Errc::InvalidEdit, "position " + std::to_string(e.position) + " out of range");
    const std::size_t start = e.position - 1;
    for (std::size_t i = 0; i < ulen; ++i)
        if (x.bit(start + i) != e.deleted.bit(i))
            throw Error(Errc::InvalidEdit, "deleted substring does not match the target");
    BitString out;
    out.reserve(n - ulen + e.inserted.size());
    out.append(x, 0, start);
    out.append(e.inserted);
    out.append(x, start + ulen, n - start - ulen);
    return out;
}

BitString apply_ids_edit(const BitString& x, const IdsEdit& e) {
    const std::size_t n = x.size();
    const std::size_t limit = e.kind == IdsKind::Insertion ? n + 1 : n;
    if (e.position < 1 || e.position > limit)
        throw Error(Errc::InvalidEdit, "position " + std::to_string(e.position) + " out of range");
    const std::size_t i = e.position - 1;
    BitString out;
    out.reserve(n + 1);
    out.append(x, 0, i);
    switch (e.kind) {
        case IdsKind::Insertion:
            out.push_back(e.symbol);
            out.append(x, i, n - i);
            break;
        case IdsKind::Deletion:
            out.append(x, i + 1, n - i - 1);
            break;
        case IdsKind::Substitution:
            out.push_back(e.symbol);
            out.append(x, i + 1, n - i - 1);
            break;
    }
    return out;
}

bool is_pattern_dense(const BitString& x, const BitString& pattern, std::size_t window) {
    if (pattern.size() > window)
        throw Error(Errc::InvalidDensityConfig, "pattern longer than the density window");
    if (x.size() < window) return x.contains(pattern);
    // Window [i, i + window) holds the pattern iff some occurrence starts in
    // [i, i + window - |p|]. Walk occurrences left to right.
    const std::size_t slack = window - pattern.size();
    const std::size_t last_window = x.size() - window;
    std::size_t occ = x.find(pattern, 0);
    for (std::size_t i = 0; i <= last_window; ++i) {
        if (occ != BitString::npos && occ < i) occ = x.find(pattern, i);
        if (occ == BitString::npos || occ > i + slack) return false;
    }
    return true;
}


BitString zeros_then_ones(unsigned k) {
    BitString p(2 * static_cast<std::size_t>(k));
    for (unsigned i = 0; i < k; ++i) p.set(k + i, true);
    return p;
}

DensityPreset density_preset(unsigned k, std::size_t n) {
    if (k < 1 || n < 2) throw Error(Errc::InvalidDensityConfig, "preset needs k >= 1 and n >= 2");
    if (2 * k + 3 >= 48) throw Error(Errc::InvalidDensityConfig, "k too large for the preset window");
    const unsigned long coeff = static_cast<unsigned long>(k) << (2 * k + 3);
    return {zeros_then_ones(k), ceil_log2_pow(n, coeff)};
}

std::size_t scaled_log_window(double alpha, std::size_t n) {
    if (!(alpha > 0) || n < 2) throw Error(Errc::InvalidDensityConfig, "window rule needs alpha > 0 and n >= 2");
    if (alpha == std::floor(alpha) && alpha < 1e6) return ceil_log2_pow(n, static_cast<unsigned long>(alpha));
    return static_cast<std::size_t>(std::ceil(alpha * std::log2(static_cast<double>(n))));
}

EditTrace sample_edit_trace(const BitString& x, unsigned t, unsigned k, std::uint64_t seed) {
    if (k < 1) throw Error(Errc::ConfigError, "k must be >= 1");
    SplitMix64 rng(seed);
    EditTrace trace{x, {}};
    trace.edits.reserve(t);
    for (unsigned round = 0; round < t; ++round) {
        const BitString& cur = trace.result;
        const std::size_t m = cur.size();
        const std::size_t ulen = rng.below(std::min<std::size_t>(k, m) + 1);
        const std::size_t pos = 1 + rng.below(m - ulen + 1);
        const std::size_t vlen = rng.below(std::size_t{k} + 1);
        SubstringEdit e{pos, cur.substr(pos - 1, ulen), BitString::random(vlen, rng)};
        trace.result = apply_substring_edit(cur, e);
        trace.edits.push_back(std::move(e));
    }
    return trace;
}

}  // namespace subsync
