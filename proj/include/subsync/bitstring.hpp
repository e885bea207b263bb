#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "subsync/rng.hpp"

namespace subsync {

// Packed binary string. Bit 0 is the leftmost character of the text form and is
// stored in the most significant bit of word 0; unused tail bits are always zero,
// so word-wise comparison and hashing are exact.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::size_t length, bool fill = false);

    // Text form: '0'/'1' only. Throws Error{FormatError} on anything else.
    static BitString parse(std::string_view text);
    static BitString random(std::size_t length, SplitMix64& rng);
    // Repeats `unit` `times` times.
    static BitString repeat(const BitString& unit, std::size_t times);

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }

    // 0-based access.
    bool bit(std::size_t index) const noexcept {
        return ((words_[index >> 6] >> (63 - (index & 63))) & 1U) != 0;
    }
    void set(std::size_t index, bool value) noexcept;
    void push_back(bool value) { append_bits(value ? 1U : 0U, 1); }

    // Reads `count` <= 64 bits starting at `pos`, returned right-aligned.
    std::uint64_t read_bits(std::size_t pos, unsigned count) const noexcept;
    // Appends the low `count` <= 64 bits of `value`, most significant first.
    void append_bits(std::uint64_t value, unsigned count);
    void append(const BitString& src, std::size_t from, std::size_t count);
    void append(const BitString& src) { append(src, 0, src.size()); }

    BitString substr(std::size_t from, std::size_t count) const;
    // 0-based index of the first occurrence of `pattern` at or after `from`, or npos.
    std::size_t find(const BitString& pattern, std::size_t from = 0) const noexcept;
    bool contains(const BitString& pattern) const noexcept { return find(pattern) != npos; }

    std::string str() const;
    std::span<const std::uint64_t> words() const noexcept { return words_; }
    std::size_t hash() const noexcept;

    void reserve(std::size_t bits) { words_.reserve((bits + 63) / 64); }

    friend bool operator==(const BitString&, const BitString&) = default;
    // Shorter strings order first; equal lengths compare lexicographically.
    friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) noexcept;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

struct BitStringHash {
    std::size_t operator()(const BitString& s) const noexcept { return s.hash(); }
};

// Binary form: 2-byte big-endian bit length, then ceil(len/8) bytes MSB-first,
// zero-padded. Lengths above 65535 bits are rejected with FormatError.
std::vector<std::uint8_t> to_binary(const BitString& s);
// Parses one binary-form string from the front of `bytes`; returns it and the
// number of bytes consumed.
std::pair<BitString, std::size_t> from_binary(std::span<const std::uint8_t> bytes);

/// Replaces substring u (at 1-based `position`) by v.
struct SubstringEdit {
    std::size_t position = 1;
    BitString deleted;
    BitString inserted;

    // The edit that undoes this one on its output.
    SubstringEdit inverse() const { return {position, inserted, deleted}; }
    friend bool operator==(const SubstringEdit&, const SubstringEdit&) = default;
};

enum class IdsKind { Insertion, Deletion, Substitution };

struct IdsEdit {
    IdsKind kind = IdsKind::Substitution;
    std::size_t position = 1;  // 1-based
    bool symbol = false;       // unused for deletions
};

struct EditParams {
    std::size_t n = 1;
    unsigned t = 0;
    unsigned k = 1;

    void validate() const;
    friend bool operator==(const EditParams&, const EditParams&) = default;
};

BitString apply_substring_edit(const BitString& x, const SubstringEdit& e);
BitString apply_ids_edit(const BitString& x, const IdsEdit& e);

// True iff every length-`window` substring of x contains `pattern`. Strings
// shorter than the window are judged as a single whole-string window.
bool is_pattern_dense(const BitString& x, const BitString& pattern, std::size_t window);

struct DensityPreset {
    BitString pattern;
    std::size_t window;
};

// p = 0^k 1^k and window = ceil(k * 2^(2k+3) * log2 n), computed exactly.
DensityPreset density_preset(unsigned k, std::size_t n);

// ceil(alpha * log2 n); exact when alpha is integral.
std::size_t scaled_log_window(double alpha, std::size_t n);

// 0^k 1^k
BitString zeros_then_ones(unsigned k);

struct EditTrace {
    BitString result;
    std::vector<SubstringEdit> edits;
};

// Applies t random k-substring edits in sequence. Each round draws |u| uniformly
// from [0, min(k, len)], the position uniformly among valid ones, |v| uniformly
// from [0, k] and v uniformly among strings of that length.
EditTrace sample_edit_trace(const BitString& x, unsigned t, unsigned k, std::uint64_t seed);

}  // namespace subsync
