#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <gmpxx.h>

#include "subsync/bitstring.hpp"

namespace subsync {

// Deduplicated set of strings. Iteration order is unspecified; use sorted() for
// anything that is printed or compared across runs.
class StringSet {
public:
    using Storage = std::unordered_set<BitString, BitStringHash>;

    StringSet() = default;
    StringSet(std::initializer_list<BitString> init) : members_(init) {}
    explicit StringSet(Storage members) : members_(std::move(members)) {}

    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    bool contains(const BitString& s) const { return members_.contains(s); }
    bool insert(BitString s) { return members_.insert(std::move(s)).second; }

    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    bool is_subset_of(const StringSet& other) const;
    std::vector<BitString> sorted() const;

    template <typename Pred>
    std::size_t erase_if(Pred pred) {
        return std::erase_if(members_, pred);
    }

    friend bool operator==(const StringSet& a, const StringSet& b) { return a.members_ == b.members_; }

private:
    Storage members_;
};

struct BallLimits {
    std::size_t max_members = 50'000'000;
    std::size_t oracle_max_length = 12;
};

// Visits every single k-substring edit output of z whose length lies in
// [min_len, max_len]. Outputs equal to z by an identity edit (u == v) are skipped;
// other duplicates are not filtered.
template <typename Emit>
void for_each_single_edit(const BitString& z, unsigned k, std::size_t min_len, std::size_t max_len, Emit&& emit);

// B_t(x) under k-substring edits: all strings reachable by at most t edits.
StringSet edit_ball(const BitString& x, unsigned t, unsigned k, const BallLimits& limits = {});

// Length-`target` members of B_t(x), pruning strings that can no longer reach
// the target length. Used by decoders and by the confusion ball.
StringSet edit_ball_slice(const BitString& x, unsigned t, unsigned k, std::size_t target,
                          const BallLimits& limits = {});

StringSet ids_edit_ball(const BitString& x, unsigned tau, const BallLimits& limits = {});

// C_t(x) = length-|x| members of B_2t(x), exact because edits are invertible.
StringSet confusion_ball(const BitString& x, unsigned t, unsigned k, const BallLimits& limits = {});

// Definition-level scan of all 2^|x| candidates. Independent of confusion_ball.
StringSet confusion_ball_oracle(const BitString& x, unsigned t, unsigned k, const BallLimits& limits = {});

// Dense members of C_t(x). Throws NotDense if x itself is not dense.
StringSet restricted_confusion_ball(const BitString& x, unsigned t, unsigned k, const BitString& pattern,
                                    std::size_t window, const BallLimits& limits = {});

// (prod_{i=0}^{2t} (n + i k)) * k^{2t} * 3^{2kt}
mpz_class ball_size_upper_bound(std::size_t n, unsigned t, unsigned k);

struct BallCensusRecord {
    std::size_t n = 0;
    unsigned t = 0;
    unsigned k = 0;
    BitString string;
    std::size_t ball_size = 0;  // |B_2t(x)|
    mpz_class bound;
    std::optional<std::size_t> restricted_size;
    std::size_t ball_t_size = 0;     // |B_t(x)|
    std::size_t confusion_size = 0;  // |C_t(x)|
    std::optional<bool> oracle_match;
    std::optional<std::string> error;  // budget failure for this row
};

// ---------------------------------------------------------------------------

template <typename Emit>
void for_each_single_edit(const BitString& z, unsigned k, std::size_t min_len, std::size_t max_len, Emit&& emit) {
    const std::size_t m = z.size();
    for (std::size_t ulen = 0; ulen <= k && ulen <= m; ++ulen) {
        for (std::size_t vlen = 0; vlen <= k; ++vlen) {
            const std::size_t out_len = m - ulen + vlen;
            if (out_len < min_len || out_len > max_len) continue;
            const std::uint64_t variants = std::uint64_t{1} << vlen;
            for (std::size_t start = 0; start + ulen <= m; ++start) {
                const std::uint64_t deleted = z.read_bits(start, static_cast<unsigned>(ulen));
                for (std::uint64_t v = 0; v < variants; ++v) {
                    if (ulen == vlen && v == deleted) continue;
                    BitString y;
                    y.reserve(out_len);
                    y.append(z, 0, start);
                    y.append_bits(v, static_cast<unsigned>(vlen));
                    y.append(z, start + ulen, m - start - ulen);
                    emit(std::move(y));
                }
            }
        }
    }
}

}  // namespace subsync
