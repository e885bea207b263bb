#include "subsync/balls.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "subsync/error.hpp"

namespace subsync {

bool StringSet::is_subset_of(const StringSet& other) const {
    if (size() > other.size()) return false;
    return std::all_of(begin(), end(), [&](const BitString& s) { return other.contains(s); });
}

std::vector<BitString> StringSet::sorted() const {
    std::vector<BitString> out(begin(), end());
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

constexpr unsigned kMaxEditSize = 32;

void check_k(unsigned k) {
    if (k < 1 || k > kMaxEditSize) throw Error(Errc::ConfigError, "k must lie in [1, 32]");
}

[[noreturn]] void too_large(std::size_t limit) {
    throw Error(Errc::BallTooLarge, "ball exceeds the member budget of " + std::to_string(limit));
}

// Level-by-level breadth-first expansion with global deduplication. Only the
// newest level is expanded each round, since older members were expanded already.
// With a target length, strings that cannot reach it in the remaining rounds are
// never generated.
template <typename Expand>
StringSet::Storage expand_levels(const BitString& x, unsigned rounds, std::size_t reach_per_round,
                                 std::optional<std::size_t> target, std::size_t budget, Expand&& expand_one) {
    StringSet::Storage visited;
    std::vector<const BitString*> frontier{&*visited.insert(x).first};
    std::vector<const BitString*> next;
    for (unsigned round = 1; round <= rounds && !frontier.empty(); ++round) {
        std::size_t lo = 0;
        std::size_t hi = std::numeric_limits<std::size_t>::max();
        if (target) {
            const std::size_t slack = std::size_t{rounds - round} * reach_per_round;
            lo = *target > slack ? *target - slack : 0;
            hi = *target + slack;
        }
        next.clear();
        for (const BitString* z : frontier) {
            expand_one(*z, lo, hi, [&](BitString&& y) {
                auto [it, inserted] = visited.insert(std::move(y));
                if (inserted) {
                    next.push_back(&*it);
                    if (visited.size() > budget) too_large(budget);
                }
            });
        }
        frontier.swap(next);
    }
    return visited;
}

StringSet substring_ball(const BitString& x, unsigned t, unsigned k, std::optional<std::size_t> target,
                         const BallLimits& limits) {
    check_k(k);
    auto visited = expand_levels(x, t, k, target, limits.max_members,
                                 [k](const BitString& z, std::size_t lo, std::size_t hi, auto&& emit) {
                                     for_each_single_edit(z, k, lo, hi, emit);
                                 });
    StringSet out(std::move(visited));
    if (target) out.erase_if([&](const BitString& s) { return s.size() != *target; });
    return out;
}

template <typename Emit>
void for_each_ids_edit(const BitString& z, Emit&& emit) {
    const std::size_t m = z.size();
    for (std::size_t i = 0; i < m; ++i) {
        BitString del;
        del.reserve(m - 1);
        del.append(z, 0, i);
        del.append(z, i + 1, m - i - 1);
        emit(std::move(del));

        BitString sub = z;
        sub.set(i, !z.bit(i));
        emit(std::move(sub));
    }
    for (std::size_t i = 0; i <= m; ++i) {
        for (bool symbol : {false, true}) {
            BitString ins;
            ins.reserve(m + 1);
            ins.append(z, 0, i);
            ins.push_back(symbol);
            ins.append(z, i, m - i);
            emit(std::move(ins));
        }
    }
}

}  // namespace

StringSet edit_ball(const BitString& x, unsigned t, unsigned k, const BallLimits& limits) {
    return substring_ball(x, t, k, std::nullopt, limits);
}

StringSet edit_ball_slice(const BitString& x, unsigned t, unsigned k, std::size_t target, const BallLimits& limits) {
    return substring_ball(x, t, k, target, limits);
}

StringSet ids_edit_ball(const BitString& x, unsigned tau, const BallLimits& limits) {
    auto visited = expand_levels(x, tau, 1, std::nullopt, limits.max_members,
                                 [](const BitString& z, std::size_t, std::size_t, auto&& emit) {
                                     for_each_ids_edit(z, emit);
                                 });
    return StringSet(std::move(visited));
}

StringSet confusion_ball(const BitString& x, unsigned t, unsigned k, const BallLimits& limits) {
    if (t < 1) throw Error(Errc::ConfigError, "confusion ball needs t >= 1");
    return substring_ball(x, 2 * t, k, x.size(), limits);
}

StringSet confusion_ball_oracle(const BitString& x, unsigned t, unsigned k, const BallLimits& limits) {
    if (t < 1) throw Error(Errc::ConfigError, "confusion ball needs t >= 1");
    const std::size_t n = x.size();
    if (n > limits.oracle_max_length || n >= 63)
        throw Error(Errc::OracleTooLarge, "oracle limited to length " + std::to_string(limits.oracle_max_length));
    const StringSet mine = edit_ball(x, t, k, limits);
    StringSet out;
    for (std::uint64_t value = 0; value < (std::uint64_t{1} << n); ++value) {
        BitString y;
        y.append_bits(value, static_cast<unsigned>(n));
        const StringSet theirs = edit_ball(y, t, k, limits);
        const bool meets = std::any_of(theirs.begin(), theirs.end(), [&](const BitString& z) { return mine.contains(z); });
        if (meets) out.insert(std::move(y));
    }
    return out;
}

StringSet restricted_confusion_ball(const BitString& x, unsigned t, unsigned k, const BitString& pattern,
                                    std::size_t window, const BallLimits& limits) {
    if (!is_pattern_dense(x, pattern, window)) throw Error(Errc::NotDense, "x is not (p, delta)-dense");
    StringSet ball = confusion_ball(x, t, k, limits);
    ball.erase_if([&](const BitString& y) { return !is_pattern_dense(y, pattern, window); });
    return ball;
}

mpz_class ball_size_upper_bound(std::size_t n, unsigned t, unsigned k) {
    mpz_class bound = 1;
    for (unsigned i = 0; i <= 2 * t; ++i) bound *= mpz_class(static_cast<unsigned long>(n + std::size_t{i} * k));
    mpz_class factor;
    mpz_ui_pow_ui(factor.get_mpz_t(), k, 2UL * t);
    bound *= factor;
    mpz_ui_pow_ui(factor.get_mpz_t(), 3, 2UL * k * t);
    bound *= factor;
    return bound;
}

}  // namespace subsync
