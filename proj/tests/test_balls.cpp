#include <gtest/gtest.h>

#include "oracles.hpp"
#include "subsync/balls.hpp"
#include "subsync/error.hpp"

using namespace subsync;

namespace {

BitString bs(const char* text) { return BitString::parse(text); }

std::set<BitString> strings(std::initializer_list<const char*> items) {
    std::set<BitString> out;
    for (const char* s : items) out.insert(bs(s));
    return out;
}

}  // namespace

TEST(EditBall, ZeroEdits) { EXPECT_EQ(oracle::as_set(edit_ball(bs("0110"), 0, 3)), strings({"0110"})); }

TEST(EditBall, AllZerosRadiusOne) {
    EXPECT_EQ(oracle::as_set(edit_ball(bs("0000"), 1, 1)),
              strings({"0000", "000", "00000", "1000", "0100", "0010", "0001", "10000", "01000", "00100", "00010",
                       "00001"}));
}

TEST(EditBall, Nested) { EXPECT_TRUE(edit_ball(bs("0110"), 1, 1).is_subset_of(edit_ball(bs("0110"), 2, 1))); }

TEST(EditBall, MatchesOracle) {
    for (std::size_t n = 0; n <= 6; ++n)
        for (const BitString& x : oracle::all_strings(n))
            for (unsigned k = 1; k <= 3; ++k) {
                EXPECT_EQ(oracle::as_set(edit_ball(x, 1, k)), oracle::ball(x, 1, k)) << x.str() << " k=" << k;
                if (n <= 4 && k <= 2) {
                    EXPECT_EQ(oracle::as_set(edit_ball(x, 2, k)), oracle::ball(x, 2, k)) << x.str() << " k=" << k;
                }
            }
}

TEST(EditBall, SliceIsLengthFilter) {
    SplitMix64 rng(2);
    for (int i = 0; i < 30; ++i) {
        const BitString x = BitString::random(rng.between(1, 9), rng);
        const unsigned k = static_cast<unsigned>(rng.between(1, 2));
        std::set<BitString> expect;
        for (const BitString& y : oracle::ball(x, 2, k))
            if (y.size() == x.size()) expect.insert(y);
        EXPECT_EQ(oracle::as_set(edit_ball_slice(x, 2, k, x.size())), expect) << x.str();
    }
}

TEST(EditBall, BudgetExceeded) {
    BallLimits tiny;
    tiny.max_members = 50;
    try {
        (void)edit_ball(bs("0101010101"), 2, 2, tiny);
        FAIL() << "expected BallTooLarge";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::BallTooLarge);
    }
}

TEST(IdsBall, Examples) {
    EXPECT_EQ(oracle::as_set(ids_edit_ball(bs("0"), 1)), strings({"0", "1", "", "00", "01", "10"}));
    EXPECT_EQ(oracle::as_set(ids_edit_ball(bs("0101"), 0)), strings({"0101"}));
    EXPECT_TRUE(edit_ball(bs("0101"), 1, 1).is_subset_of(ids_edit_ball(bs("0101"), 2)));
}

TEST(IdsBall, MatchesOracle) {
    for (std::size_t n = 0; n <= 6; ++n)
        for (const BitString& x : oracle::all_strings(n))
            for (unsigned tau = 1; tau <= 2; ++tau)
                EXPECT_EQ(oracle::as_set(ids_edit_ball(x, tau)), oracle::ids_ball(x, tau)) << x.str();
}

TEST(IdsBall, ContainsSubstringBall) {
    for (std::size_t n = 1; n <= 6; ++n)
        for (const BitString& x : oracle::all_strings(n))
            for (unsigned k = 1; k <= 2; ++k)
                EXPECT_TRUE(edit_ball(x, 1, k).is_subset_of(ids_edit_ball(x, 2 * k))) << x.str() << " k=" << k;
}

TEST(ConfusionBall, Examples) {
    EXPECT_EQ(oracle::as_set(confusion_ball(bs("0"), 1, 1)), strings({"0", "1"}));
    EXPECT_EQ(oracle::as_set(confusion_ball_oracle(bs("1"), 1, 1)), strings({"0", "1"}));
    EXPECT_EQ(confusion_ball(bs("0101"), 1, 1), confusion_ball_oracle(bs("0101"), 1, 1));
    EXPECT_EQ(confusion_ball(bs("0000"), 1, 1).size(), 11U);
}

TEST(ConfusionBall, MatchesDefinition) {
    for (std::size_t n = 1; n <= 5; ++n)
        for (const BitString& x : oracle::all_strings(n)) {
            const auto fast = oracle::as_set(confusion_ball(x, 1, 1));
            EXPECT_TRUE(fast.contains(x));
            EXPECT_EQ(fast, oracle::confusion(x, 1, 1)) << x.str();
            EXPECT_EQ(oracle::as_set(confusion_ball_oracle(x, 1, 1)), fast) << x.str();
        }
    for (const BitString& x : oracle::all_strings(4))
        EXPECT_EQ(oracle::as_set(confusion_ball(x, 1, 2)), oracle::confusion(x, 1, 2)) << x.str();
}

TEST(ConfusionBall, OracleLimit) {
    BallLimits limits;
    limits.oracle_max_length = 6;
    try {
        (void)confusion_ball_oracle(bs("0101010"), 1, 1, limits);
        FAIL() << "expected OracleTooLarge";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::OracleTooLarge);
    }
}

TEST(RestrictedBall, DenseMembersOfOracle) {
    const BitString x = BitString::repeat(bs("01"), 8);
    std::set<BitString> expect;
    for (const BitString& y : oracle::confusion(x, 1, 1))
        if (oracle::dense(y, bs("01"), 6)) expect.insert(y);
    const StringSet restricted = restricted_confusion_ball(x, 1, 1, bs("01"), 6);
    EXPECT_EQ(oracle::as_set(restricted), expect);
    EXPECT_TRUE(restricted.contains(x));
    EXPECT_LE(restricted.size(), confusion_ball(x, 1, 1).size());
}

TEST(RestrictedBall, RejectsNonDense) {
    try {
        (void)restricted_confusion_ball(bs("0000"), 1, 1, bs("01"), 4);
        FAIL() << "expected NotDense";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotDense);
    }
}

TEST(BallBound, Arithmetic) {
    EXPECT_EQ(ball_size_upper_bound(4, 1, 1), 1080);
    EXPECT_EQ(ball_size_upper_bound(1, 1, 1), 54);
    EXPECT_EQ(ball_size_upper_bound(7, 0, 2), 7);
    // (10)(13)(16)(19)(22) * 3^4 * 3^12
    EXPECT_EQ(ball_size_upper_bound(10, 2, 3), mpz_class("869440") * 81 * 531441);
}

TEST(BallBound, HoldsExhaustively) {
    EXPECT_LE(edit_ball(bs("0000"), 2, 1).size(), 1080U);
    for (std::size_t n = 1; n <= 7; ++n)
        for (const BitString& x : oracle::all_strings(n))
            for (unsigned k = 1; k <= 2; ++k) EXPECT_LE(edit_ball(x, 2, k).size(), ball_size_upper_bound(n, 1, k));
}
