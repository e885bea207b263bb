#include <gtest/gtest.h>

#include "oracles.hpp"
#include "subsync/balls.hpp"
#include "subsync/error.hpp"
#include "subsync/intmath.hpp"
#include "subsync/labeling.hpp"

using namespace subsync;

namespace {

BitString bs(const char* text) { return BitString::parse(text); }

class ConstantLabeling final : public LabelingScheme {
public:
    BigInt label(const BitString&) const override { return 7; }
    std::size_t width(std::size_t) const override { return 3; }
    std::string name() const override { return "constant"; }
};

std::vector<BigInt> big(std::initializer_list<long> values) {
    std::vector<BigInt> out;
    for (long v : values) out.emplace_back(v);
    return out;
}

}  // namespace

TEST(IdentityLabeling, Injective) {
    const LabelingPtr f = identity_labeling();
    EXPECT_NE(f->label(bs("01")), f->label(bs("10")));
    EXPECT_EQ(f->label(bs("0110")), f->label(bs("0110")));
    std::set<BigInt> labels;
    for (std::size_t n = 0; n <= 9; ++n)
        for (const BitString& x : oracle::all_strings(n)) {
            const BigInt l = f->label(x);
            EXPECT_LE(bit_length(l), f->width(n));
            EXPECT_TRUE(labels.insert(l).second) << x.str();
        }
}

TEST(IdentityLabeling, FourBitStringsDistinct) {
    const LabelingPtr f = identity_labeling();
    std::set<BigInt> labels;
    for (const BitString& x : oracle::all_strings(4)) labels.insert(f->label(x));
    EXPECT_EQ(labels.size(), 16U);
}

TEST(HashLabeling, DeterministicFixedWidth) {
    const LabelingPtr h = hash_labeling(20, 99);
    SplitMix64 rng(4);
    for (int i = 0; i < 100; ++i) {
        const BitString x = BitString::random(rng.between(0, 100), rng);
        EXPECT_EQ(h->label(x), hash_labeling(20, 99)->label(x));
        EXPECT_LE(bit_length(h->label(x)), 20U);
        EXPECT_EQ(h->width(x.size()), 20U);
    }
    EXPECT_NE(hash_labeling(20, 1)->name(), hash_labeling(20, 2)->name());
}

TEST(HashLabeling, ReseedUntilSound) {
    SplitMix64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = rng.between(4, 10);
        const BitString x = BitString::random(n, rng);
        const StringSet ball = confusion_ball(x, 1, 1);
        const std::size_t width = ids_label_width_bound(2, n);
        std::uint64_t seed = 0;
        while (!verify_labeling(*hash_labeling(width, seed), ball, x)) ++seed;
        const LabelingPtr h = hash_labeling(width, seed);
        const BigInt lx = h->label(x);
        for (const BitString& y : ball) {
            if (y != x) {
                EXPECT_NE(h->label(y), lx);
            }
        }
        EXPECT_LT(seed, 16U) << "seed search for " << x.str();
    }
}

TEST(HashLabeling, TinyWidthAgainstDigests) {
    const BitString x = bs("0000");
    const StringSet ball = edit_ball(x, 1, 1);
    ASSERT_EQ(ball.size(), 12U);
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const LabelingPtr h = hash_labeling(4, seed);
        const BigInt lx = h->label(x);
        bool distinct = true;
        for (const BitString& y : ball) distinct = distinct && (y == x || h->label(y) != lx);
        EXPECT_EQ(verify_labeling(*h, ball, x), distinct) << "seed " << seed;
    }
}

TEST(VerifyLabeling, IdentityAndConstant) {
    const StringSet ball = confusion_ball(bs("0110"), 1, 1);
    EXPECT_TRUE(verify_labeling(*identity_labeling(), ball, bs("0110")));
    EXPECT_FALSE(verify_labeling(ConstantLabeling{}, ball, bs("0110")));
}

TEST(WidthBound, Arithmetic) {
    EXPECT_EQ(ids_label_width_bound(1, 256), 48U);
    EXPECT_EQ(ids_label_width_bound(2, 2), 53U);
    EXPECT_EQ(ids_label_width_bound(2, 4), 106U);
    // 6 * log2 3 = 9.5098
    EXPECT_EQ(ids_label_width_bound(1, 3), 10U);
}

TEST(Modulus, Examples) {
    EXPECT_EQ(find_separating_modulus(0, big({1, 2, 3})).value(), 4);
    EXPECT_EQ(find_separating_modulus(5, {}).value(), 2);
    EXPECT_EQ(find_separating_modulus(5, big({3})).value(), 3);
}

TEST(Modulus, RejectsCollision) {
    try {
        (void)find_separating_modulus(5, big({1, 5}));
        FAIL() << "expected NotSeparable";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotSeparable);
    }
}

TEST(Modulus, MinimalAgainstBruteForce) {
    SplitMix64 rng(21);
    for (int trial = 0; trial < 400; ++trial) {
        const unsigned bits = static_cast<unsigned>(rng.between(1, 150));
        const auto draw = [&] {
            BigInt v = 0;
            for (unsigned b = 0; b < bits; ++b) v = 2 * v + (rng.coin() ? 1 : 0);
            if (rng.below(3) == 0) v <<= static_cast<mp_bitcnt_t>(rng.below(80));
            return v;
        };
        const BigInt lx = draw();
        std::vector<BigInt> others;
        for (std::size_t i = rng.below(300); i > 0; --i)
            if (BigInt v = draw(); v != lx) others.push_back(v);
        const Modulus a = find_separating_modulus(lx, others);
        EXPECT_EQ(a.value(), oracle::smallest_separating(lx, others)) << "trial " << trial;
        EXPECT_TRUE(separates(lx, others, a.value()));
    }
}

TEST(Modulus, MinimalOnConfusionBalls) {
    const LabelingPtr f = identity_labeling();
    SplitMix64 rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const BitString x = BitString::random(rng.between(8, 40), rng);
        const StringSet ball = confusion_ball(x, 1, 1);
        const std::vector<BigInt> others = labels_of(*f, ball, x);
        const Modulus a = find_separating_modulus(f->label(x), others);
        EXPECT_EQ(a.value(), oracle::smallest_separating(f->label(x), others)) << x.str();
    }
}

TEST(Modulus, BelowTwoRejected) {
    EXPECT_THROW(Modulus(BigInt(1)), Error);
    EXPECT_EQ(Modulus(BigInt(2)).value(), 2);
}

TEST(LabelsOf, SkipsX) {
    const StringSet ball = confusion_ball(bs("0000"), 1, 1);
    EXPECT_EQ(labels_of(*identity_labeling(), ball, bs("0000")).size(), ball.size() - 1);
}
