#include <gtest/gtest.h>

#include "oracles.hpp"
#include "subsync/docex.hpp"
#include "subsync/error.hpp"
#include "subsync/wire.hpp"

using namespace subsync;

namespace {

BitString bs(const char* text) { return BitString::parse(text); }

std::vector<BigInt> oracle_labels(const LabelingScheme& f, const std::set<BitString>& set, const BitString& x) {
    std::vector<BigInt> out;
    for (const BitString& y : set)
        if (y != x) out.push_back(f.label(y));
    return out;
}

}  // namespace

TEST(EncodeWorst, WorkedExampleRoundTrip) {
    const LabelingPtr f = identity_labeling();
    const BitString x = bs("11100010100110");
    const WorstCaseEncoding enc = encode_worst(x, {14, 1, 5}, *f);
    EXPECT_LT(enc.residue, enc.modulus.value());
    EXPECT_EQ(decode_worst(bs("111010011100110"), enc, *f), x);
}

TEST(EncodeWorst, SeparatesOracleConfusionBall) {
    const LabelingPtr f = identity_labeling();
    const BitString x = bs("0000");
    const std::set<BitString> confusion = oracle::confusion(x, 1, 1);
    // Every length-4 string of weight at most 2.
    ASSERT_EQ(confusion.size(), 11U);
    const WorstCaseEncoding enc = encode_worst(x, {4, 1, 1}, *f);
    const auto others = oracle_labels(*f, confusion, x);
    EXPECT_EQ(others.size(), 10U);
    EXPECT_EQ(enc.modulus.value(), oracle::smallest_separating(f->label(x), others));
    for (const BigInt& l : others) EXPECT_NE(oracle::mod(l, enc.modulus.value()), enc.residue);
}

TEST(EncodeWorst, ZeroEdits) {
    const LabelingPtr f = identity_labeling();
    const WorstCaseEncoding enc = encode_worst(bs("0110"), {4, 0, 1}, *f);
    EXPECT_EQ(enc.modulus.value(), 2);
    EXPECT_EQ(decode_worst(bs("0110"), enc, *f), bs("0110"));
}

TEST(EncodeWorst, LengthMismatch) {
    EXPECT_THROW((void)encode_worst(bs("0110"), {5, 1, 1}, *identity_labeling()), Error);
}

TEST(EncodeWorst, UnsoundLabeling) {
    // One-bit hash labels must collide on a ball with more than two members.
    try {
        (void)encode_worst(bs("010011"), {6, 1, 1}, *hash_labeling(1, 0));
        FAIL() << "expected LabelingUnsound";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::LabelingUnsound);
    }
}

TEST(DecodeWorst, ExhaustiveSmall) {
    const LabelingPtr f = identity_labeling();
    for (std::size_t n = 1; n <= 6; ++n)
        for (const BitString& x : oracle::all_strings(n)) {
            const WorstCaseEncoding enc = encode_worst(x, {n, 1, 1}, *f);
            for (const BitString& y : oracle::ball(x, 1, 1)) EXPECT_EQ(decode_worst(y, enc, *f), x) << x.str();
        }
}

TEST(DecodeWorst, TwoEditsTwoSubstrings) {
    const LabelingPtr f = identity_labeling();
    SplitMix64 rng(12);
    for (int trial = 0; trial < 15; ++trial) {
        const BitString x = BitString::random(9, rng);
        const WorstCaseEncoding enc = encode_worst(x, {9, 2, 2}, *f);
        const EditTrace tr = sample_edit_trace(x, 2, 2, rng.next());
        EXPECT_EQ(decode_worst(tr.result, enc, *f), x) << x.str();
    }
}

TEST(DecodeWorst, WrongModulusIsDetected) {
    const LabelingPtr f = identity_labeling();
    const BitString x = bs("00000");
    WorstCaseEncoding enc = encode_worst(x, {5, 1, 1}, *f);
    enc.modulus = Modulus(BigInt(2));
    enc.residue = oracle::mod(f->label(x), 2);
    try {
        (void)decode_worst(bs("0000"), enc, *f);
        FAIL() << "expected Ambiguous";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::Ambiguous);
    }
}

TEST(DenseHint, OneEditRoundTrip) {
    const LabelingPtr f = identity_labeling();
    const BitString x = BitString::repeat(bs("01"), 6);
    const DensityConfig density{bs("01"), 6};
    const Hint hint = dense_hint(x, 1, density, *f);
    EXPECT_LT(hint.residue, hint.modulus.value());
    EXPECT_LE(hint.modulus.value(), encode_worst(x, {12, 1, 1}, *f).modulus.value());
    for (const BitString& y : oracle::ball(x, 1, 1))
        EXPECT_EQ(decode_one_edit_dense(y, 12, 1, density, *f, hint), x) << y.str();
}

TEST(DenseHint, NeverReturnsNonDense) {
    const LabelingPtr f = identity_labeling();
    const BitString x = BitString::repeat(bs("01"), 5);
    const DensityConfig density{bs("01"), 4};
    const Hint hint = dense_hint(x, 1, density, *f);
    for (const BitString& y : oracle::ball(x, 1, 1)) {
        const BitString got = decode_one_edit_dense(y, 10, 1, density, *f, hint);
        EXPECT_TRUE(oracle::dense(got, bs("01"), 4));
        EXPECT_EQ(got, x);
    }
}

TEST(EncodeAverage, NonDenseWrapsWorst) {
    const LabelingPtr f = identity_labeling();
    const BitString x(12, false);
    const DensityConfig density{bs("01"), 6};
    const AverageCaseEncoding enc = encode_average(x, {12, 1, 1}, *f, density);
    ASSERT_TRUE(std::holds_alternative<NonDenseEncoding>(enc));
    EXPECT_EQ(std::get<NonDenseEncoding>(enc).inner, encode_worst(x, {12, 1, 1}, *f));
    EXPECT_EQ(encoding_bit_length(enc), 1 + encoding_bit_length(std::get<NonDenseEncoding>(enc).inner));
    EXPECT_EQ(decode_average(x, enc, *f), x);
}

TEST(EncodeAverage, DenseModulusMonotone) {
    const LabelingPtr f = identity_labeling();
    const DensityConfig density{bs("01"), 6};
    SplitMix64 rng(30);
    int dense = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const BitString x = BitString::random(12, rng);
        const AverageCaseEncoding enc = encode_average(x, {12, 1, 1}, *f, density);
        EXPECT_EQ(is_dense_branch(enc), oracle::dense(x, bs("01"), 6));
        if (const auto* d = std::get_if<DenseEncoding>(&enc)) {
            ++dense;
            EXPECT_LE(d->modulus.value(), encode_worst(x, {12, 1, 1}, *f).modulus.value());
            for (int i = 0; i < 10; ++i) {
                const EditTrace tr = sample_edit_trace(x, 1, 1, rng.next());
                EXPECT_EQ(decode_average(tr.result, enc, *f), x);
            }
        }
    }
    EXPECT_GT(dense, 0);
}

TEST(EncodeAverage, ExhaustiveTenBits) {
    const LabelingPtr f = identity_labeling();
    const DensityConfig density{bs("01"), 5};
    for (const BitString& x : oracle::all_strings(10)) {
        const AverageCaseEncoding enc = encode_average(x, {10, 1, 1}, *f, density);
        ASSERT_EQ(is_dense_branch(enc), oracle::dense(x, bs("01"), 5)) << x.str();
        for (const BitString& y : oracle::ball(x, 1, 1)) ASSERT_EQ(decode_average(y, enc, *f), x) << x.str() << " " << y.str();
    }
}

TEST(EncodeAverage, TwoEdits) {
    const LabelingPtr f = identity_labeling();
    const DensityConfig density{bs("01"), 4};
    SplitMix64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const BitString x = BitString::random(10, rng);
        const AverageCaseEncoding enc = encode_average(x, {10, 2, 1}, *f, density);
        const EditTrace tr = sample_edit_trace(x, 2, 1, rng.next());
        EXPECT_EQ(decode_average(tr.result, enc, *f), x) << x.str();
    }
}

TEST(BitLength, PairCost) {
    const EditParams p{8, 1, 1};
    const WorstCaseEncoding enc{BigInt(3), Modulus(BigInt(13)), p};
    // 13 needs 4 bits, residues below 13 need bit_length(12) = 4 bits.
    EXPECT_EQ(encoding_bit_length(enc), 8U);
    const WorstCaseEncoding pow2{BigInt(3), Modulus(BigInt(16)), p};
    EXPECT_EQ(encoding_bit_length(pow2), 5U + 4U);
    EXPECT_EQ(modulus_bits(Modulus(BigInt(16))), 5U);
}

TEST(Wire, RoundTripAllSchemes) {
    const LabelingPtr f = identity_labeling();
    SplitMix64 rng(40);
    const DensityConfig density{bs("01"), 5};
    for (int trial = 0; trial < 50; ++trial) {
        const BitString x = BitString::random(rng.between(4, 20), rng);
        const EditParams p{x.size(), 1, 1};
        const WorstCaseEncoding w = encode_worst(x, p, *f);
        const auto wm = wire::deserialize(wire::serialize(w));
        EXPECT_EQ(std::get<WorstCaseEncoding>(wm), w);
        const AverageCaseEncoding a = encode_average(x, p, *f, density);
        const auto am = wire::deserialize(wire::serialize(a));
        EXPECT_EQ(std::get<AverageCaseEncoding>(am), a);
    }
}

TEST(Wire, HeaderLayout) {
    const WorstCaseEncoding enc{BigInt(5), Modulus(BigInt(300)), {70000, 2, 3}};
    const std::vector<std::uint8_t> expect = {0x44, 0x58, 0x53, 0x45, 0x01, 0x00, 0x00, 0x01, 0x11, 0x70, 0x02,
                                              0x03, 0x00, 0x02, 0x01, 0x2C, 0x00, 0x01, 0x05};
    EXPECT_EQ(wire::serialize(enc), expect);
}

TEST(Wire, RejectsCorruption) {
    const WorstCaseEncoding enc = encode_worst(bs("0110"), {4, 1, 1}, *identity_labeling());
    const auto good = wire::serialize(enc);
    const auto rejects = [](std::vector<std::uint8_t> bytes) {
        try {
            (void)wire::deserialize(bytes);
        } catch (const Error& e) {
            return e.code() == Errc::FormatError;
        }
        return false;
    };
    auto magic = good;
    magic[0] ^= 0xFF;
    EXPECT_TRUE(rejects(magic));
    auto version = good;
    version[4] = 0x02;
    EXPECT_TRUE(rejects(version));
    auto scheme = good;
    scheme[5] = 0x03;
    EXPECT_TRUE(rejects(scheme));
    auto truncated = good;
    truncated.pop_back();
    EXPECT_TRUE(rejects(truncated));
    auto trailing = good;
    trailing.push_back(0);
    EXPECT_TRUE(rejects(trailing));
    EXPECT_FALSE(rejects(good));
}
