#include <algorithm>
#include <optional>

#include "subsync/error.hpp"
#include "subsync/harness.hpp"
#include "subsync/intmath.hpp"
#include "subsync/wire.hpp"

namespace subsync {

namespace {

constexpr std::size_t kMaxCounterexamples = 8;

class Suite {
public:
    explicit Suite(std::string name) { report_.suite = std::move(name); }

    // Records one check; `describe` is only evaluated on failure.
    template <typename Describe>
    void check(bool ok, Describe&& describe) {
        ++report_.checks;
        if (ok) return;
        ++failures_;
        if (report_.counterexamples.size() < kMaxCounterexamples) report_.counterexamples.push_back(describe());
    }

    VerifyReport finish() {
        if (failures_ > report_.counterexamples.size())
            report_.counterexamples.push_back("... " + std::to_string(failures_ - report_.counterexamples.size()) +
                                              " more violations");
        return std::move(report_);
    }

private:
    VerifyReport report_;
    std::size_t failures_ = 0;
};

BitString from_value(std::uint64_t v, std::size_t n) {
    BitString s;
    s.append_bits(v, static_cast<unsigned>(n));
    return s;
}

// Definition-level ball: every single edit is built through apply_substring_edit.
StringSet definition_ball(const BitString& x, unsigned t, unsigned k) {
    StringSet ball{x};
    std::vector<BitString> frontier{x};
    for (unsigned round = 0; round < t; ++round) {
        std::vector<BitString> next;
        for (const BitString& z : frontier) {
            const std::size_t m = z.size();
            for (std::size_t pos = 1; pos <= m + 1; ++pos)
                for (std::size_t ulen = 0; ulen <= k && pos - 1 + ulen <= m; ++ulen)
                    for (std::size_t vlen = 0; vlen <= k; ++vlen)
                        for (std::uint64_t v = 0; v < (std::uint64_t{1} << vlen); ++v) {
                            BitString y = apply_substring_edit(z, {pos, z.substr(pos - 1, ulen), from_value(v, vlen)});
                            if (ball.insert(y)) next.push_back(std::move(y));
                        }
        }
        frontier = std::move(next);
    }
    return ball;
}

bool naive_dense(const BitString& x, const BitString& p, std::size_t window) {
    if (x.size() <= window) return x.contains(p);
    for (std::size_t i = 0; i + window <= x.size(); ++i)
        if (!x.substr(i, window).contains(p)) return false;
    return true;
}

StringSet length_slice(const StringSet& set, std::size_t n) {
    StringSet out;
    for (const BitString& s : set)
        if (s.size() == n) out.insert(s);
    return out;
}

std::string edit_text(const SubstringEdit& e) {
    return std::to_string(e.position) + ":" + e.deleted.str() + ":" + e.inserted.str();
}

Modulus search_with(const CodecOptions& codec, const BigInt& lx, std::span<const BigInt> others) {
    return codec.search ? codec.search(lx, others) : find_separating_modulus(lx, others);
}

VerifyReport verify_edits(const VerifyOptions& options) {
    Suite suite("edits");
    {
        const BitString x = BitString::parse("11100010100110");
        const BitString y = apply_substring_edit(x, {5, BitString::parse("0010"), BitString::parse("10011")});
        suite.check(y == BitString::parse("111010011100110"), [&] { return "worked example gave " + y.str(); });
    }
    SplitMix64 rng(mix_seed(options.seed, 11));
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = rng.between(0, 80);
        const unsigned k = static_cast<unsigned>(rng.between(1, 4));
        const BitString x = BitString::random(n, rng);
        const std::size_t ulen = rng.below(std::min<std::size_t>(k, n) + 1);
        const std::size_t pos = 1 + rng.below(n - ulen + 1);
        const SubstringEdit e{pos, x.substr(pos - 1, ulen), BitString::random(rng.below(k + 1), rng)};
        const BitString y = apply_substring_edit(x, e);
        suite.check(y.size() == n - ulen + e.inserted.size() && apply_substring_edit(y, e.inverse()) == x,
                    [&] { return "inverse does not undo edit " + edit_text(e) + " on " + x.str(); });

        const std::vector<std::uint8_t> bytes = to_binary(x);
        const auto [back, used] = from_binary(bytes);
        suite.check(back == x && used == bytes.size(), [&] { return "binary form round trip failed for " + x.str(); });

        const BitString p = BitString::random(rng.between(1, 3), rng);
        const std::size_t window = rng.between(p.size(), 12);
        suite.check(is_pattern_dense(x, p, window) == naive_dense(x, p, window), [&] {
            return "density of " + x.str() + " for p=" + p.str() + ", delta=" + std::to_string(window);
        });

        const EditTrace trace = sample_edit_trace(x, 3, k, rng.next());
        BitString replay = x;
        bool bounded = trace.edits.size() == 3;
        for (const SubstringEdit& step : trace.edits) {
            bounded = bounded && step.deleted.size() <= k && step.inserted.size() <= k;
            replay = apply_substring_edit(replay, step);
        }
        suite.check(bounded && replay == trace.result, [&] { return "edit trace does not replay on " + x.str(); });

        if (n >= 1) {
            const std::size_t i = 1 + rng.below(n);
            const bool b = rng.coin();
            suite.check(apply_ids_edit(x, {IdsKind::Deletion, i, false}) ==
                                apply_substring_edit(x, {i, x.substr(i - 1, 1), BitString{}}) &&
                            apply_ids_edit(x, {IdsKind::Insertion, i, b}) ==
                                apply_substring_edit(x, {i, BitString{}, BitString(1, b)}) &&
                            apply_ids_edit(x, {IdsKind::Substitution, i, b}) ==
                                apply_substring_edit(x, {i, x.substr(i - 1, 1), BitString(1, b)}),
                        [&] { return "IDS edit at " + std::to_string(i) + " disagrees on " + x.str(); });
        }
    }
    for (const auto& [x, e] : {std::pair{BitString::parse("0101"), SubstringEdit{2, BitString::parse("0"), {}}},
                               std::pair{BitString::parse("0101"), SubstringEdit{4, BitString::parse("11"), {}}},
                               std::pair{BitString::parse("0101"), SubstringEdit{0, {}, BitString::parse("1")}}}) {
        bool rejected = false;
        try {
            (void)apply_substring_edit(x, e);
        } catch (const Error& err) {
            rejected = err.code() == Errc::InvalidEdit;
        }
        suite.check(rejected, [&] { return "invalid edit " + edit_text(e) + " accepted on " + x.str(); });
    }
    return suite.finish();
}

VerifyReport verify_balls(const VerifyOptions& options) {
    Suite suite("balls");
    for (std::size_t n = 1; n <= 6; ++n)
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
            const BitString x = from_value(v, n);
            for (unsigned k = 1; k <= 2; ++k) {
                const StringSet b1 = edit_ball(x, 1, k);
                const StringSet b2 = edit_ball(x, 2, k);
                suite.check(b1 == definition_ball(x, 1, k),
                            [&] { return "B_1 mismatch for x=" + x.str() + ", k=" + std::to_string(k); });
                if (n <= 4)
                    suite.check(b2 == definition_ball(x, 2, k),
                                [&] { return "B_2 mismatch for x=" + x.str() + ", k=" + std::to_string(k); });
                suite.check(b2.size() <= ball_size_upper_bound(n, 1, k), [&] {
                    return "|B_2|=" + std::to_string(b2.size()) + " exceeds the bound for x=" + x.str();
                });
                suite.check(b1.is_subset_of(ids_edit_ball(x, 2 * k)),
                            [&] { return "B_1 not inside the IDS ball of radius 2k for x=" + x.str(); });
                suite.check(edit_ball_slice(x, 2, k, n) == length_slice(b2, n),
                            [&] { return "slice of B_2 differs for x=" + x.str(); });
                if (n <= 5 || k == 1) {
                    const StringSet oracle = confusion_ball_oracle(x, 1, k);
                    // Confusable strings sit in the length-n slice of B_2t(x).
                    suite.check(oracle.is_subset_of(length_slice(b2, n)),
                                [&] { return "confusion ball escapes the B_2 slice for x=" + x.str(); });
                    suite.check(confusion_ball(x, 1, k) == oracle,
                                [&] { return "confusion ball differs from the oracle for x=" + x.str(); });
                }
            }
        }

    SplitMix64 rng(mix_seed(options.seed, 12));
    const BitString p = BitString::parse("01");
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = rng.between(8, 20);
        const BitString x = BitString::random(n, rng);
        const std::size_t window = rng.between(2, 6);
        if (!is_pattern_dense(x, p, window)) continue;
        const StringSet restricted = restricted_confusion_ball(x, 1, 1, p, window);
        const StringSet confusion = confusion_ball(x, 1, 1);
        bool all_dense = true;
        for (const BitString& y : restricted) all_dense = all_dense && is_pattern_dense(y, p, window);
        std::size_t dense_count = 0;
        for (const BitString& y : confusion) dense_count += is_pattern_dense(y, p, window) ? 1 : 0;
        suite.check(all_dense && restricted.is_subset_of(confusion) && restricted.size() == dense_count,
                    [&] { return "restricted ball is not the dense part of C_1 for x=" + x.str(); });
    }
    return suite.finish();
}

VerifyReport verify_labeling_suite(const VerifyOptions& options) {
    Suite suite("labeling");
    const LabelingPtr f = identity_labeling();
    {
        std::vector<BigInt> labels;
        for (std::size_t n = 0; n <= 10; ++n)
            for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
                const BitString x = from_value(v, n);
                labels.push_back(f->label(x));
                suite.check(labels.back() >= 0 && bit_length(labels.back()) <= f->width(n),
                            [&] { return "identity label out of range for " + x.str(); });
            }
        std::sort(labels.begin(), labels.end());
        suite.check(std::adjacent_find(labels.begin(), labels.end()) == labels.end(),
                    [] { return std::string("identity labels collide across lengths <= 10"); });
    }

    const auto check_modulus = [&](const BigInt& lx, const std::vector<BigInt>& others, const std::string& what) {
        const Modulus a = search_with(options.codec, lx, others);
        suite.check(separates(lx, others, a.value()),
                    [&] { return what + ": modulus " + a.value().get_str() + " does not separate"; });
        BigInt max_label = lx;
        for (const BigInt& l : others) max_label = std::max(max_label, l);
        // Moduli start at 2, so the bound only bites once labels exceed 1.
        suite.check(a.value() <= std::max<BigInt>(2, max_label + 1), [&] {
            return what + ": modulus " + a.value().get_str() + " exceeds max label + 1 = " +
                   BigInt(max_label + 1).get_str();
        });
        if (others.size() <= 10000 && a.value() <= 100000) {
            BigInt smaller = 2;
            while (smaller < a.value() && !separates(lx, others, smaller)) ++smaller;
            suite.check(smaller == a.value(), [&] {
                return what + ": modulus " + a.value().get_str() + " is not minimal (" + smaller.get_str() +
                       " separates)";
            });
        }
    };

    check_modulus(0, {1, 2, 3}, "labels 0 vs {1,2,3}");
    check_modulus(5, {}, "labels 5 vs {}");
    check_modulus(5, {3}, "labels 5 vs {3}");
    SplitMix64 rng(mix_seed(options.seed, 13));
    for (int trial = 0; trial < 200; ++trial) {
        const unsigned bits = static_cast<unsigned>(rng.between(1, 40));
        const BigInt lx = BigInt(static_cast<unsigned long>(rng.below(std::uint64_t{1} << bits)));
        std::vector<BigInt> others;
        for (std::size_t i = rng.below(200); i > 0; --i) {
            BigInt l = BigInt(static_cast<unsigned long>(rng.below(std::uint64_t{1} << bits)));
            if (l != lx) others.push_back(std::move(l));
        }
        check_modulus(lx, others, "random labels, trial " + std::to_string(trial));
    }
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = rng.between(4, 14);
        const unsigned k = static_cast<unsigned>(rng.between(1, 2));
        const BitString x = BitString::random(n, rng);
        const StringSet ball = confusion_ball(x, 1, k);
        suite.check(verify_labeling(*f, ball, x), [&] { return "identity labeling fails on C_1 of " + x.str(); });
        check_modulus(f->label(x), labels_of(*f, ball, x), "C_1 of x=" + x.str() + ", k=" + std::to_string(k));
    }

    const LabelingPtr h = hash_labeling(24, options.seed);
    const BitString probe = BitString::parse("0110100110010110");
    suite.check(h->label(probe) == hash_labeling(24, options.seed)->label(probe) && bit_length(h->label(probe)) <= 24,
                [] { return std::string("hash labeling is not deterministic or exceeds its width"); });
    return suite.finish();
}

VerifyReport verify_docex(const VerifyOptions& options) {
    Suite suite("docex");
    const LabelingPtr f = identity_labeling();
    const CodecOptions& codec = options.codec;

    const auto roundtrip_worst = [&](const BitString& x, const EditParams& params, const StringSet& received) {
        std::optional<WorstCaseEncoding> encoded;
        try {
            encoded = encode_worst(x, params, *f, codec);
        } catch (const Error& e) {
            suite.check(false, [&] { return "encode_worst failed for x=" + x.str() + ": " + e.what(); });
            return;
        }
        const WorstCaseEncoding& enc = *encoded;
        const StringSet confusion = params.t == 0 ? StringSet{x} : confusion_ball(x, params.t, params.k);
        suite.check(separates(f->label(x), labels_of(*f, confusion, x), enc.modulus.value()), [&] {
            return "modulus " + enc.modulus.value().get_str() + " does not separate C_t of x=" + x.str();
        });
        for (const BitString& y : received) {
            std::string got;
            try {
                const BitString d = decode_worst(y, enc, *f, codec);
                if (d == x) {
                    suite.check(true, [] { return std::string(); });
                    continue;
                }
                got = d.str();
            } catch (const Error& e) {
                got = e.what();
            }
            suite.check(false, [&] {
                return "worst-case decode of y=" + y.str() + " for x=" + x.str() + " (a=" +
                       enc.modulus.value().get_str() + ") gave " + got;
            });
        }
    };

    for (std::size_t n = 4; n <= 6; ++n)
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
            const BitString x = from_value(v, n);
            roundtrip_worst(x, {n, 1, 1}, edit_ball(x, 1, 1));
        }
    SplitMix64 rng(mix_seed(options.seed, 14));
    for (int trial = 0; trial < 10; ++trial) {
        const BitString x = BitString::random(10, rng);
        roundtrip_worst(x, {10, 2, 1}, StringSet{sample_edit_trace(x, 2, 1, rng.next()).result});
        roundtrip_worst(x, {10, 0, 1}, StringSet{x});
    }

    const DensityConfig density{BitString::parse("01"), 4};
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << 8); ++v) {
        const BitString x = from_value(v, 8);
        const EditParams params{8, 1, 1};
        std::optional<AverageCaseEncoding> encoded;
        try {
            encoded = encode_average(x, params, *f, density, codec);
        } catch (const Error& e) {
            suite.check(false, [&] { return "encode_average failed for x=" + x.str() + ": " + e.what(); });
            continue;
        }
        const AverageCaseEncoding& enc = *encoded;
        const auto sent = wire::serialize(enc);
        suite.check(is_dense_branch(enc) == density.is_dense(x),
                    [&] { return "branch tag disagrees with density for x=" + x.str(); });
        if (const auto* d = std::get_if<DenseEncoding>(&enc)) {
            const WorstCaseEncoding ref = encode_worst(x, params, *f, codec);
            suite.check(d->modulus.value() <= ref.modulus.value(), [&] {
                return "dense modulus " + d->modulus.value().get_str() + " exceeds worst-case modulus " +
                       ref.modulus.value().get_str() + " for x=" + x.str();
            });
        }
        for (const BitString& y : edit_ball(x, 1, 1)) {
            std::string got;
            try {
                const auto msg = wire::deserialize(sent);
                const BitString d = decode_average(y, std::get<AverageCaseEncoding>(msg), *f, codec);
                if (d == x) {
                    suite.check(true, [] { return std::string(); });
                    continue;
                }
                got = d.str();
            } catch (const Error& e) {
                got = e.what();
            }
            suite.check(false, [&] { return "average-case decode of y=" + y.str() + " for x=" + x.str() + " gave " + got; });
        }
    }

    const WorstCaseEncoding sample = encode_worst(BitString::parse("0110"), {4, 1, 1}, *f);
    for (std::size_t byte : {std::size_t{0}, std::size_t{4}, std::size_t{5}}) {
        std::vector<std::uint8_t> bytes = wire::serialize(sample);
        bytes[byte] = byte == 5 ? 0x7F : static_cast<std::uint8_t>(bytes[byte] ^ 0xFF);
        bool rejected = false;
        try {
            (void)wire::deserialize(bytes);
        } catch (const Error& e) {
            rejected = e.code() == Errc::FormatError;
        }
        suite.check(rejected, [&] { return "corrupted header byte " + std::to_string(byte) + " was accepted"; });
    }
    return suite.finish();
}

}  // namespace

std::vector<VerifyReport> run_verify(std::string_view suite, const VerifyOptions& options) {
    std::vector<VerifyReport> reports;
    const bool all = suite == "all";
    if (!all && std::find(std::begin(kVerifySuites), std::end(kVerifySuites), suite) == std::end(kVerifySuites))
        throw Error(Errc::ConfigError, "unknown suite '" + std::string(suite) + "'");
    if (all || suite == "edits") reports.push_back(verify_edits(options));
    if (all || suite == "balls") reports.push_back(verify_balls(options));
    if (all || suite == "labeling") reports.push_back(verify_labeling_suite(options));
    if (all || suite == "docex") reports.push_back(verify_docex(options));
    return reports;
}

ModulusSearch off_by_one_search() {
    return [](const BigInt& lx, std::span<const BigInt> others) {
        Modulus a = find_separating_modulus(lx, others);
        if (a.value() > 2) return Modulus(a.value() - 1);
        return a;
    };
}

}  // namespace subsync
