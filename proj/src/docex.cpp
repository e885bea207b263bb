#include "subsync/docex.hpp"

#include <string>
#include <vector>

#include "subsync/error.hpp"
#include "subsync/intmath.hpp"

namespace subsync {

namespace {

BigInt residue_of(const BigInt& label, const Modulus& m) {
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), label.get_mpz_t(), m.value().get_mpz_t());
    return r;
}

void check_length(const BitString& x, const EditParams& params) {
    params.validate();
    if (x.size() != params.n)
        throw Error(Errc::ConfigError,
                    "string length " + std::to_string(x.size()) + " does not match n = " + std::to_string(params.n));
}

// Labels of every member except x; a collision with f(x) means f cannot serve.
std::vector<BigInt> other_labels(const LabelingScheme& f, const StringSet& set, const BitString& x,
                                 const BigInt& label_x) {
    std::vector<BigInt> labels = labels_of(f, set, x);
    for (const BigInt& l : labels)
        if (l == label_x) throw Error(Errc::LabelingUnsound, "labeling " + f.name() + " collides on a confusable string");
    return labels;
}

Modulus run_search(const CodecOptions& options, const BigInt& label_x, std::span<const BigInt> others) {
    return options.search ? options.search(label_x, others) : find_separating_modulus(label_x, others);
}

StringSet confusion_or_self(const BitString& x, unsigned t, unsigned k, const BallLimits& limits) {
    if (t == 0) return StringSet{x};
    return confusion_ball(x, t, k, limits);
}

template <typename Accept>
BitString unique_candidate(const StringSet& candidates, Accept&& accept) {
    const BitString* found = nullptr;
    for (const BitString& c : candidates) {
        if (!accept(c)) continue;
        if (found != nullptr) throw Error(Errc::Ambiguous, "more than one candidate matches the encoding");
        found = &c;
    }
    if (found == nullptr) throw Error(Errc::NoCandidate, "no candidate matches the encoding");
    return *found;
}

}  // namespace

void DensityConfig::validate() const {
    if (pattern.size() > window) throw Error(Errc::InvalidDensityConfig, "pattern longer than the density window");
}

bool DensityConfig::is_dense(const BitString& x) const { return is_pattern_dense(x, pattern, window); }

WorstCaseEncoding encode_worst(const BitString& x, const EditParams& params, const LabelingScheme& f,
                               const CodecOptions& options) {
    check_length(x, params);
    const StringSet ball = confusion_or_self(x, params.t, params.k, options.limits);
    const BigInt label_x = f.label(x);
    const std::vector<BigInt> others = other_labels(f, ball, x, label_x);
    Modulus a = run_search(options, label_x, others);
    BigInt residue = residue_of(label_x, a);
    return {std::move(residue), std::move(a), params};
}

BitString decode_worst(const BitString& y, const WorstCaseEncoding& enc, const LabelingScheme& f,
                       const CodecOptions& options) {
    const EditParams& p = enc.params;
    p.validate();
    const StringSet candidates = edit_ball_slice(y, p.t, p.k, p.n, options.limits);
    return unique_candidate(candidates,
                            [&](const BitString& c) { return residue_of(f.label(c), enc.modulus) == enc.residue; });
}

Hint dense_hint(const BitString& x, unsigned k, const DensityConfig& density, const LabelingScheme& f,
                const CodecOptions& options) {
    density.validate();
    const StringSet one_edit = restricted_confusion_ball(x, 1, k, density.pattern, density.window, options.limits);
    const BigInt label_x = f.label(x);
    const std::vector<BigInt> others = other_labels(f, one_edit, x, label_x);
    Modulus a = run_search(options, label_x, others);
    BigInt residue = residue_of(label_x, a);
    return {std::move(residue), std::move(a)};
}

BitString decode_one_edit_dense(const BitString& y, std::size_t n, unsigned k, const DensityConfig& density,
                                const LabelingScheme& f, const Hint& hint, const CodecOptions& options) {
    density.validate();
    const StringSet candidates = edit_ball_slice(y, 1, k, n, options.limits);
    return unique_candidate(candidates, [&](const BitString& c) {
        return density.is_dense(c) && residue_of(f.label(c), hint.modulus) == hint.residue;
    });
}

AverageCaseEncoding encode_average(const BitString& x, const EditParams& params, const LabelingScheme& f,
                                   const DensityConfig& density, const CodecOptions& options) {
    check_length(x, params);
    density.validate();
    if (!density.is_dense(x)) return NonDenseEncoding{encode_worst(x, params, f, options)};

    const BigInt label_x = f.label(x);
    const unsigned t = params.t;
    const StringSet restricted =
        t == 0 ? StringSet{x}
               : restricted_confusion_ball(x, t, params.k, density.pattern, density.window, options.limits);
    std::vector<BigInt> restricted_labels = other_labels(f, restricted, x, label_x);

    // With t == 1 the one-edit restricted set is the restricted ball itself.
    const Hint hint = [&] {
        if (t != 1) return dense_hint(x, params.k, density, f, options);
        Modulus m = run_search(options, label_x, restricted_labels);
        return Hint{residue_of(label_x, m), std::move(m)};
    }();

    std::vector<BigInt> survivors;
    for (BigInt& l : restricted_labels)
        if (residue_of(l, hint.modulus) == hint.residue) survivors.push_back(std::move(l));
    Modulus a = run_search(options, label_x, survivors);
    BigInt residue = residue_of(label_x, a);
    return DenseEncoding{std::move(hint), std::move(residue), std::move(a), density, params};
}

BitString decode_average(const BitString& y, const AverageCaseEncoding& enc, const LabelingScheme& f,
                         const CodecOptions& options) {
    if (const auto* nd = std::get_if<NonDenseEncoding>(&enc)) return decode_worst(y, nd->inner, f, options);
    const auto& d = std::get<DenseEncoding>(enc);
    d.params.validate();
    d.density.validate();
    const StringSet candidates = edit_ball_slice(y, d.params.t, d.params.k, d.params.n, options.limits);
    return unique_candidate(candidates, [&](const BitString& c) {
        if (!d.density.is_dense(c)) return false;
        const BigInt l = f.label(c);
        return residue_of(l, d.hint.modulus) == d.hint.residue && residue_of(l, d.modulus) == d.residue;
    });
}

std::size_t modulus_bits(const Modulus& m) { return bit_length(m.value()); }

namespace {

std::size_t pair_bits(const Modulus& m) {
    const BigInt top = m.value() - 1;
    return bit_length(m.value()) + bit_length(top);
}

}  // namespace

std::size_t encoding_bit_length(const WorstCaseEncoding& enc) { return pair_bits(enc.modulus); }

std::size_t encoding_bit_length(const AverageCaseEncoding& enc) {
    constexpr std::size_t kBranchTag = 1;
    if (const auto* nd = std::get_if<NonDenseEncoding>(&enc)) return kBranchTag + encoding_bit_length(nd->inner);
    const auto& d = std::get<DenseEncoding>(enc);
    return kBranchTag + pair_bits(d.hint.modulus) + pair_bits(d.modulus);
}

bool is_dense_branch(const AverageCaseEncoding& enc) noexcept { return std::holds_alternative<DenseEncoding>(enc); }

}  // namespace subsync
