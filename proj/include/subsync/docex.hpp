#pragma once

#include <cstddef>
#include <optional>
#include <variant>

#include "subsync/balls.hpp"
#include "subsync/bitstring.hpp"
#include "subsync/labeling.hpp"

namespace subsync {

// (f(x) mod a_x, a_x)
struct WorstCaseEncoding {
    BigInt residue;
    Modulus modulus;
    EditParams params;

    friend bool operator==(const WorstCaseEncoding&, const WorstCaseEncoding&) = default;
};

// One-edit side information for dense strings: x is recoverable from any
// single-edit corruption plus this residue pair.
struct Hint {
    BigInt residue;
    Modulus modulus;

    friend bool operator==(const Hint&, const Hint&) = default;
};

struct DensityConfig {
    BitString pattern;
    std::size_t window = 1;

    void validate() const;
    bool is_dense(const BitString& x) const;
    friend bool operator==(const DensityConfig&, const DensityConfig&) = default;
};

struct DenseEncoding {
    Hint hint;
    BigInt residue;
    Modulus modulus;
    DensityConfig density;
    EditParams params;

    friend bool operator==(const DenseEncoding&, const DenseEncoding&) = default;
};

struct NonDenseEncoding {
    WorstCaseEncoding inner;

    friend bool operator==(const NonDenseEncoding&, const NonDenseEncoding&) = default;
};

using AverageCaseEncoding = std::variant<DenseEncoding, NonDenseEncoding>;

// Knobs shared by all encoders. `search` replaces the modulus search (used by
// the mutation check of the verify command); leave empty for the real one.
struct CodecOptions {
    BallLimits limits{};
    ModulusSearch search{};
};

WorstCaseEncoding encode_worst(const BitString& x, const EditParams& params, const LabelingScheme& f,
                               const CodecOptions& options = {});
BitString decode_worst(const BitString& y, const WorstCaseEncoding& enc, const LabelingScheme& f,
                       const CodecOptions& options = {});

Hint dense_hint(const BitString& x, unsigned k, const DensityConfig& density, const LabelingScheme& f,
                const CodecOptions& options = {});
BitString decode_one_edit_dense(const BitString& y, std::size_t n, unsigned k, const DensityConfig& density,
                                const LabelingScheme& f, const Hint& hint, const CodecOptions& options = {});

AverageCaseEncoding encode_average(const BitString& x, const EditParams& params, const LabelingScheme& f,
                                   const DensityConfig& density, const CodecOptions& options = {});
// Length and edit parameters are read from the encoding itself.
BitString decode_average(const BitString& y, const AverageCaseEncoding& enc, const LabelingScheme& f,
                         const CodecOptions& options = {});

// Measured redundancy: a modulus a costs bit_length(a) bits and a residue
// bit_length(a - 1) bits. Average-case encodings add one branch-tag bit. The
// density configuration is a shared parameter and is not counted.
std::size_t encoding_bit_length(const WorstCaseEncoding& enc);
std::size_t encoding_bit_length(const AverageCaseEncoding& enc);

std::size_t modulus_bits(const Modulus& m);
bool is_dense_branch(const AverageCaseEncoding& enc) noexcept;

}  // namespace subsync
