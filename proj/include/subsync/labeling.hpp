#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "subsync/balls.hpp"
#include "subsync/bitstring.hpp"

namespace subsync {

using BigInt = mpz_class;

/// A labeling f maps strings to non-negative integers below 2^width(|x|). Syndrome
/// compression needs f to separate x from every string it can be confused with;
/// implementations only promise determinism, and verify_labeling() checks the rest.
class LabelingScheme {
public:
    virtual ~LabelingScheme() = default;

    virtual BigInt label(const BitString& x) const = 0;
    virtual std::size_t width(std::size_t n) const = 0;
    virtual std::string name() const = 0;
};

using LabelingPtr = std::shared_ptr<const LabelingScheme>;

// Injective over all lengths: label = 2^(n+L) + n * 2^n + value(x), L = ceil(log2(n+1)).
LabelingPtr identity_labeling();

// Seeded R-bit digest of x.
LabelingPtr hash_labeling(std::size_t width_bits, std::uint64_t seed);

// ceil(((tau^2+1)(2 tau^2+1) + 2 tau^2 (tau-1)) * log2 n), computed exactly.
std::size_t ids_label_width_bound(unsigned tau, std::size_t n);

// True iff f(x) differs from f(y) for every other member y of `ball`.
bool verify_labeling(const LabelingScheme& f, const StringSet& ball, const BitString& x);

class Modulus {
public:
    explicit Modulus(BigInt value);

    const BigInt& value() const noexcept { return value_; }
    friend bool operator==(const Modulus&, const Modulus&) = default;

private:
    BigInt value_;
};

// Smallest a >= 2 with label_x mod a distinct from every other label mod a.
// Throws NotSeparable when label_x itself occurs in `others`.
Modulus find_separating_modulus(const BigInt& label_x, std::span<const BigInt> others);

using ModulusSearch = std::function<Modulus(const BigInt&, std::span<const BigInt>)>;

// Post-hoc check of the separation property for an already chosen modulus.
bool separates(const BigInt& label_x, std::span<const BigInt> others, const BigInt& modulus);

std::vector<BigInt> labels_of(const LabelingScheme& f, const StringSet& set, const BitString& skip);

}  // namespace subsync
