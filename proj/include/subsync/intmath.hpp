#pragma once

#include <cstddef>

#include <gmpxx.h>

namespace subsync {

// ceil(log2(base^exp)), exact.
inline std::size_t ceil_log2_pow(std::size_t base, unsigned long exp) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), base, exp);
    p -= 1;
    return p == 0 ? 0 : mpz_sizeinbase(p.get_mpz_t(), 2);
}

// Number of significant bits; 0 for 0.
inline std::size_t bit_length(const mpz_class& v) {
    return v == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

}  // namespace subsync
