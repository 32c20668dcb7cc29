#pragma once

#include <cstdint>

#include "primespec/types.hpp"

namespace primespec::unfold {

// Li(x) = int_2^x dt/log(t); negative for 1 < x < 2, zero at x = 2.
// Throws DomainError for x <= 1.
double li(double x);

// Moebius function: 1 at m = 1, 0 when a squared prime divides m,
// (-1)^(number of prime divisors) otherwise. Throws DomainError at m = 0.
int moebius(std::uint64_t m);

// R(x) = sum_{m=1}^{floor(log2 x)} mu(m)/m * Li(x^(1/m)) for x >= 2.
// Terms whose argument falls below 2 contribute nothing: they are beyond
// the truncation the series is defined with, and admitting them would make
// the value sensitive to the exact cutoff. extra_terms extends the upper
// limit (used to probe truncation insensitivity).
double riemann_r(double x, int extra_terms = 0);

struct UnfoldOptions {
    unsigned threads = 1;
    // Primes per independently-computed block. Fixed block boundaries keep
    // the output bitwise identical for any thread count.
    std::size_t block_size = 65536;
};

// Maps a prime sequence through the smooth staircase of the chosen method.
// The x/log(x) staircase decreases below x = e, which can reorder the very
// lowest levels; the output is the sorted level set in that case.
UnfoldedSequence unfold(const PrimeSequence& seq, UnfoldMethod method,
                        const UnfoldOptions& opts = {});

// Affine map onto mean spacing exactly one. Throws DomainError for fewer
// than 2 values.
UnfoldedSequence rescale_unit_mean(const UnfoldedSequence& useq);

} // namespace primespec::unfold
