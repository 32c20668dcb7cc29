#pragma once

#include <cstdint>
#include <vector>

#include "primespec/types.hpp"

namespace primespec::sieve {

struct SieveOptions {
    // Integers per segment; segments are aligned on absolute multiples of
    // this size so results do not depend on the query range or thread count.
    std::uint64_t segment_size = std::uint64_t{1} << 20;
    unsigned threads = 1;
};

// Primality check: trial division below 10^6, deterministic Miller-Rabin
// (12-witness set, valid for all 64-bit integers) above.
bool is_prime_u64(std::uint64_t n);

// All primes p <= limit, start_index = 1. Throws DomainError for limit < 2.
PrimeSequence primes_upto(std::uint64_t limit, const SieveOptions& opts = {});

// Exactly the first n primes. The sieve bound comes from an inflated
// R-function inverse estimate and is doubled on a shortfall.
PrimeSequence first_n_primes(std::uint64_t n, const SieveOptions& opts = {});

// pi(x): number of primes <= x, by streaming segmented sieve (no storage).
std::uint64_t prime_count(std::uint64_t x, const SieveOptions& opts = {});

// Number of primes in (lo, hi], streamed.
std::uint64_t count_primes_in_range(std::uint64_t lo_exclusive,
                                    std::uint64_t hi_inclusive,
                                    const SieveOptions& opts = {});

// A verified (x, pi(x)) anchor used to seed long streaming counts.
struct PiCheckpoint {
    std::uint64_t x = 0;
    std::uint64_t pi = 0;
};

// Sorts checkpoints and cross-checks them: consecutive entries close enough
// to recount locally must agree with a fresh sieve of the gap, and every
// entry must be consistent with the R-function approximation. Throws
// IntegrityError on any contradiction.
void verify_checkpoints(std::vector<PiCheckpoint>& checkpoints,
                        const SieveOptions& opts = {});

// Primes p_{k+1} ... p_{k+count} with start_index = k + 1. Checkpoints, when
// given, must already be verified; the largest one below the target seeds
// the streaming count.
PrimeSequence primes_after_index(std::uint64_t k, std::uint64_t count,
                                 const SieveOptions& opts = {},
                                 const std::vector<PiCheckpoint>& checkpoints = {});

// Keeps elements at positions 1, 3, 5, ... (1-based) of seq.
PrimeSequence alternate(const PrimeSequence& seq);

// Newton solve of R(x) = n; used to bracket p_n before exact counting.
double estimate_nth_prime(std::uint64_t n);

// Checks the PrimeSequence invariants (strict monotonicity, parity,
// primality of every element). Throws IntegrityError on violation.
void validate(const PrimeSequence& seq);

} // namespace primespec::sieve
