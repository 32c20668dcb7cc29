#include "primespec/sieve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "primespec/errors.hpp"
#include "primespec/parallel.hpp"
#include "primespec/unfold.hpp"

namespace primespec::sieve {

namespace {

std::uint64_t isqrt_u64(std::uint64_t n) {
    if (n == 0) return 0;
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp,
                         std::uint64_t m) {
    std::uint64_t result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod_u64(result, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return result;
}

bool miller_rabin(std::uint64_t n) {
    // Witness set deterministic for all n < 3.3 * 10^24 (covers 64 bits).
    static constexpr std::uint64_t witnesses[] = {2,  3,  5,  7,  11, 13,
                                                  17, 19, 23, 29, 31, 37};
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (std::uint64_t a : witnesses) {
        if (a % n == 0) continue;
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// Simple odd-only sieve for base primes; returns odd primes in [3, limit].
std::vector<std::uint32_t> odd_primes_upto(std::uint64_t limit) {
    std::vector<std::uint32_t> out;
    if (limit < 3) return out;
    const std::uint64_t n_odd = (limit - 1) / 2; // odds 3, 5, ..., <= limit
    std::vector<bool> composite(n_odd + 1, false);
    for (std::uint64_t i = 1; i <= n_odd; ++i) {
        const std::uint64_t p = 2 * i + 1;
        if (p * p > limit) break;
        if (composite[i]) continue;
        for (std::uint64_t m = p * p; m <= limit; m += 2 * p) {
            composite[(m - 1) / 2] = true;
        }
    }
    for (std::uint64_t i = 1; i <= n_odd; ++i) {
        if (!composite[i]) out.push_back(static_cast<std::uint32_t>(2 * i + 1));
    }
    return out;
}

// One aligned segment [seg_lo, seg_hi) of the global odd-composite bitmap.
// Bit i of the mask stands for the odd number seg_lo_odd + 2*i; a set bit
// means composite.
struct Segment {
    std::uint64_t lo = 0;       // inclusive, aligned to segment_size
    std::uint64_t hi = 0;       // exclusive
    std::uint64_t first_odd = 0;
    std::uint64_t n_bits = 0;
    std::vector<std::uint64_t> words;
};

void sieve_segment(Segment& seg, const std::vector<std::uint32_t>& base) {
    seg.first_odd = seg.lo | 1;
    seg.n_bits = seg.first_odd < seg.hi ? (seg.hi - seg.first_odd + 1) / 2 : 0;
    seg.words.assign((seg.n_bits + 63) / 64, 0);
    if (seg.n_bits == 0) return;
    for (std::uint32_t p : base) {
        const std::uint64_t p64 = p;
        const std::uint64_t pp = p64 * p64;
        if (pp >= seg.hi) break;
        std::uint64_t start = ((seg.lo + p64 - 1) / p64) * p64;
        start = std::max(start, pp);
        if ((start & 1) == 0) start += p64;
        for (std::uint64_t m = start; m < seg.hi; m += 2 * p64) {
            const std::uint64_t idx = (m - seg.first_odd) >> 1;
            seg.words[idx >> 6] |= std::uint64_t{1} << (idx & 63);
        }
    }
}

// Walks aligned segments covering [lo, hi] and hands each sieved segment to
// visit(segment). Returns early when visit returns false.
template <typename Visit>
void for_each_segment(std::uint64_t lo, std::uint64_t hi,
                      const std::vector<std::uint32_t>& base,
                      std::uint64_t segment_size, Visit&& visit) {
    if (hi < lo) return;
    Segment seg;
    std::uint64_t seg_index = lo / segment_size;
    for (;;) {
        seg.lo = seg_index * segment_size;
        seg.hi = seg.lo + segment_size;
        if (seg.lo > hi) return;
        sieve_segment(seg, base);
        if (!visit(seg)) return;
        ++seg_index;
    }
}

std::uint64_t count_odd_primes_in_segment(const Segment& seg,
                                          std::uint64_t lo, std::uint64_t hi) {
    // Counts unset bits whose odd value v satisfies lo <= v <= hi and v >= 3.
    std::uint64_t from = std::max(lo, std::max<std::uint64_t>(seg.first_odd, 3));
    std::uint64_t to = std::min(hi, seg.first_odd + 2 * (seg.n_bits - 1));
    if (seg.n_bits == 0 || from > to) return 0;
    if ((from & 1) == 0) ++from;
    if ((to & 1) == 0) --to;
    if (from > to) return 0;
    const std::uint64_t bit_from = (from - seg.first_odd) >> 1;
    const std::uint64_t bit_to = (to - seg.first_odd) >> 1;
    std::uint64_t count = 0;
    const std::uint64_t w_from = bit_from >> 6;
    const std::uint64_t w_to = bit_to >> 6;
    for (std::uint64_t w = w_from; w <= w_to; ++w) {
        std::uint64_t mask = ~seg.words[w];
        if (w == w_from) mask &= ~std::uint64_t{0} << (bit_from & 63);
        if (w == w_to) {
            const unsigned top = static_cast<unsigned>(bit_to & 63);
            mask &= top == 63 ? ~std::uint64_t{0}
                              : ((std::uint64_t{1} << (top + 1)) - 1);
        }
        count += static_cast<std::uint64_t>(std::popcount(mask));
    }
    return count;
}

template <typename Fn>
void visit_odd_primes_in_segment(const Segment& seg, std::uint64_t lo,
                                 std::uint64_t hi, Fn&& fn) {
    std::uint64_t from = std::max(lo, std::max<std::uint64_t>(seg.first_odd, 3));
    std::uint64_t to = std::min(hi, seg.first_odd + 2 * (seg.n_bits - 1));
    if (seg.n_bits == 0 || from > to) return;
    if ((from & 1) == 0) ++from;
    if ((to & 1) == 0) --to;
    for (std::uint64_t v = from; v <= to; v += 2) {
        const std::uint64_t idx = (v - seg.first_odd) >> 1;
        if (!(seg.words[idx >> 6] >> (idx & 63) & 1)) {
            if (!fn(v)) return;
        }
    }
}

// Splits [lo, hi] into per-thread runs of whole segments and reduces the
// per-run counts in run order.
std::uint64_t parallel_count(std::uint64_t lo, std::uint64_t hi,
                             const SieveOptions& opts) {
    if (hi < lo || hi < 3) return 0;
    const auto base = odd_primes_upto(isqrt_u64(hi));
    const std::uint64_t seg_size = std::max<std::uint64_t>(opts.segment_size, 128);
    const std::uint64_t first_seg = lo / seg_size;
    const std::uint64_t last_seg = hi / seg_size;
    const std::uint64_t n_segs = last_seg - first_seg + 1;
    const std::uint64_t n_runs =
        std::min<std::uint64_t>(std::max<unsigned>(opts.threads, 1) * 4, n_segs);
    const std::uint64_t segs_per_run = (n_segs + n_runs - 1) / n_runs;
    std::vector<std::uint64_t> run_counts(n_runs, 0);
    parallel_for_tasks(n_runs, opts.threads, [&](std::size_t run) {
        const std::uint64_t s0 = first_seg + run * segs_per_run;
        const std::uint64_t s1 = std::min(last_seg, s0 + segs_per_run - 1);
        if (s0 > last_seg) return;
        const std::uint64_t run_lo = std::max(lo, s0 * seg_size);
        const std::uint64_t run_hi = std::min(hi, (s1 + 1) * seg_size - 1);
        std::uint64_t c = 0;
        for_each_segment(run_lo, run_hi, base, seg_size, [&](const Segment& seg) {
            c += count_odd_primes_in_segment(seg, run_lo, run_hi);
            return true;
        });
        run_counts[run] = c;
    });
    std::uint64_t total = 0;
    for (std::uint64_t c : run_counts) total += c;
    return total;
}

// Collects all primes in [lo, hi] (including 2 when in range), in order.
std::vector<std::uint64_t> collect_primes(std::uint64_t lo, std::uint64_t hi,
                                          const SieveOptions& opts) {
    std::vector<std::uint64_t> out;
    if (hi < 2 || hi < lo) return out;
    if (lo <= 2) out.push_back(2);
    if (hi < 3) return out;
    const auto base = odd_primes_upto(isqrt_u64(hi));
    const std::uint64_t seg_size = std::max<std::uint64_t>(opts.segment_size, 128);
    const std::uint64_t first_seg = lo / seg_size;
    const std::uint64_t last_seg = hi / seg_size;
    const std::uint64_t n_segs = last_seg - first_seg + 1;
    const std::uint64_t n_runs =
        std::min<std::uint64_t>(std::max<unsigned>(opts.threads, 1) * 4, n_segs);
    const std::uint64_t segs_per_run = (n_segs + n_runs - 1) / n_runs;
    std::vector<std::vector<std::uint64_t>> run_values(n_runs);
    parallel_for_tasks(n_runs, opts.threads, [&](std::size_t run) {
        const std::uint64_t s0 = first_seg + run * segs_per_run;
        const std::uint64_t s1 = std::min(last_seg, s0 + segs_per_run - 1);
        if (s0 > last_seg) return;
        const std::uint64_t run_lo = std::max(lo, s0 * seg_size);
        const std::uint64_t run_hi = std::min(hi, (s1 + 1) * seg_size - 1);
        auto& vals = run_values[run];
        for_each_segment(run_lo, run_hi, base, seg_size, [&](const Segment& seg) {
            visit_odd_primes_in_segment(seg, run_lo, run_hi,
                                        [&](std::uint64_t p) {
                                            vals.push_back(p);
                                            return true;
                                        });
            return true;
        });
    });
    for (auto& vals : run_values) {
        out.insert(out.end(), vals.begin(), vals.end());
    }
    return out;
}

} // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    if (n < 1000000) {
        for (std::uint64_t d = 3; d * d <= n; d += 2) {
            if (n % d == 0) return false;
        }
        return true;
    }
    if (n % 3 == 0 || n % 5 == 0) return false;
    return miller_rabin(n);
}

PrimeSequence primes_upto(std::uint64_t limit, const SieveOptions& opts) {
    if (limit < 2) {
        throw DomainError("primes_upto: limit must be >= 2 (got " +
                          std::to_string(limit) + ")");
    }
    PrimeSequence seq;
    seq.start_index = 1;
    seq.values = collect_primes(2, limit, opts);
    return seq;
}

std::uint64_t prime_count(std::uint64_t x, const SieveOptions& opts) {
    if (x < 2) return 0;
    return 1 + parallel_count(3, x, opts); // the 1 is the prime 2
}

std::uint64_t count_primes_in_range(std::uint64_t lo_exclusive,
                                    std::uint64_t hi_inclusive,
                                    const SieveOptions& opts) {
    if (hi_inclusive <= lo_exclusive) return 0;
    std::uint64_t count = parallel_count(
        std::max<std::uint64_t>(lo_exclusive + 1, 3), hi_inclusive, opts);
    if (lo_exclusive < 2 && hi_inclusive >= 2) ++count;
    return count;
}

double estimate_nth_prime(std::uint64_t n) {
    if (n < 7) {
        static constexpr double small[] = {0, 2, 3, 5, 7, 11, 13};
        return small[n];
    }
    const double dn = static_cast<double>(n);
    double x = dn * (std::log(dn) + std::log(std::log(dn)));
    // dR/dx is 1/log(x) to leading order, which is plenty for a bracket.
    for (int iter = 0; iter < 64; ++iter) {
        const double r = unfold::riemann_r(x);
        const double step = (dn - r) * std::log(x);
        x += step;
        if (x < 2.0) x = 2.0;
        if (std::abs(step) < 0.5) break;
    }
    return x;
}

PrimeSequence first_n_primes(std::uint64_t n, const SieveOptions& opts) {
    if (n < 1) throw DomainError("first_n_primes: n must be >= 1");
    std::uint64_t bound;
    if (n < 7) {
        bound = 14;
    } else {
        bound = static_cast<std::uint64_t>(1.03 * estimate_nth_prime(n)) + 16;
    }
    for (;;) {
        PrimeSequence seq = primes_upto(bound, opts);
        if (seq.values.size() >= n) {
            seq.values.resize(n);
            return seq;
        }
        bound *= 2;
    }
}

void verify_checkpoints(std::vector<PiCheckpoint>& checkpoints,
                        const SieveOptions& opts) {
    std::sort(checkpoints.begin(), checkpoints.end(),
              [](const PiCheckpoint& a, const PiCheckpoint& b) {
                  return a.x < b.x;
              });
    constexpr std::uint64_t kMaxRecountGap = 100'000'000;
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        const auto& cp = checkpoints[i];
        if (cp.x < 2 || cp.pi == 0 || cp.pi > cp.x) {
            throw IntegrityError("checkpoint (" + std::to_string(cp.x) + ", " +
                                 std::to_string(cp.pi) + ") is not plausible");
        }
        // Gross-corruption guard: pi(x) must sit near R(x).
        const double r = unfold::riemann_r(static_cast<double>(cp.x));
        const double tol =
            std::max(1e4, 1e-3 * static_cast<double>(cp.pi));
        if (std::abs(r - static_cast<double>(cp.pi)) > tol) {
            throw IntegrityError(
                "checkpoint pi(" + std::to_string(cp.x) + ") = " +
                std::to_string(cp.pi) + " is far from the R-function value");
        }
        if (i > 0) {
            const auto& prev = checkpoints[i - 1];
            if (cp.x == prev.x && cp.pi != prev.pi) {
                throw IntegrityError("conflicting checkpoints at x = " +
                                     std::to_string(cp.x));
            }
            // Close pairs are recounted with a fresh local sieve.
            if (cp.x > prev.x && cp.x - prev.x <= kMaxRecountGap) {
                const std::uint64_t recount =
                    count_primes_in_range(prev.x, cp.x, opts);
                if (prev.pi + recount != cp.pi) {
                    throw IntegrityError(
                        "checkpoint pair (" + std::to_string(prev.x) + ", " +
                        std::to_string(cp.x) +
                        ") contradicted by local recount: expected " +
                        std::to_string(cp.pi - prev.pi) + " primes, counted " +
                        std::to_string(recount));
                }
            }
        }
    }
}

PrimeSequence primes_after_index(std::uint64_t k, std::uint64_t count,
                                 const SieveOptions& opts,
                                 const std::vector<PiCheckpoint>& checkpoints) {
    if (count < 1) throw DomainError("primes_after_index: count must be >= 1");
    if (k == 0) return first_n_primes(count, opts);

    const double est_pk = estimate_nth_prime(k);
    if (est_pk < 2e6) {
        // Small enough to sieve from scratch.
        PrimeSequence all = first_n_primes(k + count, opts);
        PrimeSequence seq;
        seq.start_index = k + 1;
        seq.values.assign(all.values.begin() + static_cast<std::ptrdiff_t>(k),
                          all.values.end());
        return seq;
    }

    // Anchor strictly below p_k, then establish the exact index by counting.
    std::uint64_t x0 = static_cast<std::uint64_t>(0.97 * est_pk);
    std::uint64_t counted = 0;
    for (;;) {
        std::uint64_t base_x = 1, base_pi = 0;
        for (const auto& cp : checkpoints) {
            if (cp.x <= x0 && cp.x > base_x) {
                base_x = cp.x;
                base_pi = cp.pi;
            }
        }
        counted = base_pi + count_primes_in_range(base_x, x0, opts);
        if (counted < k) break;
        x0 = static_cast<std::uint64_t>(0.9 * static_cast<double>(x0));
        if (x0 < 2) throw NumericError("primes_after_index: bracketing failed");
    }

    // Sieve forward from the anchor, skipping the first k - counted primes.
    PrimeSequence seq;
    seq.start_index = k + 1;
    seq.values.reserve(count);
    std::uint64_t to_skip = k - counted;
    const double est_end = estimate_nth_prime(k + count);
    std::uint64_t lo = x0 + 1;
    std::uint64_t hi = static_cast<std::uint64_t>(1.03 * est_end) + 16;
    const auto seg_size = std::max<std::uint64_t>(opts.segment_size, 128);
    while (seq.values.size() < count) {
        const auto base = odd_primes_upto(isqrt_u64(hi));
        bool done = false;
        for_each_segment(lo, hi, base, seg_size, [&](const Segment& seg) {
            visit_odd_primes_in_segment(seg, lo, hi, [&](std::uint64_t p) {
                if (to_skip > 0) {
                    --to_skip;
                    return true;
                }
                seq.values.push_back(p);
                if (seq.values.size() == count) {
                    done = true;
                    return false;
                }
                return true;
            });
            return !done;
        });
        lo = hi + 1;
        hi += std::max<std::uint64_t>(hi / 8, seg_size);
    }
    return seq;
}

PrimeSequence alternate(const PrimeSequence& seq) {
    if (seq.empty()) throw DomainError("alternate: sequence is empty");
    PrimeSequence out;
    out.start_index = seq.start_index;
    out.values.reserve((seq.values.size() + 1) / 2);
    for (std::size_t i = 0; i < seq.values.size(); i += 2) {
        out.values.push_back(seq.values[i]);
    }
    return out;
}

void validate(const PrimeSequence& seq) {
    for (std::size_t i = 0; i < seq.values.size(); ++i) {
        const std::uint64_t v = seq.values[i];
        if (v < 2) throw IntegrityError("prime sequence value below 2");
        if (i > 0 && seq.values[i] <= seq.values[i - 1]) {
            throw IntegrityError("prime sequence not strictly increasing at " +
                                 std::to_string(i));
        }
        const bool may_be_two = (seq.start_index == 1 && i == 0);
        if (v % 2 == 0 && !(may_be_two && v == 2)) {
            throw IntegrityError("even value " + std::to_string(v) +
                                 " at interior position");
        }
        if (!is_prime_u64(v)) {
            throw IntegrityError(std::to_string(v) + " is not prime");
        }
    }
}

} // namespace primespec::sieve
