// Test-only oracles, deliberately independent of the library's
// implementation paths: naive trial division, fixed-panel composite
// Gauss-Legendre quadrature (nodes computed here, not shared with the
// library), one-pass moment accumulation, and a tiny deterministic RNG for
// Monte Carlo reference samples.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracles {

inline bool trial_division_is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

inline std::vector<std::uint64_t> trial_division_primes(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 2; n <= limit; ++n) {
        if (trial_division_is_prime(n)) out.push_back(n);
    }
    return out;
}

// Bit-sieve counter, structured differently from the library's segmented
// odd-only sieve (full array, no segmentation, no odd compression).
inline std::uint64_t bit_sieve_count(std::uint64_t limit) {
    if (limit < 2) return 0;
    std::vector<bool> composite(limit + 1, false);
    std::uint64_t count = 0;
    for (std::uint64_t n = 2; n <= limit; ++n) {
        if (composite[n]) continue;
        ++count;
        for (std::uint64_t m = n * n; m <= limit; m += n) composite[m] = true;
    }
    return count;
}

// Moebius by explicit factorization, written independently.
inline int moebius_by_factorization(std::uint64_t m) {
    int factors = 0;
    for (std::uint64_t p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            int mult = 0;
            while (m % p == 0) {
                m /= p;
                ++mult;
            }
            if (mult > 1) return 0;
            ++factors;
        }
    }
    if (m > 1) ++factors;
    return factors % 2 == 0 ? 1 : -1;
}

// Gauss-Legendre nodes by bisection on the recurrence-evaluated Legendre
// polynomial (the library uses Newton; this is a separate route).
inline void gl_nodes_bisect(int n, std::vector<double>& x,
                            std::vector<double>& w) {
    auto legendre_pair = [n](double t) {
        // Returns (P_n(t), P_{n-1}(t)).
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        return std::pair<double, double>(p1, p0);
    };
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    // Roots interlace the Chebyshev angles; bracket each and bisect.
    for (int i = 0; i < n; ++i) {
        double lo = std::cos(std::numbers::pi * (i + 1.0) / (n + 0.5));
        double hi = std::cos(std::numbers::pi * (i + 0.25) / (n + 0.5));
        if (lo > hi) std::swap(lo, hi);
        double flo = legendre_pair(lo).first;
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = 0.5 * (lo + hi);
            const double fmid = legendre_pair(mid).first;
            if ((flo <= 0.0) == (fmid <= 0.0)) {
                lo = mid;
                flo = fmid;
            } else {
                hi = mid;
            }
        }
        const double root = 0.5 * (lo + hi);
        x[i] = root;
        // P'_n from the recurrence identity, avoiding finite differences.
        const auto [pn, pn1] = legendre_pair(root);
        const double d = n * (root * pn - pn1) / (root * root - 1.0);
        w[i] = 2.0 / ((1.0 - root * root) * d * d);
    }
}

// Composite fixed-panel Gauss-Legendre quadrature; panel count chosen by the
// caller (use many).
inline double composite_gl(const std::function<double(double)>& f, double a,
                           double b, int panels, int order = 16) {
    static thread_local std::vector<double> x, w;
    static thread_local int cached_order = 0;
    if (cached_order != order) {
        gl_nodes_bisect(order, x, w);
        cached_order = order;
    }
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        for (int i = 0; i < order; ++i) {
            sum += w[i] * f(mid + 0.5 * h * x[i]);
        }
    }
    return 0.5 * h * sum;
}

// Log-spaced composite Gauss-Legendre panels, for integrands like 1/log(t)
// whose derivatives concentrate at the left end of a wide interval.
inline double composite_gl_log(const std::function<double(double)>& f,
                               double a, double b, int panels,
                               int order = 16) {
    const double ratio = std::log(b / a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a * std::exp(ratio * p);
        const double hi = p + 1 == panels ? b : a * std::exp(ratio * (p + 1));
        sum += composite_gl(f, lo, hi, 1, order);
    }
    return sum;
}

// One-pass central moments (Welford-style updates extended to 3rd/4th).
struct OnePassMoments {
    long long n = 0;
    double mean = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;

    void add(double x) {
        const double n1 = static_cast<double>(n);
        ++n;
        const double delta = x - mean;
        const double delta_n = delta / static_cast<double>(n);
        const double delta_n2 = delta_n * delta_n;
        const double term1 = delta * delta_n * n1;
        mean += delta_n;
        m4 += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) +
              6.0 * delta_n2 * m2 - 4.0 * delta_n * m3;
        m3 += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2;
        m2 += term1;
    }
    double mu2() const { return m2 / n; }
    double mu3() const { return m3 / n; }
    double mu4() const { return m4 / n; }
};

// Small deterministic RNG for test-side Monte Carlo (xorshift-based, not the
// library's generator).
struct TestRng {
    std::uint64_t state;
    explicit TestRng(std::uint64_t seed) : state(seed ? seed : 0xdeadbeef) {}
    std::uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double exponential() { return -std::log(1.0 - uniform()); }
    // Poisson by inversion (small lambda only).
    int poisson(double lambda) {
        const double limit = std::exp(-lambda);
        double prod = 1.0;
        int k = -1;
        do {
            prod *= uniform();
            ++k;
        } while (prod > limit);
        return k;
    }
};

// Two-sided Kolmogorov-Smirnov distance between sorted samples and a CDF.
inline double ks_distance(std::vector<double> sorted_samples,
                          const std::function<double(double)>& cdf) {
    const auto n = sorted_samples.size();
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double F = cdf(sorted_samples[i]);
        ks = std::max(ks, std::abs(F - static_cast<double>(i) / n));
        ks = std::max(ks, std::abs(F - static_cast<double>(i + 1) / n));
    }
    return ks;
}

} // namespace oracles
