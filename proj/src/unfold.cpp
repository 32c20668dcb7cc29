#include "primespec/unfold.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "primespec/errors.hpp"
#include "primespec/parallel.hpp"
#include "primespec/quadrature.hpp"

namespace primespec::unfold {

namespace {

double inv_log(double t) { return 1.0 / std::log(t); }

// Running integral of 1/log(t) along a non-decreasing sweep of arguments.
// Each advance integrates only the increment; narrow increments use a single
// fixed panel, wider ones fall back to the adaptive integrator.
class LiSweep {
public:
    double advance(double x) {
        if (!started_) {
            started_ = true;
            last_x_ = x;
            last_li_ = li(x);
            return last_li_;
        }
        if (x == last_x_) return last_li_;
        if (x < last_x_) {
            throw NumericError("LiSweep: arguments must be non-decreasing");
        }
        const double width = x - last_x_;
        double inc;
        if (width <= 16.0) {
            static const GaussLegendreRule rule(12);
            inc = rule.apply(inv_log, last_x_, x);
        } else {
            inc = integrate(inv_log, last_x_, x, 1e-12);
        }
        last_x_ = x;
        last_li_ += inc;
        return last_li_;
    }

private:
    bool started_ = false;
    double last_x_ = 0.0;
    double last_li_ = 0.0;
};

constexpr int kMaxMoebiusChannels = 70; // floor(log2(x)) < 64 for 64-bit x

} // namespace

double li(double x) {
    if (!(x > 1.0)) {
        throw DomainError("li: x must be > 1 (got " + std::to_string(x) + ")");
    }
    if (x == 2.0) return 0.0;
    return integrate(inv_log, 2.0, x, 1e-12);
}

int moebius(std::uint64_t m) {
    if (m == 0) throw DomainError("moebius: undefined at m = 0");
    if (m == 1) return 1;
    int k = 0;
    for (std::uint64_t d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            m /= d;
            if (m % d == 0) return 0;
            ++k;
        }
    }
    if (m > 1) ++k;
    return (k % 2 == 0) ? 1 : -1;
}

double riemann_r(double x, int extra_terms) {
    if (!(x >= 2.0)) {
        throw DomainError("riemann_r: x must be >= 2 (got " +
                          std::to_string(x) + ")");
    }
    const int m_max = static_cast<int>(std::floor(std::log2(x))) + extra_terms;
    double sum = 0.0;
    for (int m = 1; m <= m_max; ++m) {
        const int mu = moebius(static_cast<std::uint64_t>(m));
        if (mu == 0) continue;
        const double arg = m == 1 ? x : std::pow(x, 1.0 / m);
        if (arg <= 1.0) break;
        if (arg < 2.0) continue;
        sum += (static_cast<double>(mu) / m) * li(arg);
    }
    return sum;
}

namespace {

// Unfolds seq.values[i0, i1) into out[i0, i1). Self-contained per block so
// blocks can run on any worker.
void unfold_block(const std::vector<std::uint64_t>& primes, std::size_t i0,
                  std::size_t i1, UnfoldMethod method, std::vector<double>& out) {
    switch (method) {
    case UnfoldMethod::X_OVER_LOG_X:
        for (std::size_t i = i0; i < i1; ++i) {
            const double p = static_cast<double>(primes[i]);
            out[i] = p / std::log(p);
        }
        return;
    case UnfoldMethod::LI: {
        LiSweep sweep;
        for (std::size_t i = i0; i < i1; ++i) {
            out[i] = sweep.advance(static_cast<double>(primes[i]));
        }
        return;
    }
    case UnfoldMethod::RIEMANN_R: {
        std::vector<LiSweep> channels(kMaxMoebiusChannels + 1);
        std::vector<int> mu(kMaxMoebiusChannels + 1, 0);
        for (int m = 1; m <= kMaxMoebiusChannels; ++m) {
            mu[m] = moebius(static_cast<std::uint64_t>(m));
        }
        for (std::size_t i = i0; i < i1; ++i) {
            const double p = static_cast<double>(primes[i]);
            const int m_max = static_cast<int>(std::floor(std::log2(p)));
            double sum = 0.0;
            for (int m = 1; m <= m_max; ++m) {
                if (mu[m] == 0) continue;
                const double arg = m == 1 ? p : std::pow(p, 1.0 / m);
                if (arg < 2.0) continue;
                sum += (static_cast<double>(mu[m]) / m) * channels[m].advance(arg);
            }
            out[i] = sum;
        }
        return;
    }
    }
    throw DomainError("unfold: unknown method");
}

} // namespace

UnfoldedSequence unfold(const PrimeSequence& seq, UnfoldMethod method,
                        const UnfoldOptions& opts) {
    if (seq.empty()) throw DomainError("unfold: sequence is empty");
    for (std::uint64_t v : seq.values) {
        if (v < 2) throw DomainError("unfold: all values must be >= 2");
    }
    UnfoldedSequence out;
    out.method = method;
    out.rescaled = false;
    out.source_start_index = seq.start_index;
    out.values.resize(seq.values.size());

    const std::size_t block = std::max<std::size_t>(opts.block_size, 1);
    const std::size_t n_blocks = (seq.values.size() + block - 1) / block;
    parallel_for_tasks(n_blocks, opts.threads, [&](std::size_t b) {
        const std::size_t i0 = b * block;
        const std::size_t i1 = std::min(seq.values.size(), i0 + block);
        unfold_block(seq.values, i0, i1, method, out.values);
    });

    if (!std::is_sorted(out.values.begin(), out.values.end())) {
        // Only x/log(x) on the lowest primes can reorder levels.
        std::sort(out.values.begin(), out.values.end());
    }
    return out;
}

UnfoldedSequence rescale_unit_mean(const UnfoldedSequence& useq) {
    if (useq.values.size() < 2) {
        throw DomainError(
            "rescale_unit_mean: need at least 2 values to define a mean "
            "spacing (got " +
            std::to_string(useq.values.size()) + ")");
    }
    const double first = useq.values.front();
    const double mean_spacing = (useq.values.back() - first) /
                                static_cast<double>(useq.values.size() - 1);
    if (!(mean_spacing > 0.0)) {
        throw NumericError("rescale_unit_mean: non-positive mean spacing");
    }
    UnfoldedSequence out = useq;
    out.rescaled = true;
    for (double& v : out.values) {
        v = (v - first) / mean_spacing;
    }
    return out;
}

} // namespace primespec::unfold
