#include "primespec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "primespec/errors.hpp"

namespace primespec::spectral {

namespace {

double statistic_from_counts(const std::vector<std::uint64_t>& counts,
                             std::size_t lo, std::size_t hi, Statistic stat) {
    const std::size_t n = hi - lo;
    double mean = 0.0;
    for (std::size_t i = lo; i < hi; ++i) mean += static_cast<double>(counts[i]);
    mean /= static_cast<double>(n);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double d = static_cast<double>(counts[i]) - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    switch (stat) {
    case Statistic::SIGMA2:
        return m2;
    case Statistic::GAMMA1:
        return m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    case Statistic::GAMMA2:
        return m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;
    }
    return 0.0;
}

double block_stderr(const std::vector<std::uint64_t>& counts, Statistic stat) {
    const std::size_t n = counts.size();
    std::size_t n_blocks = kStderrBlocks;
    if (n < 2 * n_blocks) n_blocks = n / 2;
    if (n_blocks < 2) return 0.0;
    std::vector<double> block_values(n_blocks);
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const std::size_t lo = b * n / n_blocks;
        const std::size_t hi = (b + 1) * n / n_blocks;
        block_values[b] = statistic_from_counts(counts, lo, hi, stat);
    }
    double mean = 0.0;
    for (double v : block_values) mean += v;
    mean /= static_cast<double>(n_blocks);
    double var = 0.0;
    for (double v : block_values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n_blocks - 1);
    return std::sqrt(var / static_cast<double>(n_blocks));
}

StatisticCurve count_statistic_curve(const UnfoldedSequence& useq,
                                     const std::vector<double>& L_grid,
                                     double step, Statistic stat) {
    if (L_grid.empty()) throw DomainError("statistic curve: empty L grid");
    if (!std::is_sorted(L_grid.begin(), L_grid.end())) {
        throw DomainError("statistic curve: L grid must be increasing");
    }
    StatisticCurve curve;
    curve.statistic = stat;
    curve.window_step = step;
    curve.points.reserve(L_grid.size());
    for (double L : L_grid) {
        const auto counts = window_counts(useq, L, step);
        CurvePoint pt;
        pt.L = L;
        pt.value = statistic_from_counts(counts, 0, counts.size(), stat);
        pt.stderr_ = block_stderr(counts, stat);
        curve.points.push_back(pt);
        curve.n_windows_per_L = counts.size();
    }
    return curve;
}

} // namespace

SpacingHistogram nnsd(const UnfoldedSequence& useq, double bin_width,
                      double s_max) {
    if (useq.values.size() < 2) {
        throw InsufficientDataError("nnsd: need at least 2 levels");
    }
    if (!(bin_width > 0.0) || !(s_max > 0.0)) {
        throw DomainError("nnsd: bin_width and s_max must be positive");
    }
    SpacingHistogram hist;
    hist.bin_width = bin_width;
    hist.s_max = s_max;
    const auto n_bins =
        static_cast<std::size_t>(std::ceil(s_max / bin_width - 1e-9));
    std::vector<std::uint64_t> bin_counts(n_bins, 0);
    const auto& e = useq.values;
    for (std::size_t i = 0; i + 1 < e.size(); ++i) {
        const double s = e[i + 1] - e[i];
        if (s < 0.0) throw NumericError("nnsd: sequence not increasing");
        if (s <= s_max) {
            auto idx = static_cast<std::size_t>(s / bin_width);
            if (idx >= n_bins) idx = n_bins - 1; // s == s_max boundary
            ++bin_counts[idx];
        }
        ++hist.total_spacings;
    }
    hist.densities.resize(n_bins);
    const double norm =
        1.0 / (static_cast<double>(hist.total_spacings) * bin_width);
    for (std::size_t i = 0; i < n_bins; ++i) {
        hist.densities[i] = static_cast<double>(bin_counts[i]) * norm;
    }
    return hist;
}

std::vector<std::uint64_t> window_counts(const UnfoldedSequence& useq,
                                         double L, double step,
                                         double anchor_offset) {
    if (!(L > 0.0)) throw DomainError("window_counts: L must be positive");
    if (!(step > 0.0)) throw DomainError("window_counts: step must be positive");
    const auto& e = useq.values;
    if (e.size() < 2 || !(useq.span() > L)) {
        throw InsufficientDataError(
            "window_counts: sequence span " + std::to_string(useq.span()) +
            " does not exceed window length " + std::to_string(L));
    }
    const double start = e.front() + anchor_offset;
    const double last_anchor = e.back() - L;
    if (start > last_anchor) {
        throw InsufficientDataError("window_counts: no window fits");
    }
    const auto n_windows =
        static_cast<std::size_t>(std::floor((last_anchor - start) / step)) + 1;
    std::vector<std::uint64_t> counts;
    counts.reserve(n_windows);
    // Both edges advance monotonically with the anchor.
    std::size_t lo = 0, hi = 0;
    for (std::size_t j = 0; j < n_windows; ++j) {
        const double a = start + static_cast<double>(j) * step;
        while (lo < e.size() && e[lo] < a) ++lo;
        if (hi < lo) hi = lo;
        while (hi < e.size() && e[hi] < a + L) ++hi;
        counts.push_back(hi - lo);
    }
    return counts;
}

double central_moment(const std::vector<std::uint64_t>& counts, int j) {
    if (counts.empty()) throw DomainError("central_moment: empty counts");
    if (j < 2 || j > 4) throw DomainError("central_moment: j must be 2, 3 or 4");
    double mean = 0.0;
    for (std::uint64_t c : counts) mean += static_cast<double>(c);
    mean /= static_cast<double>(counts.size());
    double acc = 0.0;
    for (std::uint64_t c : counts) {
        acc += std::pow(static_cast<double>(c) - mean, j);
    }
    return acc / static_cast<double>(counts.size());
}

StatisticCurve number_variance(const UnfoldedSequence& useq,
                               const std::vector<double>& L_grid, double step) {
    return count_statistic_curve(useq, L_grid, step, Statistic::SIGMA2);
}

StatisticCurve skewness(const UnfoldedSequence& useq,
                        const std::vector<double>& L_grid, double step) {
    return count_statistic_curve(useq, L_grid, step, Statistic::GAMMA1);
}

StatisticCurve excess(const UnfoldedSequence& useq,
                      const std::vector<double>& L_grid, double step) {
    return count_statistic_curve(useq, L_grid, step, Statistic::GAMMA2);
}

std::pair<StatisticCurve, std::optional<SaturationEstimate>>
saturation_scan(const UnfoldedSequence& useq, double L_max, int n_points,
                double step) {
    if (!(L_max > 1.0)) throw DomainError("saturation_scan: L_max must exceed 1");
    if (!(L_max < useq.span() / 2.0)) {
        throw DomainError("saturation_scan: L_max must be below half the span");
    }
    if (n_points < 8) throw DomainError("saturation_scan: need >= 8 grid points");
    const auto grid = log_grid(1.0, L_max, n_points);
    StatisticCurve curve = number_variance(useq, grid, step);

    // Trailing moving average over the last two octaves; the plateau of a
    // short sequence oscillates on octave scales, so a single-octave window
    // is too jumpy for the 5% test.
    const auto& pts = curve.points;
    const auto n = pts.size();
    std::vector<double> octave_avg(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        int cnt = 0;
        for (std::size_t k = 0; k <= i; ++k) {
            if (pts[k].L > pts[i].L / 4.0) {
                sum += pts[k].value;
                ++cnt;
            }
        }
        octave_avg[i] = cnt > 0 ? sum / cnt : pts[i].value;
    }
    // Relative change per octave, evaluated where a full octave of history
    // exists; the plateau begins at the first point from which every later
    // change stays under 5%.
    std::vector<std::optional<double>> change(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::ptrdiff_t prev = -1;
        for (std::size_t k = 0; k < i; ++k) {
            if (pts[k].L <= pts[i].L / 2.0) prev = static_cast<std::ptrdiff_t>(k);
        }
        if (prev < 0) continue;
        const double denom = std::max(std::abs(octave_avg[i]), 1e-12);
        change[i] = std::abs(octave_avg[i] - octave_avg[prev]) / denom;
    }
    std::optional<SaturationEstimate> sat;
    for (std::size_t i = 0; i < n; ++i) {
        if (!change[i]) continue;
        bool stable = true;
        for (std::size_t k = i; k < n; ++k) {
            if (change[k] && *change[k] >= 0.05) {
                stable = false;
                break;
            }
        }
        if (stable) {
            SaturationEstimate est;
            est.l_saturation = pts[i].L;
            double sum = 0.0;
            int cnt = 0;
            for (std::size_t k = i; k < n; ++k) {
                sum += pts[k].value;
                ++cnt;
            }
            est.plateau_value = sum / cnt;
            sat = est;
            break;
        }
    }
    return {std::move(curve), sat};
}

std::vector<double> linear_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo)) {
        throw DomainError("linear_grid: bad bounds or step");
    }
    std::vector<double> grid;
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    grid.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        grid.push_back(lo + static_cast<double>(i) * step);
    }
    // Snap a final point that overshot hi by rounding, so downstream
    // closed-interval filters keep it.
    if (std::abs(grid.back() - hi) < 1e-9 * std::max(1.0, std::abs(hi))) {
        grid.back() = hi;
    }
    return grid;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) {
        throw DomainError("log_grid: bad bounds or point count");
    }
    std::vector<double> grid(n);
    const double ratio = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
        grid[i] = lo * std::exp(ratio * i);
    }
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

std::vector<double> standard_fit_grid() { return linear_grid(0.1, 5.0, 0.1); }

} // namespace primespec::spectral
