#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "primespec/types.hpp"

namespace primespec::spectral {

// Nearest-neighbor spacing histogram, normalized as a probability density.
// Spacings above s_max enter total_spacings but no bin.
SpacingHistogram nnsd(const UnfoldedSequence& useq, double bin_width = 0.1,
                      double s_max = 4.0);

// Counts of levels in windows [a_j, a_j + L), a_j = eps_1 + offset + j*step,
// for every j with a_j + L <= eps_N. Throws InsufficientDataError when the
// sequence span does not exceed L.
std::vector<std::uint64_t> window_counts(const UnfoldedSequence& useq,
                                         double L, double step,
                                         double anchor_offset = 0.0);

// Central moment mu_j = <(n - <n>)^j> over the counts, j in {2, 3, 4}.
double central_moment(const std::vector<std::uint64_t>& counts, int j);

// Number of contiguous blocks used for standard-error estimates.
inline constexpr unsigned kStderrBlocks = 20;

StatisticCurve number_variance(const UnfoldedSequence& useq,
                               const std::vector<double>& L_grid,
                               double step = 0.25);

StatisticCurve skewness(const UnfoldedSequence& useq,
                        const std::vector<double>& L_grid,
                        double step = 0.25);

StatisticCurve excess(const UnfoldedSequence& useq,
                      const std::vector<double>& L_grid, double step = 0.25);

// Sigma^2 on a geometric L grid up to L_max, plus a plateau estimate when
// the trailing octave average settles to within 5% per octave.
std::pair<StatisticCurve, std::optional<SaturationEstimate>>
saturation_scan(const UnfoldedSequence& useq, double L_max, int n_points = 40,
                double step = 0.25);

// Inclusive linear grid lo, lo+step, ..., hi (with an epsilon guard on hi).
std::vector<double> linear_grid(double lo, double hi, double step);

// n-point geometric grid from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

// The L grid used for Berry-Robnik fits: 0.1 to 5.0 in steps of 0.1.
std::vector<double> standard_fit_grid();

} // namespace primespec::spectral
