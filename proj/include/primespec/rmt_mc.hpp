#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "primespec/types.hpp"

namespace primespec::rmt_mc {

// One Monte Carlo experiment: random-matrix spectra of the chosen ensemble
// (or independent uniform levels for POISSON, as a harness check), sampled
// via the tridiagonal beta-ensemble construction.
struct McConfig {
    EnsembleTag kind = EnsembleTag::GOE;
    int dim = 100;
    int n_samples = 100;
    std::uint64_t seed = 20250901;
    double central_fraction = 0.5;
    unsigned threads = 1;
};

// Eigenvalues of one matrix draw, sorted ascending. Deterministic in
// (config.seed, draw_index). Requires dim >= 2.
std::vector<double> sample_spectrum(const McConfig& config,
                                    std::uint64_t draw_index);

// One draw unfolded by the integrated semicircle density and restricted to
// the central fraction of levels. Requires dim >= 8.
UnfoldedSequence unfolded_sample(const McConfig& config,
                                 std::uint64_t draw_index);

// Sample-averaged statistic curve; stderr is the standard error over draws.
StatisticCurve mc_statistic(const McConfig& config, Statistic statistic,
                            const std::vector<double>& L_grid,
                            double window_step = 0.25);

// Spacing histogram pooled over all draws.
SpacingHistogram mc_nnsd(const McConfig& config, double bin_width = 0.1,
                         double s_max = 4.0);

struct TabulateOptions {
    int dim = 500;
    int n_samples = 400;
    std::uint64_t seed = 20250901;
    double l_min = 0.25;
    double l_max = 10.0;
    double l_step = 0.25;
    double window_step = 0.25;
    unsigned threads = 1;
};

// Writes the GOE/GUE/GSE gamma1 and gamma2 reference curves as CSV
// (kind,statistic,L,value,stderr) with the generating parameters in the
// header comment.
void tabulate_gamma_reference(const std::string& path,
                              const TabulateOptions& opts = {});

} // namespace primespec::rmt_mc
