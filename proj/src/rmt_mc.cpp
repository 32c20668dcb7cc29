#include "primespec/rmt_mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "primespec/errors.hpp"
#include "primespec/parallel.hpp"
#include "primespec/rng.hpp"
#include "primespec/spectral.hpp"
#include "primespec/tridiagonal.hpp"
#include "primespec/version.hpp"

namespace primespec::rmt_mc {

namespace {

double beta_of(EnsembleTag kind) {
    switch (kind) {
    case EnsembleTag::GOE: return 1.0;
    case EnsembleTag::GUE: return 2.0;
    case EnsembleTag::GSE: return 4.0;
    default:
        throw DomainError("rmt_mc: ensemble must be GOE, GUE or GSE");
    }
}

void check_config(const McConfig& config, int min_dim) {
    if (config.dim < min_dim) {
        throw DomainError("rmt_mc: dim must be >= " + std::to_string(min_dim));
    }
    if (config.n_samples < 1) throw DomainError("rmt_mc: n_samples must be >= 1");
    if (!(config.central_fraction > 0.0) || config.central_fraction > 1.0) {
        throw DomainError("rmt_mc: central_fraction must be in (0, 1]");
    }
}

// CDF of the semicircle law on [-1, 1].
double semicircle_cdf(double u) {
    u = std::clamp(u, -1.0, 1.0);
    return 0.5 + (u * std::sqrt(1.0 - u * u) + std::asin(u)) / std::numbers::pi;
}

} // namespace

std::vector<double> sample_spectrum(const McConfig& config,
                                    std::uint64_t draw_index) {
    check_config(config, 2);
    Rng rng = Rng::for_stream(config.seed, draw_index);
    const int n = config.dim;

    if (config.kind == EnsembleTag::POISSON) {
        std::vector<double> levels(n);
        for (double& v : levels) v = rng.uniform() * n;
        std::sort(levels.begin(), levels.end());
        return levels;
    }

    // Dumitriu-Edelman beta-Hermite tridiagonal model: diagonal N(0,1),
    // off-diagonal chi_{beta * (n-1-i)} / sqrt(2).
    const double beta = beta_of(config.kind);
    std::vector<double> diag(n), off(n - 1);
    for (int i = 0; i < n; ++i) diag[i] = rng.normal();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i + 1 < n; ++i) {
        off[i] = rng.chi(beta * static_cast<double>(n - 1 - i)) * inv_sqrt2;
    }
    try {
        return tridiagonal_eigenvalues(std::move(diag), std::move(off));
    } catch (const NumericError& err) {
        throw NumericError(std::string(err.what()) + " (draw " +
                           std::to_string(draw_index) + ")");
    }
}

UnfoldedSequence unfolded_sample(const McConfig& config,
                                 std::uint64_t draw_index) {
    check_config(config, 8);
    auto levels = sample_spectrum(config, draw_index);
    const int n = config.dim;

    UnfoldedSequence useq;
    useq.method = UnfoldMethod::RIEMANN_R; // not meaningful for matrices
    useq.rescaled = false;
    useq.source_start_index = 1;

    if (config.kind == EnsembleTag::POISSON) {
        useq.values = std::move(levels); // already unit density
    } else {
        // Eigenvalue support radius of the tridiagonal model, from the
        // exact second moment of the matrix.
        const double beta = beta_of(config.kind);
        const double radius = std::sqrt(4.0 + 2.0 * beta * (n - 1));
        useq.values.resize(levels.size());
        for (std::size_t i = 0; i < levels.size(); ++i) {
            useq.values[i] = n * semicircle_cdf(levels[i] / radius);
        }
    }
    // Central window, edges discarded symmetrically.
    const auto keep = std::max<std::size_t>(
        2, static_cast<std::size_t>(config.central_fraction * n));
    const std::size_t lo = (useq.values.size() - keep) / 2;
    std::vector<double> central(useq.values.begin() + lo,
                                useq.values.begin() + lo + keep);
    // Degenerate eigenvalue collisions would violate strict monotonicity;
    // they have measure zero but are cheap to reject.
    for (std::size_t i = 0; i + 1 < central.size(); ++i) {
        if (!(central[i + 1] > central[i])) {
            throw NumericError("unfolded_sample: non-increasing levels in draw " +
                               std::to_string(draw_index));
        }
    }
    useq.values = std::move(central);
    return useq;
}

StatisticCurve mc_statistic(const McConfig& config, Statistic statistic,
                            const std::vector<double>& L_grid,
                            double window_step) {
    check_config(config, 8);
    if (L_grid.empty()) throw DomainError("mc_statistic: empty L grid");
    const auto n_samples = static_cast<std::size_t>(config.n_samples);
    std::vector<std::vector<double>> per_sample(n_samples);
    parallel_for_tasks(n_samples, config.threads, [&](std::size_t s) {
        const auto useq = unfolded_sample(config, s);
        StatisticCurve c;
        switch (statistic) {
        case Statistic::SIGMA2:
            c = spectral::number_variance(useq, L_grid, window_step);
            break;
        case Statistic::GAMMA1:
            c = spectral::skewness(useq, L_grid, window_step);
            break;
        case Statistic::GAMMA2:
            c = spectral::excess(useq, L_grid, window_step);
            break;
        }
        std::vector<double> vals(L_grid.size());
        for (std::size_t i = 0; i < L_grid.size(); ++i) {
            vals[i] = c.points[i].value;
        }
        per_sample[s] = std::move(vals);
    });

    StatisticCurve out;
    out.statistic = statistic;
    out.window_step = window_step;
    out.n_windows_per_L = n_samples;
    out.points.resize(L_grid.size());
    for (std::size_t i = 0; i < L_grid.size(); ++i) {
        double mean = 0.0;
        for (std::size_t s = 0; s < n_samples; ++s) mean += per_sample[s][i];
        mean /= static_cast<double>(n_samples);
        double var = 0.0;
        for (std::size_t s = 0; s < n_samples; ++s) {
            const double d = per_sample[s][i] - mean;
            var += d * d;
        }
        var = n_samples > 1 ? var / static_cast<double>(n_samples - 1) : 0.0;
        out.points[i].L = L_grid[i];
        out.points[i].value = mean;
        out.points[i].stderr_ = std::sqrt(var / static_cast<double>(n_samples));
    }
    return out;
}

SpacingHistogram mc_nnsd(const McConfig& config, double bin_width,
                         double s_max) {
    check_config(config, 8);
    const auto n_samples = static_cast<std::size_t>(config.n_samples);
    const auto n_bins =
        static_cast<std::size_t>(std::ceil(s_max / bin_width - 1e-9));
    std::vector<std::vector<std::uint64_t>> bins(
        n_samples, std::vector<std::uint64_t>(n_bins, 0));
    std::vector<std::uint64_t> totals(n_samples, 0);
    parallel_for_tasks(n_samples, config.threads, [&](std::size_t s) {
        const auto useq = unfolded_sample(config, s);
        const auto hist = spectral::nnsd(useq, bin_width, s_max);
        // Recover integer counts from the per-sample density.
        for (std::size_t b = 0; b < n_bins; ++b) {
            bins[s][b] = static_cast<std::uint64_t>(std::llround(
                hist.densities[b] * static_cast<double>(hist.total_spacings) *
                bin_width));
        }
        totals[s] = hist.total_spacings;
    });
    SpacingHistogram out;
    out.bin_width = bin_width;
    out.s_max = s_max;
    out.densities.assign(n_bins, 0.0);
    for (std::size_t s = 0; s < n_samples; ++s) {
        out.total_spacings += totals[s];
        for (std::size_t b = 0; b < n_bins; ++b) {
            out.densities[b] += static_cast<double>(bins[s][b]);
        }
    }
    const double norm =
        1.0 / (static_cast<double>(out.total_spacings) * bin_width);
    for (double& d : out.densities) d *= norm;
    return out;
}

void tabulate_gamma_reference(const std::string& path,
                              const TabulateOptions& opts) {
    std::ofstream outfile(path);
    if (!outfile) throw IoError("cannot write gamma reference table '" + path + "'");

    const auto grid = spectral::linear_grid(opts.l_min, opts.l_max, opts.l_step);
    outfile << "# primespec " << kVersion << " gamma reference table\n";
    outfile << "# generator: mc-tabulate dim=" << opts.dim
            << " n_samples=" << opts.n_samples << " seed=" << opts.seed
            << " window_step=" << opts.window_step
            << " central_fraction=0.5\n";
    outfile << "kind,statistic,L,value,stderr\n";
    for (EnsembleTag kind :
         {EnsembleTag::GOE, EnsembleTag::GUE, EnsembleTag::GSE}) {
        McConfig config;
        config.kind = kind;
        config.dim = opts.dim;
        config.n_samples = opts.n_samples;
        config.seed = opts.seed;
        config.threads = opts.threads;
        for (int order = 1; order <= 2; ++order) {
            const auto stat =
                order == 1 ? Statistic::GAMMA1 : Statistic::GAMMA2;
            const auto curve =
                mc_statistic(config, stat, grid, opts.window_step);
            for (const auto& pt : curve.points) {
                char buf[128];
                std::snprintf(buf, sizeof(buf), "%s,gamma%d,%.17g,%.17g,%.17g\n",
                              to_string(kind).c_str(), order, pt.L, pt.value,
                              pt.stderr_);
                outfile << buf;
            }
        }
    }
    if (!outfile.good()) {
        throw IoError("write failure on gamma reference table '" + path + "'");
    }
}

} // namespace primespec::rmt_mc
