#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "primespec/errors.hpp"
#include "primespec/rmt_mc.hpp"
#include "primespec/spectral.hpp"
#include "primespec/tridiagonal.hpp"

using namespace primespec;

TEST_CASE("tridiagonal eigensolver reproduces the free-chain spectrum") {
    // diag 0, off-diag 1: eigenvalues 2 cos(k pi / (n+1)).
    const int n = 50;
    std::vector<double> diag(n, 0.0), off(n - 1, 1.0);
    const auto ev = tridiagonal_eigenvalues(diag, off);
    REQUIRE(ev.size() == static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double expected =
            2.0 * std::cos((n - k) * std::numbers::pi / (n + 1));
        CHECK(ev[k] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("tridiagonal eigensolver handles 1x1, 2x2 and diagonal input") {
    CHECK(tridiagonal_eigenvalues({3.5}, {}) == std::vector<double>{3.5});
    const auto ev = tridiagonal_eigenvalues({1.0, 2.0}, {0.5});
    // Analytic: mean +- sqrt(((d1-d2)/2)^2 + e^2)
    const double mid = 1.5, rad = std::sqrt(0.25 + 0.25);
    CHECK(ev[0] == doctest::Approx(mid - rad));
    CHECK(ev[1] == doctest::Approx(mid + rad));
    const auto diag_only = tridiagonal_eigenvalues({5, -1, 2}, {0, 0});
    CHECK(diag_only == std::vector<double>{-1, 2, 5});
    CHECK_THROWS_AS(tridiagonal_eigenvalues({1, 2}, {1, 2, 3}), DomainError);
}

TEST_CASE("sample_spectrum is sorted and deterministic") {
    rmt_mc::McConfig config;
    config.kind = EnsembleTag::GOE;
    config.dim = 8;
    const auto a = rmt_mc::sample_spectrum(config, 3);
    const auto b = rmt_mc::sample_spectrum(config, 3);
    CHECK(a == b);
    CHECK(std::is_sorted(a.begin(), a.end()));
    const auto c = rmt_mc::sample_spectrum(config, 4);
    CHECK(a != c);
}

TEST_CASE("config validation") {
    rmt_mc::McConfig config;
    config.dim = 1;
    CHECK_THROWS_AS(rmt_mc::sample_spectrum(config, 0), DomainError);
    config.dim = 4;
    CHECK_THROWS_AS(rmt_mc::unfolded_sample(config, 0), DomainError);
    config.dim = 100;
    config.central_fraction = 0.0;
    CHECK_THROWS_AS(rmt_mc::unfolded_sample(config, 0), DomainError);
}

TEST_CASE("2x2 GOE gap distribution matches the Wigner surmise (quick)") {
    rmt_mc::McConfig config;
    config.kind = EnsembleTag::GOE;
    config.dim = 2;
    config.seed = 8675309;
    const int draws = 20000;
    std::vector<double> gaps(draws);
    double mean = 0.0;
    for (int i = 0; i < draws; ++i) {
        const auto ev = rmt_mc::sample_spectrum(config, i);
        gaps[i] = ev[1] - ev[0];
        mean += gaps[i];
    }
    mean /= draws;
    for (auto& g : gaps) g /= mean;
    std::sort(gaps.begin(), gaps.end());
    const double ks = oracles::ks_distance(gaps, [](double s) {
        return 1.0 - std::exp(-0.25 * std::numbers::pi * s * s);
    });
    CHECK(ks < 0.02);
}

TEST_CASE("unfolded samples have near-unit density in the bulk") {
    rmt_mc::McConfig config;
    config.kind = EnsembleTag::GUE;
    config.dim = 400;
    const auto u = rmt_mc::unfolded_sample(config, 11);
    CHECK(u.values.size() == 200); // central fraction 0.5
    const double mean_spacing = u.span() / (u.values.size() - 1);
    CHECK(std::abs(mean_spacing - 1.0) < 0.1);
}

TEST_CASE("Poisson harness kind gives sigma2 close to L") {
    rmt_mc::McConfig config;
    config.kind = EnsembleTag::POISSON;
    config.dim = 500;
    config.n_samples = 100;
    config.seed = 2222;
    const auto curve =
        rmt_mc::mc_statistic(config, Statistic::SIGMA2, {1.0, 2.0, 4.0}, 0.25);
    for (const auto& pt : curve.points) {
        CHECK(std::abs(pt.value - pt.L) < 4.0 * pt.stderr_);
    }
}

TEST_CASE("mc_statistic is bitwise independent of worker count") {
    rmt_mc::McConfig serial;
    serial.kind = EnsembleTag::GOE;
    serial.dim = 60;
    serial.n_samples = 40;
    serial.threads = 1;
    auto parallel = serial;
    parallel.threads = 4;
    const auto grid = spectral::linear_grid(0.5, 2.0, 0.5);
    const auto a = rmt_mc::mc_statistic(serial, Statistic::GAMMA1, grid, 0.25);
    const auto b = rmt_mc::mc_statistic(parallel, Statistic::GAMMA1, grid, 0.25);
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].value == b.points[i].value);
        CHECK(a.points[i].stderr_ == b.points[i].stderr_);
    }
}

TEST_CASE("doubling the sample count shrinks errors by about sqrt(2)") {
    rmt_mc::McConfig half;
    half.kind = EnsembleTag::GOE;
    half.dim = 100;
    half.n_samples = 150;
    half.seed = 13;
    auto full = half;
    full.n_samples = 300;
    const auto grid = spectral::linear_grid(1.0, 4.0, 1.0);
    const auto a = rmt_mc::mc_statistic(half, Statistic::SIGMA2, grid, 0.25);
    const auto b = rmt_mc::mc_statistic(full, Statistic::SIGMA2, grid, 0.25);
    double ratio_sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        ratio_sum += a.points[i].stderr_ / b.points[i].stderr_;
    }
    const double mean_ratio = ratio_sum / grid.size();
    CHECK(mean_ratio > std::sqrt(2.0) * 0.8);
    CHECK(mean_ratio < std::sqrt(2.0) * 1.2);
}

TEST_CASE("dim-100 GOE spacing histogram stays KS-close to the Wigner "
          "surmise") {
    rmt_mc::McConfig config;
    config.kind = EnsembleTag::GOE;
    config.dim = 100;
    config.n_samples = 200;
    config.seed = 31337;
    const auto hist = rmt_mc::mc_nnsd(config, 0.05, 5.0);
    double cdf = 0.0, ks = 0.0;
    for (std::size_t i = 0; i < hist.bins(); ++i) {
        cdf += hist.densities[i] * hist.bin_width;
        const double s = hist.bin_right(i);
        const double surmise = 1.0 - std::exp(-0.25 * std::numbers::pi * s * s);
        ks = std::max(ks, std::abs(cdf - surmise));
    }
    CHECK(ks < 0.05);
}

TEST_CASE("GSE spacing histogram peaks near the surmise maximum") {
    rmt_mc::McConfig config;
    config.kind = EnsembleTag::GSE;
    config.dim = 100;
    config.n_samples = 300;
    config.seed = 4242;
    const auto hist = rmt_mc::mc_nnsd(config, 0.1, 4.0);
    std::size_t mode = 0;
    for (std::size_t i = 1; i < hist.bins(); ++i) {
        if (hist.densities[i] > hist.densities[mode]) mode = i;
    }
    // Surmise maximum at sqrt(9 pi / 32) ~ 0.94; allow one bin of slack.
    const double s_star = std::sqrt(9.0 * std::numbers::pi / 32.0);
    CHECK(hist.bin_left(mode) > s_star - 0.15);
    CHECK(hist.bin_right(mode) < s_star + 0.25);
}

TEST_CASE("mc gamma estimates are reproducible across seeds within errors") {
    rmt_mc::McConfig a;
    a.kind = EnsembleTag::GOE;
    a.dim = 100;
    a.n_samples = 200;
    a.seed = 1001;
    auto b = a;
    b.seed = 2002;
    const auto ca = rmt_mc::mc_statistic(a, Statistic::GAMMA1, {1.0}, 0.25);
    const auto cb = rmt_mc::mc_statistic(b, Statistic::GAMMA1, {1.0}, 0.25);
    const double combined = std::hypot(ca.points[0].stderr_, cb.points[0].stderr_);
    CHECK(std::abs(ca.points[0].value - cb.points[0].value) < 3.0 * combined);
}
