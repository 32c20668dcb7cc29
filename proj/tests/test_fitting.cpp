#include <doctest.h>

#include <cmath>

#include "primespec/ensembles.hpp"
#include "primespec/errors.hpp"
#include "primespec/fitting.hpp"
#include "primespec/spectral.hpp"

using namespace primespec;

namespace {

StatisticCurve synthetic_br_curve(double rho1, double stderr_ = 0.0) {
    StatisticCurve curve;
    curve.statistic = Statistic::SIGMA2;
    for (double L : spectral::standard_fit_grid()) {
        curve.points.push_back({L, ensembles::sigma2_br(L, rho1), stderr_});
    }
    return curve;
}

} // namespace

TEST_CASE("round-trip recovery of rho1 from noiseless synthetic curves") {
    for (double rho1 : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const auto fit = fitting::fit_rho1(synthetic_br_curve(rho1));
        CHECK(std::abs(fit.rho1 - rho1) < 1e-4);
        CHECK(fit.rss < 1e-8);
        CHECK(fit.n_points == 50);
        CHECK_FALSE(fit.weighted);
    }
}

TEST_CASE("pure Poisson curve fits to rho1 = 1") {
    StatisticCurve curve;
    curve.statistic = Statistic::SIGMA2;
    for (double L : spectral::standard_fit_grid()) {
        curve.points.push_back({L, L, 0.0});
    }
    const auto fit = fitting::fit_rho1(curve);
    CHECK(std::abs(fit.rho1 - 1.0) < 1e-3);
}

TEST_CASE("objective is unimodal over the search interval for synthetic "
          "input") {
    const auto curve = synthetic_br_curve(0.4);
    auto rss = [&](double rho) {
        double acc = 0.0;
        for (const auto& pt : curve.points) {
            const double r = pt.value - ensembles::sigma2_br(pt.L, rho);
            acc += r * r;
        }
        return acc;
    };
    // Scan at resolution 0.01: strictly decreasing then strictly increasing.
    int sign_changes = 0;
    double prev = rss(-0.2);
    bool increasing = false;
    for (double rho = -0.19; rho <= 1.2001; rho += 0.01) {
        const double v = rss(rho);
        if (!increasing && v > prev + 1e-15) {
            increasing = true;
            ++sign_changes;
        }
        if (increasing) CHECK(v >= prev - 1e-12);
        prev = v;
    }
    CHECK(sign_changes == 1);
}

TEST_CASE("fit range filtering and failure modes") {
    const auto curve = synthetic_br_curve(0.3);
    const auto fit = fitting::fit_rho1(curve, 1.0, 4.0);
    CHECK(fit.n_points == 30);
    CHECK(fit.fit_l_min == 1.0);
    CHECK(fit.fit_l_max == 4.0);
    CHECK(std::abs(fit.rho1 - 0.3) < 1e-4);

    CHECK_THROWS_AS(fitting::fit_rho1(curve, 4.5, 5.0), InsufficientDataError);
    CHECK_THROWS_AS(fitting::fit_rho1(curve, 3.0, 1.0), DomainError);

    StatisticCurve wrong;
    wrong.statistic = Statistic::GAMMA1;
    wrong.points = curve.points;
    CHECK_THROWS_AS(fitting::fit_rho1(wrong), DomainError);
}

TEST_CASE("boundary minimizers raise the warning flag") {
    // Data well above any admissible model pushes rho1 to the upper bound.
    StatisticCurve steep;
    steep.statistic = Statistic::SIGMA2;
    for (double L : spectral::standard_fit_grid()) {
        steep.points.push_back({L, 2.5 * L, 0.0});
    }
    const auto fit = fitting::fit_rho1(steep);
    CHECK(fit.boundary_warning);
    CHECK(fit.rho1 > 1.19);
}

TEST_CASE("weighted fits agree with unweighted under uniform errors and "
          "respond to weights otherwise") {
    const auto uniform = synthetic_br_curve(0.6, 0.05);
    const auto fu = fitting::fit_rho1(uniform, 0.0, 5.0, true);
    CHECK(fu.weighted);
    CHECK(std::abs(fu.rho1 - 0.6) < 1e-4);

    // Corrupt the large-L half but down-weight it; the weighted fit should
    // stay near the clean value while the unweighted fit is dragged away.
    auto corrupted = synthetic_br_curve(0.6, 0.01);
    for (auto& pt : corrupted.points) {
        if (pt.L > 2.5) {
            pt.value += 1.0;
            pt.stderr_ = 10.0;
        }
    }
    const auto fw = fitting::fit_rho1(corrupted, 0.0, 5.0, true);
    const auto fnw = fitting::fit_rho1(corrupted, 0.0, 5.0, false);
    CHECK(std::abs(fw.rho1 - 0.6) < 0.02);
    CHECK(std::abs(fnw.rho1 - 0.6) > 0.05);
}
