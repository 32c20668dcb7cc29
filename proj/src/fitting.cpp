#include "primespec/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "primespec/ensembles.hpp"
#include "primespec/errors.hpp"

namespace primespec::fitting {

namespace {

constexpr double kRhoLo = -0.2;
constexpr double kRhoHi = 1.2;
constexpr double kRhoTol = 1e-6;

// Brent's parabolic/golden-section minimizer on [a, b].
double brent_minimize(const std::function<double(double)>& f, double a,
                      double b, double tol, int max_iter = 200) {
    const double golden = 0.3819660112501051;
    double x = a + golden * (b - a);
    double w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    for (int iter = 0; iter < max_iter; ++iter) {
        const double xm = 0.5 * (a + b);
        const double tol1 = tol * std::abs(x) + 1e-12;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) break;
        bool use_golden = true;
        if (std::abs(e) > tol1) {
            // Parabola through x, v, w.
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double e_old = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_old) && p > q * (a - x) &&
                p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) {
                    d = std::copysign(tol1, xm - x);
                }
                use_golden = false;
            }
        }
        if (use_golden) {
            e = (x >= xm) ? a - x : b - x;
            d = golden * e;
        }
        const double u =
            std::abs(d) >= tol1 ? x + d : x + std::copysign(tol1, d);
        const double fu = f(u);
        if (fu <= fx) {
            if (u >= x) a = x; else b = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return x;
}

} // namespace

BRFit fit_rho1(const StatisticCurve& curve, double l_min, double l_max,
               bool weighted) {
    if (curve.statistic != Statistic::SIGMA2) {
        throw DomainError("fit_rho1: curve must be a number variance curve");
    }
    if (!(l_min < l_max)) throw DomainError("fit_rho1: need l_min < l_max");

    std::vector<CurvePoint> pts;
    for (const auto& pt : curve.points) {
        if (pt.L > l_min && pt.L <= l_max) pts.push_back(pt);
    }
    if (pts.size() < 10) {
        throw InsufficientDataError(
            "fit_rho1: need at least 10 points in (" + std::to_string(l_min) +
            ", " + std::to_string(l_max) + "], got " +
            std::to_string(pts.size()));
    }

    // With weighting, zero standard errors get a floor so single points
    // cannot dominate the objective.
    double sigma_floor = 0.0;
    if (weighted) {
        double min_pos = 1e300;
        for (const auto& pt : pts) {
            if (pt.stderr_ > 0.0) min_pos = std::min(min_pos, pt.stderr_);
        }
        sigma_floor = min_pos < 1e300 ? min_pos : 1.0;
    }

    auto objective = [&](double rho) {
        double rss = 0.0;
        for (const auto& pt : pts) {
            double r = pt.value - ensembles::sigma2_br(pt.L, rho);
            if (weighted) r /= std::max(pt.stderr_, sigma_floor);
            rss += r * r;
        }
        return rss;
    };

    BRFit fit;
    fit.rho1 = brent_minimize(objective, kRhoLo, kRhoHi, kRhoTol);
    fit.rss = objective(fit.rho1);
    fit.fit_l_min = l_min;
    fit.fit_l_max = l_max;
    fit.n_points = pts.size();
    fit.weighted = weighted;
    fit.boundary_warning = (fit.rho1 - kRhoLo < 4.0 * kRhoTol) ||
                           (kRhoHi - fit.rho1 < 4.0 * kRhoTol);
    return fit;
}

} // namespace primespec::fitting
