#include "primespec/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "primespec/errors.hpp"

namespace primespec {

GaussLegendreRule::GaussLegendreRule(int n) {
    nodes.resize(n);
    weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-like initial guess for the i-th root of P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Evaluate P_n(x) and P'_n(x) by the three-term recurrence.
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

namespace {

const GaussLegendreRule& panel_rule() {
    static const GaussLegendreRule rule(12);
    return rule;
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double whole, double eps, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = panel_rule().apply(f, a, mid);
    const double right = panel_rule().apply(f, mid, b);
    const double err = std::abs(left + right - whole);
    if (err <= eps || depth >= 60) {
        if (depth >= 60 && err > 1e3 * eps) {
            throw NumericError("quadrature failed to converge on interval");
        }
        return left + right;
    }
    return adapt(f, a, mid, left, 0.5 * eps, depth + 1) +
           adapt(f, mid, b, right, 0.5 * eps, depth + 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_floor) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    const double whole = panel_rule().apply(f, a, b);
    const double eps = std::max(rel_tol * std::abs(whole), abs_floor);
    return sign * adapt(f, a, b, whole, eps, 0);
}

double sine_integral(double x) {
    if (x == 0.0) return 0.0;
    const double ax = std::abs(x);
    // Integrand sin(t)/t extended continuously to t = 0.
    auto f = [](double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; };
    // Split at period boundaries so each panel sees at most one oscillation.
    const double period = 2.0 * std::numbers::pi;
    double sum = 0.0;
    double lo = 0.0;
    while (lo < ax) {
        const double hi = std::min(lo + period, ax);
        sum += integrate(f, lo, hi, 1e-13, 1e-16);
        lo = hi;
    }
    return x > 0 ? sum : -sum;
}

} // namespace primespec
