#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace primespec {

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
// computed once by Newton iteration on the Legendre polynomial.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendreRule(int n);

    template <typename F>
    double apply(F&& f, double a, double b) const {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            sum += weights[i] * f(mid + half * nodes[i]);
        }
        return half * sum;
    }
};

// Adaptive bisection integrator. Each interval is accepted when the 12-point
// Gauss-Legendre estimate agrees with the sum over its two halves; tolerance
// is relative to the running whole-interval estimate with an absolute floor.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, double abs_floor = 1e-300);

// Sine integral Si(x) = int_0^x sin(t)/t dt, by quadrature. Accurate to
// ~1e-12 for |x| up to a few hundred.
double sine_integral(double x);

} // namespace primespec
