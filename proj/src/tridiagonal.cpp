#include "primespec/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "primespec/errors.hpp"

namespace primespec {

std::vector<double> tridiagonal_eigenvalues(std::vector<double> d,
                                            std::vector<double> off) {
    const std::size_t n = d.size();
    if (n == 0) return {};
    if (off.size() + 1 != n) {
        throw DomainError("tridiagonal_eigenvalues: off-diagonal size must be n - 1");
    }
    std::vector<double> e(off);
    e.push_back(0.0); // sentinel

    constexpr int kMaxIter = 50;
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            // Look for a negligible off-diagonal element to split at.
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-15 * dd) break;
            }
            if (m != l) {
                if (iter++ == kMaxIter) {
                    throw NumericError(
                        "tridiagonal_eigenvalues: no convergence at index " +
                        std::to_string(l));
                }
                // Wilkinson-style shift from the leading 2x2 block.
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        // Rotation annihilated early; deflate and restart.
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

} // namespace primespec
