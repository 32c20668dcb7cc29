#pragma once

#include <string>

#include "primespec/types.hpp"

namespace primespec::ensembles {

// Reference nearest-neighbor spacing density at s >= 0. GOE/GUE/GSE use the
// Wigner surmises; BERRY_ROBNIK mixes a Poisson and a GOE sequence with
// Poisson fraction kind.rho1.
double spacing_pdf(const EnsembleKind& kind, double s);

// Two-level cluster function Y2(r) for the pure ensembles, r >= 0.
double cluster_y2(EnsembleTag kind, double r);

// Sigma^2(L) = L - 2 * int_0^L (L - r) Y2(r) dr. Values come from a cached
// grid (spacing 0.05, cubic interpolation) built on first use; arguments
// beyond the cache fall back to direct quadrature.
double sigma2_theory(EnsembleTag kind, double L);

// Same quantity evaluated by direct quadrature, bypassing the cache.
double sigma2_theory_direct(EnsembleTag kind, double L);

// Berry-Robnik number variance: rho1*L + Sigma2_GOE((1-rho1)*L). Slightly
// out-of-range rho1 is admitted: the Poisson term extends linearly and the
// GOE argument clamps at zero.
double sigma2_br(double L, double rho1);

// Skewness (order 1) or excess (order 2) reference value. Poisson is
// analytic; GOE/GUE/GSE come from the Monte Carlo reference table with its
// sampling error attached.
ValueWithError gamma_theory(EnsembleTag kind, double L, int order);

// Overrides the reference-table location; must be called before the first
// gamma_theory lookup of a random-matrix ensemble. Falls back to the
// PRIMESPEC_GAMMA_REFERENCE environment variable, then the path compiled in
// from the source tree.
void set_gamma_reference_path(const std::string& path);

// Tabulated L range of the gamma reference table.
std::pair<double, double> gamma_reference_range();

} // namespace primespec::ensembles
