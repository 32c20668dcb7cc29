#pragma once

#include "primespec/types.hpp"

namespace primespec::fitting {

// Least-squares fit of the Berry-Robnik mixing parameter to a number
// variance curve over l_min < L <= l_max. The single-parameter objective is
// minimized by Brent bracketing on [-0.2, 1.2] to a tolerance of 1e-6 in
// rho1. With weighted = true residuals are scaled by 1/stderr.
BRFit fit_rho1(const StatisticCurve& curve, double l_min = 0.0,
               double l_max = 5.0, bool weighted = false);

} // namespace primespec::fitting
