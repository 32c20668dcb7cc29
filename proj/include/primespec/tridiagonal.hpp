#pragma once

#include <vector>

namespace primespec {

// All eigenvalues of the symmetric tridiagonal matrix with the given
// diagonal (size n) and off-diagonal (size n - 1), by the implicit-shift QL
// algorithm without eigenvector accumulation. Returns them sorted ascending.
// Throws NumericError if any eigenvalue fails to converge within the
// iteration bound.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag,
                                            std::vector<double> off);

} // namespace primespec
