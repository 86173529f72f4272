#pragma once

#include <cstddef>
#include <vector>

namespace testsupport {

// Eigenvalues of a symmetric matrix (row-major n*n), ascending. Cyclic Jacobi
// rotations, independent of any linear algebra library, for cross-checking
// spectral quantities in tests.
std::vector<double> symmetric_eigenvalues(std::vector<double> s, std::size_t n);

}  // namespace testsupport
