#pragma once

#include "sing2ep/matcore.hpp"

namespace sing2ep {

/// Generalized eigenvalues of the square pencil A - lambda*B via LAPACK zggev.
/// Returns (alpha, beta) pairs; lambda = alpha/beta, infinite when beta ~ 0.
std::vector<std::pair<Complex, Complex>> generalized_eigenvalues(const CMatrix& A,
                                                                 const CMatrix& B);

} // namespace sing2ep
