#include "zggev.hpp"

#include <lapacke.h>

namespace sing2ep {

std::vector<std::pair<Complex, Complex>> generalized_eigenvalues(const CMatrix& A,
                                                                 const CMatrix& B) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        throw std::invalid_argument("generalized_eigenvalues: square pencil required");
    lapack_int n = static_cast<lapack_int>(A.rows());
    if (n == 0) return {};

    // zggev overwrites its inputs
    CMatrix Aw = A, Bw = B;
    std::vector<Complex> alpha(n), beta(n);
    lapack_int info = LAPACKE_zggev(
        LAPACK_COL_MAJOR, 'N', 'N', n,
        reinterpret_cast<lapack_complex_double*>(Aw.data()), n,
        reinterpret_cast<lapack_complex_double*>(Bw.data()), n,
        reinterpret_cast<lapack_complex_double*>(alpha.data()),
        reinterpret_cast<lapack_complex_double*>(beta.data()),
        nullptr, 1, nullptr, 1);
    if (info != 0)
        throw std::runtime_error("zggev failed with info=" + std::to_string(info));

    std::vector<std::pair<Complex, Complex>> out(n);
    for (lapack_int i = 0; i < n; ++i) out[i] = {alpha[i], beta[i]};
    return out;
}

} // namespace sing2ep
