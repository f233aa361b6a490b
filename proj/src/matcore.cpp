#include "sing2ep/matcore.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

namespace sing2ep {

double Tolerances::rank_rel(Index m, Index n) const {
    if (rank > 0.0) return rank;
    return static_cast<double>(std::max(m, n)) * std::numeric_limits<double>::epsilon();
}

Subspace::Subspace(Index ambient_dim, CMatrix b, double t)
    : ambient(ambient_dim), basis(std::move(b)), tol(t) {
    if (basis.rows() != ambient)
        throw std::invalid_argument("Subspace: basis rows != ambient dimension");
}

bool Subspace::contains(const CVector& v) const {
    double nv = v.norm();
    if (nv == 0.0) throw std::invalid_argument("Subspace::contains: zero vector");
    return reject(v).norm() <= tol * nv;
}

CVector Subspace::reject(const CVector& v) const {
    if (dim() == 0) return v;
    return v - basis * (basis.adjoint() * v);
}

Subspace Subspace::zero(Index ambient_dim, double tol) {
    return Subspace(ambient_dim, CMatrix(ambient_dim, 0), tol);
}

Subspace Subspace::from_span(const CMatrix& span, double tol) {
    if (span.cols() == 0) return Subspace::zero(span.rows(), tol);
    Eigen::JacobiSVD<CMatrix> svd(span, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv(0) : 0.0;
    Index r = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * smax) ++r;
    if (smax == 0.0) r = 0;
    return Subspace(span.rows(), svd.matrixU().leftCols(r), tol);
}

CMatrix kron(const CMatrix& A, const CMatrix& B) {
    CMatrix K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Index i = 0; i < A.rows(); ++i)
        for (Index j = 0; j < A.cols(); ++j)
            K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

std::vector<double> singular_values(const CMatrix& M) {
    if (M.rows() == 0 || M.cols() == 0) return {};
    Eigen::JacobiSVD<CMatrix> svd(M);
    const auto& sv = svd.singularValues();
    return std::vector<double>(sv.data(), sv.data() + sv.size());
}

Index rank_tol(const CMatrix& M, double tol) {
    if (tol < 0.0) throw std::invalid_argument("rank_tol: negative tolerance");
    auto sv = singular_values(M);
    if (sv.empty() || sv[0] == 0.0) return 0;
    Index r = 0;
    for (double s : sv)
        if (s > tol * sv[0]) ++r;
    return r;
}

Index rank_tol(const CMatrix& M, const Tolerances& tols) {
    return rank_tol(M, tols.rank_rel(M.rows(), M.cols()));
}

Subspace nullspace(const CMatrix& M, double tol) {
    if (M.cols() == 0) return Subspace::zero(0);
    if (M.rows() == 0) return Subspace(M.cols(), CMatrix::Identity(M.cols(), M.cols()));
    Eigen::JacobiSVD<CMatrix> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double smax = sv(0);
    Index r = 0;
    if (smax > 0.0)
        for (Index i = 0; i < sv.size(); ++i)
            if (sv(i) > tol * smax) ++r;
    return Subspace(M.cols(), svd.matrixV().rightCols(M.cols() - r));
}

Subspace nullspace(const CMatrix& M, const Tolerances& tols) {
    return nullspace(M, tols.rank_rel(M.rows(), M.cols()));
}

Subspace subspace_union(const std::vector<Subspace>& parts) {
    if (parts.empty()) throw std::invalid_argument("subspace_union: empty input");
    Index ambient = parts.front().ambient;
    Index total = 0;
    double tol = 0.0;
    for (const auto& s : parts) {
        if (s.ambient != ambient)
            throw std::invalid_argument("subspace_union: ambient dimension mismatch");
        total += s.dim();
        tol = std::max(tol, s.tol);
    }
    CMatrix stacked(ambient, total);
    Index c = 0;
    for (const auto& s : parts) {
        stacked.middleCols(c, s.dim()) = s.basis;
        c += s.dim();
    }
    return Subspace::from_span(stacked, tol);
}

Subspace subspace_intersect(const Subspace& S1, const Subspace& S2) {
    if (S1.ambient != S2.ambient)
        throw std::invalid_argument("subspace_intersect: ambient dimension mismatch");
    double tol = std::max(S1.tol, S2.tol);
    if (S1.dim() == 0 || S2.dim() == 0) return Subspace::zero(S1.ambient, tol);
    Eigen::JacobiSVD<CMatrix> svd(S1.basis.adjoint() * S2.basis, Eigen::ComputeFullU);
    const auto& cosines = svd.singularValues();
    Index k = 0;
    for (Index i = 0; i < cosines.size(); ++i)
        if (cosines(i) >= 1.0 - tol) ++k;
    if (k == 0) return Subspace::zero(S1.ambient, tol);
    return Subspace::from_span(S1.basis * svd.matrixU().leftCols(k), tol);
}

Complex random_unit_complex(Rng& rng) {
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    double a = ang(rng);
    return Complex(std::cos(a), std::sin(a));
}

CVector random_cvector(Index n, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
    return v;
}

CMatrix random_cmatrix(Index rows, Index cols, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMatrix M(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) M(i, j) = Complex(g(rng), g(rng));
    return M;
}

CMatrix random_orthonormal(Index rows, Index cols, Rng& rng) {
    CMatrix G = random_cmatrix(rows, cols, rng);
    Eigen::HouseholderQR<CMatrix> qr(G);
    CMatrix Q = qr.householderQ() * CMatrix::Identity(rows, cols);
    return Q;
}

CMatrix random_well_conditioned(Index n, Rng& rng, double cond_bound) {
    if (n == 0) return CMatrix(0, 0);
    CMatrix U = random_orthonormal(n, n, rng);
    CMatrix V = random_orthonormal(n, n, rng);
    std::uniform_real_distribution<double> s(1.0, std::sqrt(cond_bound));
    Eigen::VectorXd sig(n);
    for (Index i = 0; i < n; ++i) sig(i) = s(rng);
    return U * sig.asDiagonal() * V.adjoint();
}

} // namespace sing2ep
