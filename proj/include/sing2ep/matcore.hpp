#pragma once
//
// Dense complex matrix primitives and tolerance-aware subspace algebra.
// Everything in here is deterministic given the caller's generator state.
//

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

namespace sing2ep {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index   = Eigen::Index;
using Rng     = std::mt19937_64;

/// Raised when a rank/tolerance decision cannot be made consistently.
struct ToleranceAmbiguity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Tolerance policy threaded through all modules.
struct Tolerances {
    double rank = 0.0;           ///< relative rank cutoff; 0 = max(m,n)*eps
    double subspace = 1e-8;      ///< containment / principal-angle threshold
    double residual = 1e-8;      ///< recurrence and eigenvector residuals
    double cluster = 1e-6;       ///< eigenvalue matching across runs
    double common_factor = 1e-6; ///< common-factor annihilation test
    double neighbourhood = 1e-3; ///< probe radius for local rank comparisons

    /// Effective relative rank cutoff for an m x n matrix.
    double rank_rel(Index m, Index n) const;
};

/// Orthonormal basis of a subspace of C^ambient; columns of `basis`.
struct Subspace {
    Index ambient = 0;
    CMatrix basis;   // ambient x dim, orthonormal columns
    double tol = 1e-8;

    Subspace() = default;
    Subspace(Index ambient_dim, CMatrix b, double t = 1e-8);

    Index dim() const { return basis.cols(); }

    /// true iff ||v - S S^H v|| <= tol * ||v||; throws on a zero vector.
    bool contains(const CVector& v) const;

    /// Component of v orthogonal to the subspace.
    CVector reject(const CVector& v) const;

    static Subspace zero(Index ambient_dim, double tol = 1e-8);
    /// Orthonormalizes the columns of `span` (rank-revealing) at `tol`.
    static Subspace from_span(const CMatrix& span, double tol = 1e-8);
};

CMatrix kron(const CMatrix& A, const CMatrix& B);

/// Number of singular values > tol * sigma_max (0 for the zero matrix).
Index rank_tol(const CMatrix& M, double tol);
Index rank_tol(const CMatrix& M, const Tolerances& tols);

std::vector<double> singular_values(const CMatrix& M);

/// Orthonormal basis of the right kernel at relative tolerance `tol`.
Subspace nullspace(const CMatrix& M, double tol);
Subspace nullspace(const CMatrix& M, const Tolerances& tols = {});

Subspace subspace_union(const std::vector<Subspace>& parts);

/// Intersection via principal angles (SVD of S1^H S2), cos(theta) >= 1 - tol.
Subspace subspace_intersect(const Subspace& S1, const Subspace& S2);

// -- randomness helpers (all randomness flows from the caller's rng) --

Complex random_unit_complex(Rng& rng);
CVector random_cvector(Index n, Rng& rng);
CMatrix random_cmatrix(Index rows, Index cols, Rng& rng);
/// Random square matrix with condition number <= cond_bound.
CMatrix random_well_conditioned(Index n, Rng& rng, double cond_bound = 100.0);
/// Thin orthonormal columns, rows x cols.
CMatrix random_orthonormal(Index rows, Index cols, Rng& rng);

} // namespace sing2ep
