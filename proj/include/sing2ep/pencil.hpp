#pragma once
//
// Analysis of a single matrix pencil A - lambda*B: normal rank, minimal
// bases, generic kernel, minimal reducing subspace, eigenvalues of singular
// pencils, Kronecker canonical structure and chains.
//

#include "sing2ep/matcore.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace sing2ep {

struct MatrixPencil {
    CMatrix A, B;

    MatrixPencil() = default;
    MatrixPencil(CMatrix a, CMatrix b);

    Index rows() const { return A.rows(); }
    Index cols() const { return A.cols(); }
    CMatrix eval(Complex lambda) const { return A - lambda * B; }
    MatrixPencil transposed() const { return {A.transpose(), B.transpose()}; }
    /// The pencil B - lambda*A (swaps the roles of 0 and infinity).
    MatrixPencil reversed() const { return {B, A}; }
    double scale() const;
};

enum class BlockKind { FiniteRegular, InfiniteRegular, RightSingular, LeftSingular };

/// One Kronecker block: J_d(alpha), N_d, L_d or L_d^T.
struct KroneckerBlock {
    BlockKind kind = BlockKind::FiniteRegular;
    Index size = 1;       // d; >= 1 for J/N, >= 0 for L/L^T
    Complex alpha{};      // only meaningful for FiniteRegular

    Index rows() const;
    Index cols() const;
};

struct KroneckerStructure {
    std::vector<KroneckerBlock> blocks;
    Index m = 0, n = 0;

    Index num_right_singular() const;
    Index num_left_singular() const;
    Index normal_rank() const { return n - num_right_singular(); }
    std::vector<Index> right_minimal_indices() const;  // nondecreasing
    std::vector<Index> left_minimal_indices() const;   // nondecreasing
    std::vector<Index> infinite_segre() const;         // nonincreasing
    /// Finite blocks grouped by eigenvalue (clustered at tol); each group
    /// carries a nonincreasing size list.
    std::vector<std::pair<Complex, std::vector<Index>>> finite_eigen_groups(
        double cluster_tol = 1e-6) const;

    bool tiles() const;  // block sizes sum to m x n
    static KroneckerStructure from_blocks(std::vector<KroneckerBlock> blocks);
};

/// Renders per the structure grammar: blocks joined by "+", multiplicity
/// prefix "k*", tokens J{d}({complex}), N{d}, L{d}, L{d}T.
std::string to_string(const KroneckerStructure& s);
KroneckerStructure parse_structure(std::string_view text);

/// Same block multiset; finite eigenvalues matched within eig_tol.
bool same_structure(const KroneckerStructure& a, const KroneckerStructure& b,
                    double eig_tol = 1e-6);
/// Same structure with finite eigenvalues abstracted (bundle equality).
bool same_bundle_structure(const KroneckerStructure& a, const KroneckerStructure& b);

/// Polynomial vector p(lambda) = sum coeffs[i] * lambda^i with
/// (A - lambda*B) p(lambda) identically zero.
struct MinimalBasisVector {
    std::vector<CVector> coeffs;  // p_0 .. p_d

    Index degree() const { return static_cast<Index>(coeffs.size()) - 1; }
    CVector eval(Complex lambda) const;
};

struct KroneckerChain {
    KroneckerBlock block;
    std::vector<CVector> vectors;
};

struct PencilEigenvalue {
    Complex lambda;
    Index geometric_excess = 0;  // dim ker(A - lambda0 B) - s
};

Index normal_rank(const MatrixPencil& P, Rng& rng, const Tolerances& tols = {});

std::vector<MinimalBasisVector> minimal_basis(const MatrixPencil& P,
                                              const Tolerances& tols = {});

Subspace generic_kernel(const MatrixPencil& P, Complex lambda0,
                        const Tolerances& tols = {});

Subspace minimal_reducing(const MatrixPencil& P, Rng& rng, const Tolerances& tols = {});

/// Finite eigenvalues of a square (possibly singular) pencil by twice-
/// projected QZ with intersection of the two runs.
std::vector<PencilEigenvalue> eigenvalues_regular(const MatrixPencil& P, Rng& rng,
                                                  const Tolerances& tols = {});

KroneckerStructure kcf_structure(const MatrixPencil& P, Rng& rng,
                                 const Tolerances& tols = {});

std::vector<KroneckerChain> kronecker_chains(const MatrixPencil& P,
                                             const KroneckerStructure& S,
                                             const Tolerances& tols = {});

/// Block-diagonal canonical pencil conjugated by random well-conditioned
/// transformations; kcf_structure(synth_pencil(S)) == S.
MatrixPencil synth_pencil(const KroneckerStructure& S, Rng& rng);

/// Canonical pencil of a single Kronecker block.
MatrixPencil canonical_block(const KroneckerBlock& b);

/// Lemma-style five-way eigenvalue test (conditions b..e).
struct EigenvalueEquivReport {
    bool rank_drop = false;            // rank(A - l0 B) < nrank
    bool gker_smaller = false;         // dim GKer < dim Ker at l0
    bool kernel_outside_gker = false;  // exists v in Ker, v not in GKer
    bool kernel_outside_reducing = false;  // exists v in Ker, v not in R(A,B)
    bool all_agree() const;
    bool is_eigenvalue() const { return rank_drop; }
};

EigenvalueEquivReport is_eigenvalue_equiv(const MatrixPencil& P, Complex lambda0,
                                          Rng& rng, const Tolerances& tols = {});

// internal building blocks shared with other modules

/// The k-block lower-bidiagonal Toeplitz matrix with A - alpha*B on the
/// diagonal and B on the subdiagonal, and its nullity.
CMatrix staircase_matrix(const MatrixPencil& P, Complex alpha, Index k);
Index staircase_nullity(const MatrixPencil& P, Complex alpha, Index k,
                        const Tolerances& tols);

/// Segre characteristic (nonincreasing block sizes) of the eigenvalue alpha of
/// a pencil with s right minimal indices; empty if alpha is not an eigenvalue.
std::vector<Index> segre_at(const MatrixPencil& P, Complex alpha, Index s,
                            const Tolerances& tols);

/// Finite eigenvalues of an arbitrary-shape pencil of normal rank r via two
/// independent random projections (used by kcf_structure).
std::vector<PencilEigenvalue> projected_eigenvalues(const MatrixPencil& P, Index r,
                                                    Index s, Rng& rng,
                                                    const Tolerances& tols);

} // namespace sing2ep
