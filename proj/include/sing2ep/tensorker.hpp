#pragma once
//
// Kernel of the tensor operator Delta = A (x) D - B (x) C built from the
// pencils A - lambda*B and C - mu*D: structural dimension prediction from
// Kronecker data, explicit basis for regular-block pairs, numerical kernel
// as the general fallback.
//

#include "sing2ep/pencil.hpp"

namespace sing2ep {

/// Admissible block-pair types; 'a'..'i'. Only a) and b) carry a structural
/// dimension here; the rest are recognized but resolved numerically.
char pair_type(const KroneckerBlock& left, const KroneckerBlock& right,
               double eig_tol = 1e-6);

struct PairContribution {
    KroneckerBlock left_block;
    KroneckerBlock right_block;
    char type = 0;   // pair type 'a'..'i'
    Index dim = 0;   // contributed kernel dimension (types a, b only)
};

struct TensorKernelReport {
    Index total_dim = 0;
    std::vector<PairContribution> contributions;
    std::optional<Subspace> basis;
};

/// Nullity of A (x) D - B (x) C at the standard tolerance.
Index t_dim_numeric(const MatrixPencil& P1, const MatrixPencil& P2,
                    const Tolerances& tols = {});

/// Sum over common finite eigenvalues of the double min-sum of the two Segre
/// characteristics, plus the same for the infinite parts. Regular-only.
Index t_dim_structural(const KroneckerStructure& S1, const KroneckerStructure& S2,
                       const Tolerances& tols = {});

/// Same as t_dim_structural but itemized per block pair.
TensorKernelReport tensor_report(const KroneckerStructure& S1,
                                 const KroneckerStructure& S2,
                                 const Tolerances& tols = {});

/// Explicit kernel basis z_j = sum_i u_i (x) v_{j+1-i} over matched regular
/// block pairs; spans the numerical nullspace of A (x) D - B (x) C.
Subspace kernel_basis_regular(const MatrixPencil& P1, const MatrixPencil& P2,
                              const std::vector<KroneckerChain>& chains1,
                              const std::vector<KroneckerChain>& chains2,
                              const Tolerances& tols = {});

} // namespace sing2ep
