#include "sing2ep/tensorker.hpp"

#include <algorithm>
#include <cmath>

namespace sing2ep {

namespace {

bool close(Complex a, Complex b, double tol) {
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(a));
}

bool regular_only(const KroneckerStructure& S) {
    for (const auto& b : S.blocks)
        if (b.kind == BlockKind::RightSingular || b.kind == BlockKind::LeftSingular)
            return false;
    return true;
}

} // namespace

char pair_type(const KroneckerBlock& left, const KroneckerBlock& right, double eig_tol) {
    using K = BlockKind;
    switch (left.kind) {
        case K::FiniteRegular:
            if (right.kind == K::FiniteRegular && close(left.alpha, right.alpha, eig_tol))
                return 'a';
            if (right.kind == K::RightSingular) return 'f';
            return 0;
        case K::InfiniteRegular:
            if (right.kind == K::InfiniteRegular) return 'b';
            if (right.kind == K::RightSingular) return 'c';
            return 0;
        case K::RightSingular:
            switch (right.kind) {
                case K::InfiniteRegular: return 'd';
                case K::FiniteRegular: return 'e';
                case K::RightSingular: return 'g';
                case K::LeftSingular: return left.size < right.size ? 'h' : char(0);
            }
            return 0;
        case K::LeftSingular:
            if (right.kind == K::RightSingular && left.size > right.size) return 'i';
            return 0;
    }
    return 0;
}

Index t_dim_numeric(const MatrixPencil& P1, const MatrixPencil& P2,
                    const Tolerances& tols) {
    CMatrix D = kron(P1.A, P2.B) - kron(P1.B, P2.A);
    // cutoff floored at the operand scale: D itself can be pure cancellation
    double scale = std::max(P1.scale() * P2.scale(), 1e-300);
    auto sv = singular_values(D);
    double smax = sv.empty() ? 0.0 : sv[0];
    double tol = std::max(tols.rank_rel(D.rows(), D.cols()), tols.residual);
    double cutoff = tol * std::max(smax, scale);
    Index r = 0;
    for (double v : sv)
        if (v > cutoff) ++r;
    return D.cols() - r;
}

TensorKernelReport tensor_report(const KroneckerStructure& S1,
                                 const KroneckerStructure& S2,
                                 const Tolerances& tols) {
    if (!regular_only(S1) || !regular_only(S2))
        throw std::invalid_argument("t_dim_structural: regular-only (structure contains L or "
                                    "L^T blocks)");
    TensorKernelReport rep;
    for (const auto& b1 : S1.blocks) {
        for (const auto& b2 : S2.blocks) {
            char t = pair_type(b1, b2, tols.cluster);
            if (t != 'a' && t != 'b') continue;
            Index d = std::min(b1.size, b2.size);
            rep.contributions.push_back({b1, b2, t, d});
            rep.total_dim += d;
        }
    }
    return rep;
}

Index t_dim_structural(const KroneckerStructure& S1, const KroneckerStructure& S2,
                       const Tolerances& tols) {
    return tensor_report(S1, S2, tols).total_dim;
}

Subspace kernel_basis_regular(const MatrixPencil& P1, const MatrixPencil& P2,
                              const std::vector<KroneckerChain>& chains1,
                              const std::vector<KroneckerChain>& chains2,
                              const Tolerances& tols) {
    for (const auto* cs : {&chains1, &chains2})
        for (const auto& c : *cs)
            if (c.block.kind == BlockKind::RightSingular ||
                c.block.kind == BlockKind::LeftSingular)
                throw std::invalid_argument("kernel_basis_regular: regular-only");
    Index ambient = P1.cols() * P2.cols();
    std::vector<CVector> zs;
    for (const auto& c1 : chains1) {
        for (const auto& c2 : chains2) {
            char t = pair_type(c1.block, c2.block, tols.cluster);
            if (t != 'a' && t != 'b') continue;
            Index d = std::min(c1.block.size, c2.block.size);
            for (Index j = 1; j <= d; ++j) {
                CVector z = CVector::Zero(ambient);
                for (Index i = 1; i <= j; ++i)
                    z += kron(c1.vectors[i - 1], c2.vectors[j - i]);
                zs.push_back(z);
            }
        }
    }
    CMatrix span(ambient, static_cast<Index>(zs.size()));
    for (size_t i = 0; i < zs.size(); ++i) span.col(i) = zs[i];
    return Subspace::from_span(span, tols.subspace);
}

} // namespace sing2ep
