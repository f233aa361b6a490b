#include "sing2ep/pencil.hpp"

#include <algorithm>

namespace sing2ep {

std::vector<Index> segre_at(const MatrixPencil& P, Complex alpha, Index s,
                            const Tolerances& tols) {
    // Weyr counts from staircase nullities: w_k = nu_k - nu_{k-1} - s.
    Index cap = std::min(P.rows(), P.cols()) + 1;
    std::vector<Index> weyr;
    Index prev = 0;
    for (Index k = 1; k <= cap; ++k) {
        Index nu = staircase_nullity(P, alpha, k, tols);
        Index w = nu - prev - s;
        prev = nu;
        if (w <= 0) break;
        if (!weyr.empty() && w > weyr.back())
            throw ToleranceAmbiguity("segre_at: non-monotone Weyr sequence at alpha");
        weyr.push_back(w);
    }
    std::vector<Index> segre;
    if (weyr.empty()) return segre;
    for (Index j = 1; j <= weyr[0]; ++j) {
        Index d = 0;
        for (Index w : weyr)
            if (w >= j) ++d;
        segre.push_back(d);
    }
    return segre;
}

KroneckerStructure kcf_structure(const MatrixPencil& P, Rng& rng,
                                 const Tolerances& tols) {
    Index m = P.rows(), n = P.cols();
    auto right = minimal_basis(P, tols);
    auto left = minimal_basis(P.transposed(), tols);
    Index s = static_cast<Index>(right.size());
    Index t = static_cast<Index>(left.size());
    Index r = n - s;
    if (m - t != r)
        throw ToleranceAmbiguity("kcf_structure: row/column normal ranks disagree (" +
                                 std::to_string(m - t) + " vs " + std::to_string(r) + ")");

    std::vector<KroneckerBlock> blocks;
    for (const auto& v : right) blocks.push_back({BlockKind::RightSingular, v.degree(), {}});
    for (const auto& v : left) blocks.push_back({BlockKind::LeftSingular, v.degree(), {}});

    for (Index d : segre_at(P.reversed(), 0.0, s, tols))
        blocks.push_back({BlockKind::InfiniteRegular, d, {}});

    for (const auto& ev : projected_eigenvalues(P, r, s, rng, tols))
        for (Index d : segre_at(P, ev.lambda, s, tols))
            blocks.push_back({BlockKind::FiniteRegular, d, ev.lambda});

    KroneckerStructure S = KroneckerStructure::from_blocks(std::move(blocks));
    if (S.m != m || S.n != n)
        throw ToleranceAmbiguity("kcf_structure: partial structure " + to_string(S) +
                                 " tiles " + std::to_string(S.m) + "x" + std::to_string(S.n) +
                                 ", pencil is " + std::to_string(m) + "x" + std::to_string(n));
    S.m = m;
    S.n = n;
    return S;
}

} // namespace sing2ep
