#include "sing2ep/pencil.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace sing2ep {

namespace {

double loose_rank_tol(const MatrixPencil& P, Index k, const Tolerances& tols) {
    return std::max(tols.rank_rel(k * P.rows(), k * P.cols()), tols.residual);
}

// Kernel of a staircase matrix with the cutoff floored at the pencil scale:
// when a rank collapse leaves the whole block tiny, a cutoff relative to its
// own largest singular value would miss the kernel entirely.
Subspace staircase_kernel(const CMatrix& T, double tol, double scale_floor) {
    Eigen::JacobiSVD<CMatrix> svd(T, Eigen::ComputeFullV);
    double smax = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
    double cutoff = tol * std::max(smax, scale_floor);
    Index r = 0;
    for (Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > cutoff) ++r;
    return Subspace(T.cols(), svd.matrixV().rightCols(T.cols() - r));
}

// Taylor coefficients of p(alpha + t): c_j = sum_i binom(i, j) alpha^(i-j) p_i.
// They satisfy the Jordan-chain recurrence at alpha and extend by zeros.
std::vector<CVector> taylor_chain(const MinimalBasisVector& p, Complex alpha) {
    Index d = p.degree();
    Index n = p.coeffs.front().size();
    std::vector<CVector> c(d + 1, CVector::Zero(n));
    for (Index j = 0; j <= d; ++j) {
        double binom = 1.0;
        Complex pw = 1.0;
        for (Index i = j; i <= d; ++i) {
            c[j] += binom * pw * p.coeffs[i];
            binom *= static_cast<double>(i + 1) / static_cast<double>(i + 1 - j);
            pw *= alpha;
        }
    }
    return c;
}

// Embed a chain into the k-block staircase kernel at the given offset with the
// alternating-sign convention; chains shorter than the window are only valid
// bottom-aligned, longer ones are truncated from the top.
CVector embed_chain(const std::vector<CVector>& chain, Index k, Index offset, Index n) {
    CVector z = CVector::Zero(k * n);
    Index len = std::min<Index>(static_cast<Index>(chain.size()), k - offset);
    for (Index j = 0; j < len; ++j) {
        double sign = ((offset + j) % 2 == 0) ? 1.0 : -1.0;
        z.segment((offset + j) * n, n) = sign * chain[j];
    }
    return z;
}

void normalize_chain(std::vector<CVector>& chain) {
    double mx = 0.0;
    for (const auto& v : chain) mx = std::max(mx, v.norm());
    if (mx > 0.0)
        for (auto& v : chain) v /= mx;
}

// Jordan chains of the pencil Q at eigenvalue alpha with the given Segre
// characteristic. `taylors` are the zero-extendable chains coming from the
// right singular part (they live in every staircase kernel and must be
// projected out).
std::vector<std::vector<CVector>> regular_chains_at(
    const MatrixPencil& Q, Complex alpha, const std::vector<Index>& segre,
    const std::vector<std::vector<CVector>>& taylors, const Tolerances& tols) {
    Index n = Q.cols();
    std::vector<std::vector<CVector>> found;
    std::vector<Index> sizes = segre;  // nonincreasing
    for (size_t i = 0; i < sizes.size();) {
        Index k = sizes[i];
        Index mult = 0;
        while (i < sizes.size() && sizes[i] == k) {
            ++mult;
            ++i;
        }
        CMatrix T = staircase_matrix(Q, alpha, k);
        Subspace NS = staircase_kernel(T, loose_rank_tol(Q, k, tols),
                                       Q.scale() * std::max(1.0, std::abs(alpha)));
        if (NS.dim() == 0)
            throw ToleranceAmbiguity("kronecker_chains: empty staircase kernel at window " +
                                     std::to_string(k));

        // contamination: singular-part chains and longer chains at this alpha,
        // at every offset of the window
        std::vector<CVector> contam;
        for (const auto& c : taylors)
            for (Index o = 0; o < k; ++o) contam.push_back(embed_chain(c, k, o, n));
        for (const auto& c : found)
            for (Index o = 0; o < k; ++o) contam.push_back(embed_chain(c, k, o, n));
        CMatrix W = NS.basis;
        if (!contam.empty()) {
            CMatrix span(k * n, static_cast<Index>(contam.size()));
            for (size_t j = 0; j < contam.size(); ++j) span.col(j) = contam[j];
            Subspace C = Subspace::from_span(span, tols.subspace);
            W -= C.basis * (C.basis.adjoint() * W);
        }
        Eigen::JacobiSVD<CMatrix> svd(W, Eigen::ComputeThinU);
        Index keep = 0;
        const auto& sv = svd.singularValues();
        for (Index j = 0; j < sv.size(); ++j)
            if (sv(j) > tols.subspace) ++keep;
        if (keep < mult)
            throw ToleranceAmbiguity("kronecker_chains: staircase kernel too small at window " +
                                     std::to_string(k));
        CMatrix Z = svd.matrixU().leftCols(keep);
        // among the surviving directions, the genuine size-k chains are the
        // ones with independent top blocks
        Eigen::JacobiSVD<CMatrix> top(Z.topRows(n), Eigen::ComputeThinV);
        if (top.singularValues().size() < mult ||
            top.singularValues()(mult - 1) <= tols.subspace)
            throw ToleranceAmbiguity("kronecker_chains: could not separate chains of length " +
                                     std::to_string(k));
        CMatrix picked = Z * top.matrixV().leftCols(mult);
        for (Index j = 0; j < mult; ++j) {
            CVector stacked = picked.col(j);
            std::vector<CVector> chain(k);
            for (Index l = 0; l < k; ++l) {
                double sign = (l % 2 == 0) ? 1.0 : -1.0;
                chain[l] = sign * stacked.segment(l * n, n);
            }
            normalize_chain(chain);
            found.push_back(std::move(chain));
        }
    }
    return found;
}

double chain_residual(const MatrixPencil& P, const KroneckerChain& c) {
    double scale = P.scale();
    const auto& u = c.vectors;
    double worst = 0.0;
    auto upd = [&](const CVector& r) { worst = std::max(worst, r.norm() / scale); };
    switch (c.block.kind) {
        case BlockKind::FiniteRegular: {
            CMatrix M = P.eval(c.block.alpha);
            upd(M * u[0]);
            for (size_t i = 1; i < u.size(); ++i) upd(M * u[i] - P.B * u[i - 1]);
            break;
        }
        case BlockKind::InfiniteRegular: {
            upd(P.B * u[0]);
            for (size_t i = 1; i < u.size(); ++i) upd(P.B * u[i] - P.A * u[i - 1]);
            break;
        }
        case BlockKind::RightSingular: {
            upd(P.B * u[0]);
            for (size_t i = 1; i < u.size(); ++i) upd(P.B * u[i] - P.A * u[i - 1]);
            upd(P.A * u.back());
            break;
        }
        case BlockKind::LeftSingular: {
            for (size_t i = 1; i < u.size(); ++i) upd(P.B * u[i] - P.A * u[i - 1]);
            break;
        }
    }
    return worst;
}

} // namespace

std::vector<KroneckerChain> kronecker_chains(const MatrixPencil& P,
                                             const KroneckerStructure& S,
                                             const Tolerances& tols) {
    Index n = P.cols();
    std::vector<KroneckerChain> out;

    auto rmb = minimal_basis(P, tols);
    {
        std::vector<Index> degrees;
        for (const auto& v : rmb) degrees.push_back(v.degree());
        if (degrees != S.right_minimal_indices())
            throw ToleranceAmbiguity("kronecker_chains: right minimal indices disagree with the "
                                     "requested structure");
    }
    // L_d chain = reversed coefficient sequence of the minimal basis vector
    for (const auto& v : rmb) {
        KroneckerChain c;
        c.block = {BlockKind::RightSingular, v.degree(), {}};
        for (Index i = v.degree(); i >= 0; --i) c.vectors.push_back(v.coeffs[i]);
        normalize_chain(c.vectors);
        out.push_back(std::move(c));
    }

    // finite regular chains
    {
        std::vector<std::vector<CVector>> taylors;
        for (const auto& ev : S.finite_eigen_groups(tols.cluster)) {
            taylors.clear();
            for (const auto& v : rmb) taylors.push_back(taylor_chain(v, ev.first));
            auto chains = regular_chains_at(P, ev.first, ev.second, taylors, tols);
            for (size_t i = 0; i < chains.size(); ++i) {
                KroneckerChain c;
                c.block = {BlockKind::FiniteRegular, static_cast<Index>(chains[i].size()),
                           ev.first};
                c.vectors = std::move(chains[i]);
                out.push_back(std::move(c));
            }
        }
    }

    // infinite regular chains via the reversed pencil at 0
    {
        auto inf = S.infinite_segre();
        if (!inf.empty()) {
            auto rmb_rev = minimal_basis(P.reversed(), tols);
            std::vector<std::vector<CVector>> taylors;
            for (const auto& v : rmb_rev) taylors.push_back(taylor_chain(v, 0.0));
            auto chains = regular_chains_at(P.reversed(), 0.0, inf, taylors, tols);
            for (auto& ch : chains) {
                KroneckerChain c;
                c.block = {BlockKind::InfiniteRegular, static_cast<Index>(ch.size()), {}};
                c.vectors = std::move(ch);
                out.push_back(std::move(c));
            }
        }
    }

    // left singular chains: solve the recurrence B u_{i+1} = A u_i and pick
    // the solutions with the largest footprint outside everything chosen so far
    {
        auto etas = S.left_minimal_indices();
        std::sort(etas.rbegin(), etas.rend());
        auto complement_projector = [&]() {
            Index total = 0;
            for (const auto& c : out) total += static_cast<Index>(c.vectors.size());
            CMatrix span(n, total);
            Index col = 0;
            for (const auto& c : out)
                for (const auto& v : c.vectors) span.col(col++) = v;
            return Subspace::from_span(span, tols.subspace);
        };
        for (size_t i = 0; i < etas.size();) {
            Index eta = etas[i];
            Index mult = 0;
            while (i < etas.size() && etas[i] == eta) {
                ++mult;
                ++i;
            }
            if (eta == 0) continue;  // L_0^T has no chain vectors
            CMatrix R = CMatrix::Zero((eta - 1) * P.rows(), eta * n);
            for (Index j = 0; j + 1 < eta; ++j) {
                R.block(j * P.rows(), j * n, P.rows(), n) = P.A;
                R.block(j * P.rows(), (j + 1) * n, P.rows(), n) = -P.B;
            }
            Subspace NS = (eta == 1)
                              ? Subspace(n, CMatrix::Identity(n, n))
                              : nullspace(R, loose_rank_tol(P, eta, tols));
            Subspace span_known = complement_projector();
            CMatrix M = NS.basis;
            if (span_known.dim() > 0)
                for (Index b = 0; b < eta; ++b)
                    M.middleRows(b * n, n) -=
                        span_known.basis * (span_known.basis.adjoint() * M.middleRows(b * n, n));
            Eigen::JacobiSVD<CMatrix> svd(M, Eigen::ComputeThinV);
            if (svd.singularValues().size() < mult ||
                svd.singularValues()(mult - 1) <= tols.subspace)
                throw ToleranceAmbiguity("kronecker_chains: left singular chain selection failed "
                                         "at index " + std::to_string(eta));
            CMatrix picked = NS.basis * svd.matrixV().leftCols(mult);
            for (Index j = 0; j < mult; ++j) {
                KroneckerChain c;
                c.block = {BlockKind::LeftSingular, eta, {}};
                for (Index b = 0; b < eta; ++b)
                    c.vectors.push_back(picked.col(j).segment(b * n, n));
                normalize_chain(c.vectors);
                out.push_back(std::move(c));
            }
        }
    }

    // global verification: per-chain residuals and joint independence
    Index total = 0;
    for (const auto& c : out) {
        if (chain_residual(P, c) > tols.residual)
            throw ToleranceAmbiguity("kronecker_chains: chain residual above tolerance");
        total += static_cast<Index>(c.vectors.size());
    }
    if (total != n)
        throw ToleranceAmbiguity("kronecker_chains: chain vector count " + std::to_string(total) +
                                 " != " + std::to_string(n));
    CMatrix all(n, total);
    Index col = 0;
    for (const auto& c : out)
        for (const auto& v : c.vectors) all.col(col++) = v;
    if (rank_tol(all, std::max(tols.rank_rel(n, n), tols.residual)) != n)
        throw ToleranceAmbiguity("kronecker_chains: chain vectors are not jointly independent");
    return out;
}

} // namespace sing2ep
