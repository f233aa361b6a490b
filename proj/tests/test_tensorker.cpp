#include <doctest.h>

#include "sing2ep/corpus.hpp"
#include "sing2ep/strat.hpp"
#include "sing2ep/tensorker.hpp"

#include <algorithm>

using namespace sing2ep;

namespace {

// random regular structure on a common eigenvalue set
KroneckerStructure planted_regular(Rng& rng, const std::vector<Complex>& eigs,
                                   bool with_infinite) {
    std::uniform_int_distribution<int> nb(1, 2), size(1, 3);
    std::vector<KroneckerBlock> blocks;
    for (Complex a : eigs) {
        int k = nb(rng);
        for (int i = 0; i < k; ++i)
            blocks.push_back({BlockKind::FiniteRegular, size(rng), a});
    }
    if (with_infinite) blocks.push_back({BlockKind::InfiniteRegular, size(rng), {}});
    return KroneckerStructure::from_blocks(std::move(blocks));
}

Index oracle_structural(const KroneckerStructure& S1, const KroneckerStructure& S2) {
    Index total = 0;
    for (const auto& [a1, d1] : S1.finite_eigen_groups())
        for (const auto& [a2, d2] : S2.finite_eigen_groups())
            if (std::abs(a1 - a2) < 1e-6)
                total += t_alpha(Segre(d1), Segre(d2));
    total += t_alpha(Segre(S1.infinite_segre()), Segre(S2.infinite_segre()));
    return total;
}

} // namespace

TEST_CASE("pair_type classification") {
    KroneckerBlock j1{BlockKind::FiniteRegular, 1, Complex(1.0)};
    KroneckerBlock j1b{BlockKind::FiniteRegular, 1, Complex(2.0)};
    KroneckerBlock n1{BlockKind::InfiniteRegular, 1, {}};
    KroneckerBlock l1{BlockKind::RightSingular, 1, {}};
    KroneckerBlock l2t{BlockKind::LeftSingular, 2, {}};
    CHECK(pair_type(j1, j1) == 'a');
    CHECK(pair_type(j1, j1b) == 0);  // distinct eigenvalues: no contribution
    CHECK(pair_type(n1, n1) == 'b');
    CHECK(pair_type(n1, l1) == 'c');
    CHECK(pair_type(l1, n1) == 'd');
    CHECK(pair_type(l1, j1) == 'e');
    CHECK(pair_type(j1, l1) == 'f');
    CHECK(pair_type(l1, l1) == 'g');
    CHECK(pair_type(l1, l2t) == 'h');
    CHECK(pair_type(l2t, l1) == 'i');
}

TEST_CASE("t_dim_structural examples") {
    auto S = [](const char* s) { return parse_structure(s); };
    CHECK(t_dim_structural(S("J2(1)"), S("J3(1)")) == 2);
    CHECK(t_dim_structural(S("2*J1(0)"), S("J1(-2)+J1(0)")) == 2);
    CHECK(t_dim_structural(S("J2(5)"), S("J1(7)")) == 0);
    CHECK_THROWS(t_dim_structural(S("L0+J1(1)"), S("J1(1)")));
}

TEST_CASE("t_dim on the ex5_1 gamma-pencils at the eigenvalue (0,0)") {
    const auto& e = corpus_example("ex5_1");
    MatrixPencil P1{e.problem.W1(0.0, 0.0), e.problem.C1};
    MatrixPencil P2{e.problem.W2(0.0, 0.0), e.problem.C2};
    CHECK(t_dim_numeric(P1, P2) == 2);
    Rng rng(3);
    KroneckerStructure S1 = kcf_structure(P1, rng);
    KroneckerStructure S2 = kcf_structure(P2, rng);
    CHECK(to_string(S1) == "2*J1(0)");
    CHECK(to_string(S2) == "J1(0)+J1(-2)");
    CHECK(t_dim_structural(S1, S2) == 2);
}

TEST_CASE("t_dim on the ex5_3 gamma-pencils at (0,0)") {
    const auto& e = corpus_example("ex5_3");
    MatrixPencil P1{e.problem.W1(0.0, 0.0), e.problem.C1};
    MatrixPencil P2{e.problem.W2(0.0, 0.0), e.problem.C2};
    CHECK(t_dim_numeric(P1, P2) == 4);
}

TEST_CASE("regular pairs with no common eigenvalue have trivial kernel") {
    Rng rng(5);
    MatrixPencil P1 = synth_pencil(parse_structure("J2(1)+J1(3)"), rng);
    MatrixPencil P2 = synth_pencil(parse_structure("J1(2)+J2(-1)"), rng);
    CHECK(t_dim_numeric(P1, P2) == 0);
}

TEST_CASE("kernel_basis_regular: 1x1 pair is the eigenvector tensor") {
    Rng rng(7);
    KroneckerBlock b{BlockKind::FiniteRegular, 1, Complex(0.4)};
    MatrixPencil P1 = synth_pencil(KroneckerStructure::from_blocks({b}), rng);
    MatrixPencil P2 = synth_pencil(KroneckerStructure::from_blocks({b}), rng);
    auto c1 = kronecker_chains(P1, kcf_structure(P1, rng));
    auto c2 = kronecker_chains(P2, kcf_structure(P2, rng));
    Subspace K = kernel_basis_regular(P1, P2, c1, c2);
    REQUIRE(K.dim() == 1);
    CVector z = kron(CMatrix(c1[0].vectors[0]), CMatrix(c2[0].vectors[0]));
    CHECK(K.contains(z / z.norm()));
}

TEST_CASE("structural = numeric and basis spans the nullspace") {
    Rng rng(404);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int t = 0; t < 50; ++t) {
        std::vector<Complex> eigs{{0.5, 0.25}};
        if (coin(rng)) eigs.push_back({-1.0, 0.0});
        KroneckerStructure S1 = planted_regular(rng, eigs, coin(rng));
        KroneckerStructure S2 = planted_regular(rng, eigs, coin(rng));
        if (S1.n > 6 || S2.n > 6) continue;
        CAPTURE(to_string(S1));
        CAPTURE(to_string(S2));
        MatrixPencil P1 = synth_pencil(S1, rng);
        MatrixPencil P2 = synth_pencil(S2, rng);
        Index structural = t_dim_structural(S1, S2);
        Index numeric = t_dim_numeric(P1, P2);
        CHECK(structural == numeric);
        CHECK(structural == oracle_structural(S1, S2));

        auto c1 = kronecker_chains(P1, kcf_structure(P1, rng));
        auto c2 = kronecker_chains(P2, kcf_structure(P2, rng));
        Subspace K = kernel_basis_regular(P1, P2, c1, c2);
        CHECK(K.dim() == numeric);
        CMatrix D = kron(P1.A, P2.B) - kron(P1.B, P2.A);
        // oracle nullspace with the cutoff floored at the operand scale
        Eigen::JacobiSVD<CMatrix> svd(D, Eigen::ComputeFullV);
        double cutoff = 1e-8 * std::max(svd.singularValues()(0), P1.scale() * P2.scale());
        Index rk = 0;
        for (Index j = 0; j < svd.singularValues().size(); ++j)
            if (svd.singularValues()(j) > cutoff) ++rk;
        Subspace N(D.cols(), svd.matrixV().rightCols(D.cols() - rk));
        REQUIRE(N.dim() == numeric);
        for (Index j = 0; j < K.dim(); ++j) CHECK(N.contains(K.basis.col(j)));
    }
}

TEST_CASE("t_dim_numeric is equivalence-invariant") {
    Rng rng(909);
    for (int t = 0; t < 50; ++t) {
        KroneckerStructure S1 = planted_regular(rng, {Complex(1.0)}, false);
        KroneckerStructure S2 = planted_regular(rng, {Complex(1.0)}, true);
        MatrixPencil P1 = synth_pencil(S1, rng);
        MatrixPencil P2 = synth_pencil(S2, rng);
        Index base = t_dim_numeric(P1, P2);
        CMatrix L1 = random_well_conditioned(P1.rows(), rng);
        CMatrix R1 = random_well_conditioned(P1.cols(), rng);
        CMatrix L2 = random_well_conditioned(P2.rows(), rng);
        CMatrix R2 = random_well_conditioned(P2.cols(), rng);
        MatrixPencil Q1{L1 * P1.A * R1, L1 * P1.B * R1};
        MatrixPencil Q2{L2 * P2.A * R2, L2 * P2.B * R2};
        CHECK(t_dim_numeric(Q1, Q2) == base);
    }
}

TEST_CASE("one stratification move never increases the kernel dimension") {
    Rng rng(1313);
    std::uniform_int_distribution<int> coin(0, 1);
    int done = 0;
    while (done < 200) {
        KroneckerStructure S1 = planted_regular(rng, {Complex(0.0)}, false);
        KroneckerStructure S2 = planted_regular(rng, {Complex(0.0)}, false);
        Segre d(S1.finite_eigen_groups()[0].second);
        Index before = t_dim_numeric(synth_pencil(S1, rng), synth_pencil(S2, rng));

        std::vector<Segre> after_moves;
        // every valid MLW site
        for (Index p = 1; p <= static_cast<Index>(d.parts.size()); ++p)
            for (Index q = p + 1; q <= static_cast<Index>(d.parts.size()); ++q) {
                try {
                    after_moves.push_back(mlw_move(d, p, q).segre);
                } catch (const std::invalid_argument&) {
                }
            }
        // every valid cut, both halves moved to fresh distinct eigenvalues
        for (Index C = 1; C < d.parts[0]; ++C) {
            auto [beta, gamma] = hc_move(d, C);
            std::vector<KroneckerBlock> blocks;
            for (Index s : beta.parts)
                blocks.push_back({BlockKind::FiniteRegular, s, Complex(0.0)});
            for (Index s : gamma.parts)
                blocks.push_back({BlockKind::FiniteRegular, s, Complex(10.0)});
            MatrixPencil P1 = synth_pencil(KroneckerStructure::from_blocks(std::move(blocks)), rng);
            Index after = t_dim_numeric(P1, synth_pencil(S2, rng));
            CHECK(after <= before);
            ++done;
        }
        for (const Segre& moved : after_moves) {
            std::vector<KroneckerBlock> blocks;
            for (Index s : moved.parts)
                blocks.push_back({BlockKind::FiniteRegular, s, Complex(0.0)});
            MatrixPencil P1 = synth_pencil(KroneckerStructure::from_blocks(std::move(blocks)), rng);
            Index after = t_dim_numeric(P1, synth_pencil(S2, rng));
            CHECK(after <= before);
            ++done;
        }
    }
}
