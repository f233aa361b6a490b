#include <doctest.h>

#include "sing2ep/corpus.hpp"
#include "sing2ep/pencil.hpp"

#include <algorithm>

using namespace sing2ep;

namespace {

MatrixPencil delta_pencil(const std::string& name, int which) {
    const auto& e = corpus_example(name);
    const auto& p = e.problem;
    CMatrix D0 = kron(p.B1, p.C2) - kron(p.C1, p.B2);
    if (which == 1) return {kron(p.C1, p.A2) - kron(p.A1, p.C2), D0};
    return {kron(p.A1, p.B2) - kron(p.B1, p.A2), D0};
}

// single L1 block: A - lambda*B = [-lambda, 1]
MatrixPencil l1_pencil() {
    CMatrix A(1, 2), B(1, 2);
    A << 0, 1;
    B << 1, 0;
    return {A, B};
}

double basis_residual(const MatrixPencil& P, const MinimalBasisVector& v, Rng& rng) {
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        Complex l = random_unit_complex(rng) * 2.0;
        worst = std::max(worst, (P.eval(l) * v.eval(l)).norm() / std::max(P.scale(), 1.0));
    }
    return worst;
}

} // namespace

TEST_CASE("normal_rank") {
    Rng rng(5);
    CHECK(normal_rank({CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)}, rng) == 2);
    CHECK(normal_rank(delta_pencil("ex5_1", 1), rng) == 3);
    CHECK(normal_rank(l1_pencil(), rng) == 1);
}

TEST_CASE("minimal_basis of the L1 pencil") {
    auto basis = minimal_basis(l1_pencil());
    REQUIRE(basis.size() == 1);
    CHECK(basis[0].degree() == 1);
    // p(lambda) proportional to (1, lambda)^T
    Rng rng(3);
    CHECK(basis_residual(l1_pencil(), basis[0], rng) < 1e-12);
    CVector p0 = basis[0].eval(0.0);
    CHECK(std::abs(p0(1)) < 1e-12 * p0.norm());
}

TEST_CASE("minimal_basis of the ex5_1 delta pencil") {
    auto basis = minimal_basis(delta_pencil("ex5_1", 1));
    REQUIRE(basis.size() == 1);
    CHECK(basis[0].degree() == 0);
    CVector v = basis[0].coeffs[0];
    CHECK(std::abs(v(3)) > 0.99 * v.norm());  // e4 up to scale
}

TEST_CASE("minimal_basis of a synthesized singular pencil") {
    Rng rng(41);
    KroneckerStructure S = KroneckerStructure::from_blocks(
        {{BlockKind::RightSingular, 2, {}},
         {BlockKind::FiniteRegular, 2, Complex(0.3)},
         {BlockKind::InfiniteRegular, 1, {}}});
    MatrixPencil P = synth_pencil(S, rng);
    auto basis = minimal_basis(P);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0].degree() == 2);
    CHECK(basis_residual(P, basis[0], rng) < 1e-8);
}

TEST_CASE("generic_kernel") {
    Rng rng(9);
    MatrixPencil reg{CMatrix::Identity(3, 3), random_cmatrix(3, 3, rng)};
    CHECK(generic_kernel(reg, 0.7).dim() == 0);

    MatrixPencil P = delta_pencil("ex5_1", 1);
    for (int t = 0; t < 3; ++t) {
        Complex l0 = random_unit_complex(rng) * 2.0;
        Subspace G = generic_kernel(P, l0);
        REQUIRE(G.dim() == 1);
        CHECK(std::abs(G.basis(3, 0)) > 0.99);
    }

    Subspace G5 = generic_kernel(delta_pencil("ex5_5", 1), 0.0);
    CHECK(G5.dim() == 6);
}

TEST_CASE("generic_kernel dimension and containment properties") {
    Rng rng(43);
    KroneckerStructure S = KroneckerStructure::from_blocks(
        {{BlockKind::RightSingular, 1, {}},
         {BlockKind::LeftSingular, 1, {}},
         {BlockKind::FiniteRegular, 2, Complex(1.5, -0.5)}});
    MatrixPencil P = synth_pencil(S, rng);
    Index s = static_cast<Index>(minimal_basis(P).size());
    for (int t = 0; t < 10; ++t) {
        Complex l0 = random_unit_complex(rng) * 3.0;
        Subspace G = generic_kernel(P, l0);
        CHECK(G.dim() == s);
        Subspace K = nullspace(P.eval(l0));
        for (Index j = 0; j < G.dim(); ++j) CHECK(K.contains(G.basis.col(j)));
    }
}

TEST_CASE("minimal_reducing") {
    Rng rng(15);
    MatrixPencil reg{CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)};
    CHECK(minimal_reducing(reg, rng).dim() == 0);

    Subspace R = minimal_reducing(delta_pencil("ex5_1", 1), rng);
    REQUIRE(R.dim() == 1);
    CHECK(std::abs(R.basis(3, 0)) > 0.99);

    CHECK(minimal_reducing(delta_pencil("ex5_3", 1), rng).dim() == 2);
}

TEST_CASE("eigenvalues_regular on the corpus delta pencils") {
    Rng rng(19);
    auto evs = eigenvalues_regular(delta_pencil("ex5_1", 1), rng);
    REQUIRE(evs.size() == 2);
    std::sort(evs.begin(), evs.end(),
              [](const auto& a, const auto& b) { return a.lambda.real() < b.lambda.real(); });
    CHECK(std::abs(evs[0].lambda) < 1e-8);
    CHECK(std::abs(evs[1].lambda - 1.0) < 1e-8);
    CHECK(evs[0].geometric_excess == 1);
    CHECK(evs[1].geometric_excess == 1);

    CHECK(eigenvalues_regular(delta_pencil("ex5_4", 1), rng).empty());

    auto e2 = eigenvalues_regular(delta_pencil("ex5_2", 1), rng);
    REQUIRE(e2.size() == 1);
    CHECK(std::abs(e2[0].lambda - 1.0) < 1e-8);
}

TEST_CASE("is_eigenvalue_equiv") {
    Rng rng(21);
    auto r1 = is_eigenvalue_equiv(delta_pencil("ex5_1", 1), 0.0, rng);
    CHECK(r1.all_agree());
    CHECK(r1.rank_drop);

    auto r2 = is_eigenvalue_equiv(delta_pencil("ex5_2", 1), 0.0, rng);
    CHECK(r2.all_agree());
    CHECK(!r2.rank_drop);

    MatrixPencil reg{CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)};
    auto r3 = is_eigenvalue_equiv(reg, 0.5, rng);
    CHECK(r3.all_agree());
    CHECK(!r3.rank_drop);
}

TEST_CASE("five-way equivalence property on random pencils") {
    Rng rng(2024);
    int trials = 0;
    while (trials < 200) {
        std::vector<KroneckerBlock> blocks;
        std::uniform_int_distribution<int> coin(0, 1), dd(1, 2);
        Complex planted(1.0, -0.5);
        blocks.push_back({BlockKind::FiniteRegular, dd(rng), planted});
        if (coin(rng)) blocks.push_back({BlockKind::RightSingular, coin(rng), {}});
        if (coin(rng)) blocks.push_back({BlockKind::LeftSingular, coin(rng), {}});
        if (coin(rng)) blocks.push_back({BlockKind::InfiniteRegular, 1, {}});
        KroneckerStructure S = KroneckerStructure::from_blocks(std::move(blocks));
        if (S.m != S.n) continue;  // equivalence test needs square pencils
        MatrixPencil P = synth_pencil(S, rng);
        // probe the planted eigenvalue and a random non-eigenvalue
        auto at_eig = is_eigenvalue_equiv(P, planted, rng);
        CHECK(at_eig.all_agree());
        CHECK(at_eig.rank_drop);
        Complex off = planted + 0.5 + random_unit_complex(rng);
        auto at_off = is_eigenvalue_equiv(P, off, rng);
        CHECK(at_off.all_agree());
        CHECK(!at_off.rank_drop);
        trials += 2;
    }
}

TEST_CASE("kronecker_chains on the canonical J2 block") {
    KroneckerBlock b{BlockKind::FiniteRegular, 2, Complex(0.7, 0.2)};
    MatrixPencil P = canonical_block(b);
    auto chains = kronecker_chains(P, KroneckerStructure::from_blocks({b}));
    REQUIRE(chains.size() == 1);
    REQUIRE(chains[0].vectors.size() == 2);
    const auto& u = chains[0].vectors;
    CHECK((P.eval(b.alpha) * u[0]).norm() < 1e-10);
    CHECK((P.eval(b.alpha) * u[1] - P.B * u[0]).norm() < 1e-10);
}

TEST_CASE("ex5_5 gamma-pencil regular structure") {
    // W1(lambda,0) - gamma*C1 has blocks J3(lambda) and J1(lambda);
    // W2(lambda,0) - gamma*C2 has two J2(lambda) blocks.
    const auto& e = corpus_example("ex5_5");
    Rng rng(27);
    Complex l(0.8, 0.3);
    MatrixPencil P1{e.problem.W1(l, 0.0), e.problem.C1};
    MatrixPencil P2{e.problem.W2(l, 0.0), e.problem.C2};
    KroneckerStructure S1 = kcf_structure(P1, rng);
    KroneckerStructure S2 = kcf_structure(P2, rng);
    auto g1 = S1.finite_eigen_groups();
    REQUIRE(g1.size() == 1);
    CHECK(std::abs(g1[0].first - l) < 1e-8);
    CHECK(g1[0].second == std::vector<Index>{3, 1});
    auto g2 = S2.finite_eigen_groups();
    REQUIRE(g2.size() == 1);
    CHECK(std::abs(g2[0].first - l) < 1e-8);
    CHECK(g2[0].second == std::vector<Index>{2, 2});

    // paper chain for the J3 block: lambda*e1, e3, e4
    auto chains = kronecker_chains(P1, S1);
    const KroneckerChain* j3 = nullptr;
    for (const auto& c : chains)
        if (c.block.kind == BlockKind::FiniteRegular && c.block.size == 3) j3 = &c;
    REQUIRE(j3 != nullptr);
    CMatrix expect = CMatrix::Zero(4, 3);
    expect(0, 0) = l;
    expect(2, 1) = 1.0;
    expect(3, 2) = 1.0;
    Subspace span = Subspace::from_span(expect);
    for (const auto& v : j3->vectors) CHECK(span.contains(v));
}

TEST_CASE("chains of random synthesized pencils: residuals and completeness") {
    Rng rng(31);
    for (int t = 0; t < 10; ++t) {
        std::vector<KroneckerBlock> blocks;
        std::uniform_int_distribution<int> dd(1, 2), coin(0, 1);
        blocks.push_back({BlockKind::FiniteRegular, dd(rng), Complex(0.4, 0.1)});
        blocks.push_back({BlockKind::InfiniteRegular, dd(rng), {}});
        if (coin(rng)) blocks.push_back({BlockKind::RightSingular, dd(rng) - 1, {}});
        if (coin(rng)) blocks.push_back({BlockKind::LeftSingular, dd(rng) - 1, {}});
        KroneckerStructure S = KroneckerStructure::from_blocks(std::move(blocks));
        MatrixPencil P = synth_pencil(S, rng);
        auto chains = kronecker_chains(P, kcf_structure(P, rng));
        Index total = 0;
        for (const auto& c : chains) total += static_cast<Index>(c.vectors.size());
        CHECK(total == P.cols());
        CMatrix all(P.cols(), total);
        Index col = 0;
        for (const auto& c : chains)
            for (const auto& v : c.vectors) all.col(col++) = v;
        CHECK(rank_tol(all, Tolerances{}) == P.cols());
        for (const auto& c : chains) {
            const auto& u = c.vectors;
            for (size_t i = 0; i < u.size(); ++i) {
                CVector r;
                switch (c.block.kind) {
                    case BlockKind::FiniteRegular:
                        r = (i == 0) ? CVector(P.eval(c.block.alpha) * u[0])
                                     : CVector(P.eval(c.block.alpha) * u[i] - P.B * u[i - 1]);
                        break;
                    case BlockKind::InfiniteRegular:
                    case BlockKind::RightSingular:
                        r = (i == 0) ? CVector(P.B * u[0])
                                     : CVector(P.B * u[i] - P.A * u[i - 1]);
                        break;
                    case BlockKind::LeftSingular:
                        if (i == 0) continue;
                        r = P.B * u[i] - P.A * u[i - 1];
                        break;
                }
                CHECK(r.norm() < 1e-8 * std::max(P.scale(), 1.0));
            }
        }
    }
}

TEST_CASE("segre_at and staircase on canonical data") {
    Rng rng(37);
    KroneckerStructure S = KroneckerStructure::from_blocks(
        {{BlockKind::FiniteRegular, 3, Complex(2.0)},
         {BlockKind::FiniteRegular, 1, Complex(2.0)},
         {BlockKind::FiniteRegular, 1, Complex(-1.0)}});
    MatrixPencil P = synth_pencil(S, rng);
    CHECK(segre_at(P, 2.0, 0, Tolerances{}) == std::vector<Index>{3, 1});
    CHECK(segre_at(P, -1.0, 0, Tolerances{}) == std::vector<Index>{1});
    CHECK(segre_at(P, 0.5, 0, Tolerances{}).empty());
}
