#include "sing2ep/corpus.hpp"

#include <stdexcept>

namespace sing2ep {

namespace {

CMatrix mat(std::initializer_list<std::initializer_list<double>> rows) {
    Index m = static_cast<Index>(rows.size());
    Index n = static_cast<Index>(rows.begin()->size());
    CMatrix M(m, n);
    Index i = 0;
    for (const auto& row : rows) {
        Index j = 0;
        for (double v : row) M(i, j++) = v;
        ++i;
    }
    return M;
}

std::vector<CorpusExample> make_corpus() {
    std::vector<CorpusExample> out;

    {
        CorpusExample e;
        e.name = "ex4_5";
        e.problem.A1 = mat({{2, 1, 0}, {0, 2, 0}, {0, 1, 2}});
        e.problem.B1 = mat({{1, 2, 1}, {1, 2, 0}, {0, 0, 0}});
        e.problem.C1 = mat({{0, 0, 0}, {0, 2, 1}, {1, 2, 1}});
        e.problem.A2 = mat({{1, 1, 0}, {0, 1, 0}, {0, 1, 1}});
        e.problem.B2 = mat({{1, 2, 1}, {1, 2, 0}, {0, 0, 0}});
        e.problem.C2 = mat({{0, 0, 0}, {0, 2, 1}, {1, 2, 1}});
        e.expect.eigenvalues = {{-0.5, -0.5, false}};
        e.expect.coprime = true;
        e.expect.common_degree = 0;
        out.push_back(std::move(e));
    }

    {
        CorpusExample e;
        e.name = "ex4_6";
        e.problem.A1 = mat({{2, 0, 0, 0, -1},
                            {0, -1, 0, 0, 0},
                            {0, 0, -1, 0, 0},
                            {0, 0, 0, -1, 0},
                            {0, 0, 0, 0, -1}});
        e.problem.B1 = mat({{-2, -1, 1, 0, 1},
                            {1, 0, 0, 0, 0},
                            {0, 1, 0, 0, 0},
                            {0, 0, 0, 0, 0},
                            {0, 0, 0, 0, 0}});
        e.problem.C1 = mat({{-2, 0, 1, 0, 1},
                            {0, 0, 0, 0, 0},
                            {0, 0, 0, 0, 0},
                            {1, 0, 0, 0, 0},
                            {0, 0, 0, 1, 0}});
        e.problem.A2 = mat({{-2, 0, 0, 0, 1},
                            {0, -1, 0, 0, 0},
                            {0, 0, -1, 0, 0},
                            {0, 0, 0, -1, 0},
                            {0, 0, 0, 0, -1}});
        e.problem.B2 = mat({{-2, 1, 1, 0, 1},
                            {1, 0, 0, 0, 0},
                            {0, 1, 0, 0, 0},
                            {0, 0, 0, 0, 0},
                            {0, 0, 0, 0, 0}});
        e.problem.C2 = mat({{2, 0, -1, 0, -1},
                            {0, 0, 0, 0, 0},
                            {0, 0, 0, 0, 0},
                            {1, 0, 0, 0, 0},
                            {0, 0, 0, 1, 0}});
        e.expect.eigenvalues = {{0.0, 1.0, false}};
        e.expect.coprime = false;
        e.expect.common_degree = 2;
        out.push_back(std::move(e));
    }

    {
        CorpusExample e;
        e.name = "ex5_1";
        e.problem.A1 = mat({{0, 0}, {0, 0}});
        e.problem.B1 = mat({{1, 0}, {0, 1}});
        e.problem.C1 = mat({{1, 0}, {0, -1}});
        e.problem.A2 = mat({{-2, 0}, {0, 0}});
        e.problem.B2 = mat({{1, 0}, {0, 1}});
        e.problem.C2 = mat({{1, 0}, {0, -1}});
        e.expect.eigenvalues = {{0.0, 0.0, true}, {1.0, 1.0, true}};
        e.expect.kcf1 = "L0+L0T+J1(1)+J1(0)+N1";
        e.expect.kcf2 = "L0+L0T+J1(1)+J1(0)+N1";
        e.expect.r1_dim = 1;
        e.expect.r2_dim = 1;
        e.expect.coprime = false;
        e.expect.common_degree = 1;
        out.push_back(std::move(e));
    }

    {
        CorpusExample e;
        e.name = "ex5_2";
        e.problem.A1 = mat({{0, 1}, {0, 0}});
        e.problem.B1 = mat({{1, 0}, {0, 1}});
        e.problem.C1 = mat({{1, 0}, {0, -1}});
        e.problem.A2 = mat({{-2, 0}, {0, 0}});
        e.problem.B2 = mat({{1, 0}, {0, 1}});
        e.problem.C2 = mat({{1, 0}, {0, -1}});
        e.expect.eigenvalues = {{1.0, 1.0, true}};
        e.expect.kcf1 = "L1+L0T+J1(1)+N1";
        e.expect.kcf2 = "L1+L0T+J1(1)+N1";
        e.expect.r1_dim = 2;
        e.expect.r2_dim = 2;
        e.expect.coprime = false;
        e.expect.common_degree = 1;
        out.push_back(std::move(e));
    }

    {
        CorpusExample e;
        e.name = "ex5_3";
        e.problem.A1 = mat({{0, 0}, {0, 0}});
        e.problem.B1 = mat({{1, 1}, {0, 1}});
        e.problem.C1 = mat({{1, 0}, {0, 1}});
        e.problem.A2 = mat({{0, 0}, {0, 0}});
        e.problem.B2 = mat({{1, 0}, {0, 1}});
        e.problem.C2 = mat({{1, 0}, {0, 1}});
        e.expect.eigenvalues = {{0.0, 0.0, true}};
        e.expect.kcf1 = "2*L0+2*L0T+2*J1(0)";
        e.expect.kcf2 = "2*L0+2*L0T+2*J1(0)";
        e.expect.r1_dim = 2;
        e.expect.r2_dim = 2;
        e.expect.coprime = false;
        e.expect.common_degree = 2;
        out.push_back(std::move(e));
    }

    {
        CorpusExample e;
        e.name = "ex5_4";
        e.problem.A1 = mat({{0, 0}, {0, 0}});
        e.problem.B1 = mat({{1, 1}, {0, 1}});
        e.problem.C1 = mat({{1, 0}, {0, 1}});
        e.problem.A2 = mat({{0, 1}, {0, 0}});
        e.problem.B2 = mat({{1, 0}, {0, 1}});
        e.problem.C2 = mat({{1, 0}, {0, 1}});
        e.expect.eigenvalues = {};
        e.expect.kcf1 = "L0+L1+L0T+L1T";
        e.expect.kcf2 = "L0+L1+L0T+L1T";
        e.expect.r1_dim = 3;
        e.expect.r2_dim = 3;
        e.expect.coprime = false;
        e.expect.common_degree = 2;
        out.push_back(std::move(e));
    }

    {
        CorpusExample e;
        e.name = "ex5_5";
        e.problem.A1 = mat({{0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}});
        e.problem.B1 = mat({{1, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
        e.problem.C1 = mat({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
        e.problem.A2 = mat({{0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}});
        e.problem.B2 = mat({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
        e.problem.C2 = mat({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
        e.expect.eigenvalues = {};
        e.expect.kcf1 = "4*L0+2*L1+6*L0T+2*J1(0)+6*N1";
        e.expect.kcf2 = "4*L0+2*L1+6*L0T+2*J1(0)+6*N1";
        e.expect.r1_dim = 8;
        e.expect.r2_dim = 8;
        e.expect.coprime = false;
        e.expect.common_degree = 4;
        out.push_back(std::move(e));
    }

    return out;
}

} // namespace

const std::vector<CorpusExample>& corpus() {
    static const std::vector<CorpusExample> c = make_corpus();
    return c;
}

const CorpusExample& corpus_example(const std::string& name) {
    for (const auto& e : corpus())
        if (e.name == name) return e;
    throw std::invalid_argument("unknown corpus example: " + name);
}

} // namespace sing2ep
