#pragma once
//
// Built-in regression corpus: seven small singular two-parameter problems
// with known eigenvalues, Kronecker structures and reducing-subspace data.
//

#include "sing2ep/twopar.hpp"

namespace sing2ep {

struct ExpectedEigenvalue {
    Complex lambda, mu;
    bool on_common_factor = false;
};

struct CorpusExpectation {
    std::vector<ExpectedEigenvalue> eigenvalues;
    std::string kcf1, kcf2;          // of D1 - lambda D0 / D2 - mu D0, unrotated;
                                     // empty = unchecked
    Index r1_dim = -1, r2_dim = -1;  // minimal reducing dims; -1 = unchecked
    bool coprime = true;
    Index common_degree = 0;
};

struct CorpusExample {
    std::string name;
    TwoParameterProblem problem;
    CorpusExpectation expect;
};

const std::vector<CorpusExample>& corpus();
const CorpusExample& corpus_example(const std::string& name);

} // namespace sing2ep
