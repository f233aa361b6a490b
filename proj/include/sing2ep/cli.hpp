#pragma once
//
// Command-line surface: problem/pencil file I/O, analysis reports, the
// built-in example corpus and stratification queries. run_cli is the whole
// dispatcher so tests can drive it with captured streams.
//
// Exit codes: 0 ok, 1 parse error, 2 tolerance ambiguity, 3 corpus mismatch.
//

#include "sing2ep/twopar.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sing2ep {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// File helpers (JSON; complex entries as [re, im] pairs, matrices row-major).
TwoParameterProblem load_problem(const std::string& path);
MatrixPencil load_pencil(const std::string& path);

} // namespace sing2ep
