#include "sing2ep/cli.hpp"

#include "sing2ep/corpus.hpp"
#include "sing2ep/strat.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace sing2ep {

namespace {

using nlohmann::json;

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const CMatrix& M) {
    json rows = json::array();
    for (Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < M.cols(); ++j) row.push_back(complex_to_json(M(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw std::invalid_argument("expected complex entry as [re, im]");
    Complex z(j[0].get<double>(), j[1].get<double>());
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::invalid_argument("non-finite matrix entry");
    return z;
}

CMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("expected matrix as nested arrays");
    Index m = static_cast<Index>(j.size());
    Index n = static_cast<Index>(j[0].size());
    CMatrix M(m, n);
    for (Index i = 0; i < m; ++i) {
        if (static_cast<Index>(j[i].size()) != n)
            throw std::invalid_argument("ragged matrix rows");
        for (Index k = 0; k < n; ++k) M(i, k) = complex_from_json(j[i][k]);
    }
    return M;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

struct GlobalFlags {
    Tolerances tols{};
    std::uint64_t seed = 12345;
    std::string rotate = "auto";
    std::string format = "json";
};

Tolerances tolerances_with_override(double tol) {
    Tolerances t;
    if (tol > 0.0) {
        t.residual = tol;
        t.subspace = tol;
    }
    return t;
}

SolveOptions solve_options(const GlobalFlags& g) {
    SolveOptions o;
    o.seed = g.seed;
    o.tols = g.tols;
    if (g.rotate == "auto") {
        o.rotate = RotateMode::Auto;
    } else if (g.rotate == "none") {
        o.rotate = RotateMode::None;
    } else {
        o.rotate = RotateMode::Angle;
        size_t used = 0;
        o.angle = std::stod(g.rotate, &used);
        if (used != g.rotate.size())
            throw std::invalid_argument("--rotate expects auto, none or an angle");
    }
    return o;
}

json solve_report_json(const SolveResult& res) {
    json evs = json::array();
    for (const auto& ev : res.eigenvalues) {
        json e;
        e["lambda"] = complex_to_json(ev.lambda);
        e["mu"] = complex_to_json(ev.mu);
        e["on_common_factor"] = ev.on_common_factor;
        e["multiplicity_hint"] = ev.multiplicity_hint;
        if (ev.x1) e["residual"] = ev.residual;
        evs.push_back(std::move(e));
    }
    const auto& d = res.diagnostics;
    json diag{{"nrank1", d.nrank1},
              {"nrank2", d.nrank2},
              {"kcf1", d.kcf1},
              {"kcf2", d.kcf2},
              {"r1_dim", d.r1_dim},
              {"r2_dim", d.r2_dim},
              {"same_bundle", d.same_bundle},
              {"coprime", d.coprime},
              {"common_degree", d.common_degree},
              {"phi", d.phi},
              {"seed", d.seed}};
    return json{{"eigenvalues", std::move(evs)}, {"diagnostics", std::move(diag)}};
}

void print_solve_text(const SolveResult& res, std::ostream& out) {
    out << res.eigenvalues.size() << " eigenvalue(s)\n";
    for (const auto& ev : res.eigenvalues) {
        out << "  lambda = " << ev.lambda << "  mu = " << ev.mu
            << "  common_factor = " << (ev.on_common_factor ? "yes" : "no")
            << "  mult_hint = " << ev.multiplicity_hint << "\n";
    }
    const auto& d = res.diagnostics;
    out << "kcf1: " << d.kcf1 << "\nkcf2: " << d.kcf2 << "\nsame_bundle: "
        << (d.same_bundle ? "yes" : "no") << "\ncoprime: " << (d.coprime ? "yes" : "no")
        << " (common degree " << d.common_degree << ")\n";
}

int cmd_solve(const std::string& path, const GlobalFlags& g, std::ostream& out) {
    TwoParameterProblem P = load_problem(path);
    SolveResult res = solve(P, solve_options(g));
    if (g.format == "text")
        print_solve_text(res, out);
    else
        out << solve_report_json(res).dump(2) << "\n";
    return 0;
}

int cmd_kcf(const std::string& path, const GlobalFlags& g, std::ostream& out) {
    MatrixPencil P = load_pencil(path);
    Rng rng(g.seed);
    KroneckerStructure S = kcf_structure(P, rng, g.tols);
    auto chains = kronecker_chains(P, S, g.tols);
    double worst = 0.0;
    for (const auto& c : chains) {
        for (size_t i = 0; i < c.vectors.size(); ++i) {
            CVector r;
            const auto& u = c.vectors;
            switch (c.block.kind) {
                case BlockKind::FiniteRegular:
                    r = (i == 0) ? CVector(P.eval(c.block.alpha) * u[0])
                                 : CVector(P.eval(c.block.alpha) * u[i] - P.B * u[i - 1]);
                    break;
                case BlockKind::InfiniteRegular:
                case BlockKind::RightSingular:
                    r = (i == 0) ? CVector(P.B * u[0]) : CVector(P.B * u[i] - P.A * u[i - 1]);
                    break;
                case BlockKind::LeftSingular:
                    if (i == 0) continue;
                    r = P.B * u[i] - P.A * u[i - 1];
                    break;
            }
            worst = std::max(worst, r.norm() / P.scale());
        }
    }
    if (g.format == "text") {
        out << to_string(S) << "\nmax chain residual: " << worst << "\n";
    } else {
        json j{{"structure", to_string(S)},
               {"num_chains", chains.size()},
               {"max_chain_residual", worst}};
        out << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_delta(const std::string& path, const GlobalFlags& g, std::ostream& out) {
    TwoParameterProblem P = load_problem(path);
    Rng rng(g.seed);
    DeltaSystem D = build_deltas(P, rng, g.tols);
    json j{{"Delta0", matrix_to_json(D.D0)},
           {"Delta1", matrix_to_json(D.D1)},
           {"Delta2", matrix_to_json(D.D2)},
           {"nrank1", D.nrank1},
           {"nrank2", D.nrank2},
           {"r1_dim", D.R1.dim()},
           {"r2_dim", D.R2.dim()}};
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_strat_covers(const std::string& bundle, const GlobalFlags& g, std::ostream& out) {
    RegularBundle b = parse_bundle(bundle);
    std::vector<std::string> rendered;
    for (const auto& c : enumerate_covers(b)) rendered.push_back(to_string(c));
    std::sort(rendered.begin(), rendered.end());
    if (g.format == "text") {
        for (const auto& s : rendered) out << s << "\n";
    } else {
        out << json(rendered).dump(2) << "\n";
    }
    return 0;
}

bool complex_close(Complex a, Complex b, double tol) {
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

json run_example(const CorpusExample& e, const GlobalFlags& g,
                 std::vector<std::string>& mismatches) {
    SolveOptions opts = solve_options(g);
    SolveResult res = solve(e.problem, opts);
    size_t before = mismatches.size();
    auto note = [&](const std::string& m) { mismatches.push_back(e.name + ": " + m); };

    // eigenvalue set comparison at 1e-6
    const double tol = 1e-6;
    std::vector<bool> used(res.eigenvalues.size(), false);
    for (const auto& exp : e.expect.eigenvalues) {
        bool found = false;
        for (size_t i = 0; i < res.eigenvalues.size() && !found; ++i) {
            const auto& got = res.eigenvalues[i];
            if (!used[i] && complex_close(got.lambda, exp.lambda, tol) &&
                complex_close(got.mu, exp.mu, tol)) {
                used[i] = true;
                found = true;
                if (got.on_common_factor != exp.on_common_factor)
                    note("common-factor flag mismatch at eigenvalue");
            }
        }
        if (!found) {
            std::ostringstream os;
            os << "expected eigenvalue (" << exp.lambda << ", " << exp.mu << ") not found";
            note(os.str());
        }
    }
    for (size_t i = 0; i < used.size(); ++i)
        if (!used[i]) {
            std::ostringstream os;
            os << "unexpected eigenvalue (" << res.eigenvalues[i].lambda << ", "
               << res.eigenvalues[i].mu << ")";
            note(os.str());
        }

    // unrotated Delta analysis
    Rng rng(opts.seed);
    DeltaSystem D = build_deltas(e.problem, rng, opts.tols);
    std::string kcf1 = to_string(kcf_structure(D.pencil1(), rng, opts.tols));
    std::string kcf2 = to_string(kcf_structure(D.pencil2(), rng, opts.tols));
    if (!e.expect.kcf1.empty() && kcf1 != e.expect.kcf1)
        note("kcf1 " + kcf1 + " != expected " + e.expect.kcf1);
    if (!e.expect.kcf2.empty() && kcf2 != e.expect.kcf2)
        note("kcf2 " + kcf2 + " != expected " + e.expect.kcf2);
    if (e.expect.r1_dim >= 0 && D.R1.dim() != e.expect.r1_dim)
        note("r1 dim " + std::to_string(D.R1.dim()) + " != " +
             std::to_string(e.expect.r1_dim));
    if (e.expect.r2_dim >= 0 && D.R2.dim() != e.expect.r2_dim)
        note("r2 dim " + std::to_string(D.R2.dim()) + " != " +
             std::to_string(e.expect.r2_dim));
    if (res.diagnostics.coprime != e.expect.coprime) note("coprime verdict mismatch");
    if (res.diagnostics.common_degree != e.expect.common_degree)
        note("common degree " + std::to_string(res.diagnostics.common_degree) + " != " +
             std::to_string(e.expect.common_degree));

    json j = solve_report_json(res);
    j["name"] = e.name;
    j["kcf1_unrotated"] = kcf1;
    j["kcf2_unrotated"] = kcf2;
    j["pass"] = mismatches.size() == before;
    return j;
}

int cmd_examples(const std::string& action, const std::string& name, bool all,
                 const GlobalFlags& g, std::ostream& out, std::ostream& err) {
    if (action == "list") {
        json names = json::array();
        for (const auto& e : corpus()) names.push_back(e.name);
        out << names.dump(2) << "\n";
        return 0;
    }
    if (action != "run") throw std::invalid_argument("examples: expected list or run");
    std::vector<const CorpusExample*> todo;
    if (all) {
        for (const auto& e : corpus()) todo.push_back(&e);
    } else if (!name.empty()) {
        todo.push_back(&corpus_example(name));
    } else {
        throw std::invalid_argument("examples run: expected a name or --all");
    }
    json reports = json::array();
    std::vector<std::string> mismatches;
    for (const auto* e : todo) reports.push_back(run_example(*e, g, mismatches));
    json top{{"reports", std::move(reports)}, {"pass", mismatches.empty()}};
    top["mismatches"] = mismatches;
    out << top.dump(2) << "\n";
    if (!mismatches.empty()) {
        for (const auto& m : mismatches) err << "mismatch: " << m << "\n";
        return 3;
    }
    return 0;
}

} // namespace

TwoParameterProblem load_problem(const std::string& path) {
    json j = load_json(path);
    TwoParameterProblem P;
    P.A1 = matrix_from_json(j.at("W1").at("A"));
    P.B1 = matrix_from_json(j.at("W1").at("B"));
    P.C1 = matrix_from_json(j.at("W1").at("C"));
    P.A2 = matrix_from_json(j.at("W2").at("A"));
    P.B2 = matrix_from_json(j.at("W2").at("B"));
    P.C2 = matrix_from_json(j.at("W2").at("C"));
    P.validate();
    return P;
}

MatrixPencil load_pencil(const std::string& path) {
    json j = load_json(path);
    return {matrix_from_json(j.at("A")), matrix_from_json(j.at("B"))};
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"singular two-parameter eigenvalue problems via operator determinants"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags g;
    double tol = 0.0;
    if (const char* env = std::getenv("SING2EP_TOL")) tol = std::atof(env);
    app.add_option("--tol", tol, "tolerance override (residual/subspace decisions)");
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--rotate", g.rotate, "auto|none|<angle>");
    app.add_option("--format", g.format, "json|text")
        ->check(CLI::IsMember({"json", "text"}));

    std::string path, bundle;
    auto* solve_cmd = app.add_subcommand("solve", "solve a two-parameter problem file");
    solve_cmd->add_option("path", path)->required();
    auto* kcf_cmd = app.add_subcommand("kcf", "Kronecker structure of a pencil file");
    kcf_cmd->add_option("path", path)->required();
    auto* delta_cmd = app.add_subcommand("delta", "operator determinants of a problem file");
    delta_cmd->add_option("path", path)->required();
    auto* strat_cmd = app.add_subcommand("strat", "stratification queries");
    auto* covers_cmd = strat_cmd->add_subcommand("covers", "bundles covering the given one");
    covers_cmd->add_option("bundle", bundle)->required();
    auto* ex_cmd = app.add_subcommand("examples", "built-in corpus: list | run <name> | run --all");
    std::string ex_action, ex_name;
    bool ex_all = false;
    ex_cmd->add_option("action", ex_action)->required();
    ex_cmd->add_option("name", ex_name);
    ex_cmd->add_flag("--all", ex_all);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 1;
    }

    try {
        g.tols = tolerances_with_override(tol);
        if (solve_cmd->parsed()) return cmd_solve(path, g, out);
        if (kcf_cmd->parsed()) return cmd_kcf(path, g, out);
        if (delta_cmd->parsed()) return cmd_delta(path, g, out);
        if (strat_cmd->parsed()) {
            if (!covers_cmd->parsed()) throw std::invalid_argument("strat: expected covers");
            return cmd_strat_covers(bundle, g, out);
        }
        if (ex_cmd->parsed()) return cmd_examples(ex_action, ex_name, ex_all, g, out, err);
        err << "no command given\n";
        return 1;
    } catch (const ToleranceAmbiguity& e) {
        err << "tolerance ambiguity: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace sing2ep
