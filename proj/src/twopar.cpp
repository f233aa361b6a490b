#include "sing2ep/twopar.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace sing2ep {

void TwoParameterProblem::validate() const {
    auto check = [](const CMatrix& M, Index n, const char* what) {
        if (M.rows() != n || M.cols() != n)
            throw std::invalid_argument(std::string("TwoParameterProblem: bad shape for ") + what);
        if (!M.allFinite())
            throw std::invalid_argument(std::string("TwoParameterProblem: non-finite ") + what);
    };
    check(A1, n1(), "A1");
    check(B1, n1(), "B1");
    check(C1, n1(), "C1");
    check(A2, n2(), "A2");
    check(B2, n2(), "B2");
    check(C2, n2(), "C2");
}

Complex BivarPoly::eval(Complex lambda, Complex mu) const {
    Complex acc = 0.0;
    Complex lp = 1.0;
    for (Index j = 0; j < coeff.rows(); ++j) {
        Complex mp = 1.0;
        for (Index k = 0; k < coeff.cols(); ++k) {
            acc += coeff(j, k) * lp * mp;
            mp *= mu;
        }
        lp *= lambda;
    }
    return acc;
}

double BivarPoly::max_abs() const {
    double m = 0.0;
    for (Index j = 0; j < coeff.rows(); ++j)
        for (Index k = 0; k < coeff.cols(); ++k) m = std::max(m, std::abs(coeff(j, k)));
    return m;
}

bool BivarPoly::is_zero(double tol) const { return max_abs() <= tol; }

// ---------------------------------------------------------------------------
// Delta system
// ---------------------------------------------------------------------------

DeltaSystem build_deltas(const TwoParameterProblem& P, Rng& rng, const Tolerances& tols) {
    P.validate();
    DeltaSystem D;
    D.D0 = kron(P.B1, P.C2) - kron(P.C1, P.B2);
    D.D1 = kron(P.C1, P.A2) - kron(P.A1, P.C2);
    D.D2 = kron(P.A1, P.B2) - kron(P.B1, P.A2);

    double scale = std::max({D.D0.norm(), D.D1.norm(), D.D2.norm(), 1.0});
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int probe = 0; probe < 3; ++probe) {
        Complex l(u(rng), u(rng));
        CMatrix lhs = D.D1 - l * D.D0;
        CMatrix rhs = kron(P.C1, P.W2(l, 0.0)) - kron(P.W1(l, 0.0), P.C2);
        if ((lhs - rhs).norm() > 1e-12 * scale * (1.0 + std::abs(l)))
            throw std::runtime_error("build_deltas: operator-determinant identity violated");
    }

    D.nrank1 = normal_rank(D.pencil1(), rng, tols);
    D.nrank2 = normal_rank(D.pencil2(), rng, tols);
    D.R1 = minimal_reducing(D.pencil1(), rng, tols);
    D.R2 = minimal_reducing(D.pencil2(), rng, tols);
    return D;
}

TwoParameterProblem rotate(const TwoParameterProblem& P, RotationAngle phi) {
    double c = std::cos(phi.phi), s = std::sin(phi.phi);
    TwoParameterProblem Q = P;
    Q.B1 = c * P.B1 + s * P.C1;
    Q.C1 = -s * P.B1 + c * P.C1;
    Q.B2 = c * P.B2 + s * P.C2;
    Q.C2 = -s * P.B2 + c * P.C2;
    return Q;
}

std::pair<Complex, Complex> derotate_point(Complex lambda, Complex mu, RotationAngle phi) {
    double c = std::cos(phi.phi), s = std::sin(phi.phi);
    return {c * lambda - s * mu, s * lambda + c * mu};
}

// ---------------------------------------------------------------------------
// characteristic polynomial via roots-of-unity Vandermonde
// ---------------------------------------------------------------------------

namespace {

BivarPoly char_poly_attempt(const TwoParameterProblem& P, int which, double radius) {
    Index n = (which == 1) ? P.n1() : P.n2();
    Index q = n + 1;
    std::vector<Complex> nodes(q);
    for (Index j = 0; j < q; ++j) {
        double a = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(q);
        nodes[j] = radius * Complex(std::cos(a), std::sin(a));
    }
    CMatrix vals(q, q);
    for (Index j = 0; j < q; ++j)
        for (Index k = 0; k < q; ++k) {
            CMatrix W = (which == 1) ? P.W1(nodes[j], nodes[k]) : P.W2(nodes[j], nodes[k]);
            vals(j, k) = W.determinant();
        }
    CMatrix V(q, q);
    for (Index j = 0; j < q; ++j) {
        Complex p = 1.0;
        for (Index k = 0; k < q; ++k) {
            V(j, k) = p;
            p *= nodes[j];
        }
    }
    Eigen::PartialPivLU<CMatrix> lu(V);
    // c = V^-1 * vals * V^-T
    CMatrix C = lu.solve(vals);
    C = lu.solve(C.transpose()).transpose();
    BivarPoly out;
    out.coeff = C;
    double mx = out.max_abs();
    if (mx > 0.0)
        for (Index j = 0; j < q; ++j)
            for (Index k = 0; k < q; ++k)
                if (std::abs(out.coeff(j, k)) < 1e-10 * mx) out.coeff(j, k) = 0.0;
    return out;
}

} // namespace

BivarPoly char_poly(const TwoParameterProblem& P, int i, const Tolerances& tols) {
    if (i != 1 && i != 2) throw std::invalid_argument("char_poly: i must be 1 or 2");
    static const Complex probes[] = {{0.31, 0.52},
                                     {-0.77, 0.11},
                                     {1.13, -0.4},
                                     {0.05, -0.95},
                                     {-0.6, -0.33}};
    for (double radius : {1.0, 1.37}) {
        BivarPoly p = char_poly_attempt(P, i, radius);
        double scale = std::max(p.max_abs(), 1.0);
        bool ok = true;
        for (Complex z : probes) {
            CMatrix W = (i == 1) ? P.W1(z, std::conj(z)) : P.W2(z, std::conj(z));
            if (std::abs(p.eval(z, std::conj(z)) - W.determinant()) > 1e-8 * scale) ok = false;
        }
        if (ok) return p;
    }
    throw ToleranceAmbiguity("char_poly: interpolation residual above tolerance");
}

// ---------------------------------------------------------------------------
// univariate helpers for coprimality / common-factor membership
// ---------------------------------------------------------------------------

namespace {

using Poly = std::vector<Complex>;  // ascending coefficients

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly c(a.size() + b.size() - 1, Complex(0.0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

void poly_trim(Poly& p, double rel = 1e-8) {
    double mx = 0.0;
    for (Complex c : p) mx = std::max(mx, std::abs(c));
    while (p.size() > 1 && std::abs(p.back()) <= rel * mx) p.pop_back();
    if (mx == 0.0) p.assign(1, Complex(0.0));
}

// q(t) = p(a t + b, c t + e)
Poly restrict_line(const BivarPoly& p, Complex a, Complex b, Complex c, Complex e) {
    Index d = p.degree_bound();
    std::vector<Poly> lp(d + 1), mp(d + 1);
    lp[0] = {1.0};
    mp[0] = {1.0};
    for (Index j = 1; j <= d; ++j) {
        lp[j] = poly_mul(lp[j - 1], {b, a});
        mp[j] = poly_mul(mp[j - 1], {e, c});
    }
    Poly q(2 * d + 1, Complex(0.0));
    for (Index j = 0; j <= d; ++j)
        for (Index k = 0; k <= d; ++k) {
            if (p.coeff(j, k) == Complex(0.0)) continue;
            Poly term = poly_mul(lp[j], mp[k]);
            for (size_t t = 0; t < term.size(); ++t) q[t] += p.coeff(j, k) * term[t];
        }
    poly_trim(q);
    return q;
}

// columns are the shifts t^s * q1 (deg u <= du) and t^s * q2 (deg v <= dv);
// nullspace elements are (u, v) with u q1 + v q2 = 0
CMatrix resultant_matrix(const Poly& q1, const Poly& q2, Index du, Index dv) {
    Index m1 = static_cast<Index>(q1.size()) - 1;
    Index m2 = static_cast<Index>(q2.size()) - 1;
    Index rows = std::max(m1 + du, m2 + dv) + 1;
    CMatrix M = CMatrix::Zero(rows, du + dv + 2);
    for (Index s = 0; s <= du; ++s)
        for (Index i = 0; i <= m1; ++i) M(s + i, s) = q1[i];
    for (Index s = 0; s <= dv; ++s)
        for (Index i = 0; i <= m2; ++i) M(s + i, du + 1 + s) = q2[i];
    return M;
}

Index gcd_degree(const Poly& q1, const Poly& q2, const Tolerances& tols) {
    Index m1 = static_cast<Index>(q1.size()) - 1;
    Index m2 = static_cast<Index>(q2.size()) - 1;
    if (m1 == 0 || m2 == 0) return 0;
    CMatrix M = resultant_matrix(q1, q2, m2 - 1, m1 - 1);
    return M.cols() - rank_tol(M, std::max(tols.rank_rel(M.rows(), M.cols()), 1e-10));
}

// approximate gcd of degree k via the minimal-degree cofactor pair
Poly gcd_poly(const Poly& q1, const Poly& q2, Index k, const Tolerances& tols) {
    Index m1 = static_cast<Index>(q1.size()) - 1;
    Index m2 = static_cast<Index>(q2.size()) - 1;
    CMatrix M = resultant_matrix(q1, q2, m2 - k, m1 - k);
    Subspace NS = nullspace(M, std::max(tols.rank_rel(M.rows(), M.cols()), 1e-10));
    if (NS.dim() < 1) throw ToleranceAmbiguity("gcd_poly: cofactor nullspace empty");
    CVector w = NS.basis.col(0);
    Poly v(m1 - k + 1);  // cofactor of q1 (up to sign/scale)
    for (Index i = 0; i <= m1 - k; ++i) v[i] = w(m2 - k + 1 + i);
    poly_trim(v);
    // deconvolve: g solves conv(v, g) = q1 in least squares
    Index dg = m1 - (static_cast<Index>(v.size()) - 1);
    CMatrix Conv = CMatrix::Zero(m1 + 1, dg + 1);
    for (Index s = 0; s <= dg; ++s)
        for (size_t i = 0; i < v.size(); ++i) Conv(s + static_cast<Index>(i), s) = v[i];
    CVector rhs(m1 + 1);
    for (Index i = 0; i <= m1; ++i) rhs(i) = q1[i];
    CVector g = Conv.colPivHouseholderQr().solve(rhs);
    Poly out(g.size());
    for (Index i = 0; i < g.size(); ++i) out[i] = g(i);
    return out;
}

Complex poly_eval(const Poly& p, Complex t) {
    Complex acc = 0.0;
    for (size_t i = p.size(); i-- > 0;) acc = acc * t + p[i];
    return acc;
}

} // namespace

CoprimeReport coprime_test(const BivarPoly& p1, const BivarPoly& p2, Rng& rng,
                           const Tolerances& tols) {
    if (p1.is_zero() || p2.is_zero())
        throw std::invalid_argument("coprime_test: identically zero polynomial");
    auto round_of_lines = [&]() -> std::optional<Index> {
        std::optional<Index> agreed;
        for (int line = 0; line < 3; ++line) {
            Complex a = random_unit_complex(rng), c = random_unit_complex(rng);
            Complex b = 0.7 * random_unit_complex(rng), e = 0.7 * random_unit_complex(rng);
            Poly q1 = restrict_line(p1, a, b, c, e);
            Poly q2 = restrict_line(p2, a, b, c, e);
            Index k = gcd_degree(q1, q2, tols);
            if (line == 0)
                agreed = k;
            else if (agreed != k)
                return std::nullopt;
        }
        return agreed;
    };
    auto k = round_of_lines();
    if (!k) k = round_of_lines();
    if (!k) throw ToleranceAmbiguity("coprime_test: inconsistent gcd degrees across lines");
    return {*k == 0, *k};
}

bool on_common_factor_at(const BivarPoly& p1, const BivarPoly& p2, Complex lambda0,
                         Complex mu0, Index k, Rng& rng, const Tolerances& tols) {
    if (k == 0) return false;
    int votes = 0;
    for (int line = 0; line < 3; ++line) {
        Complex a = random_unit_complex(rng), c = random_unit_complex(rng);
        Poly q1 = restrict_line(p1, a, lambda0, c, mu0);
        Poly q2 = restrict_line(p2, a, lambda0, c, mu0);
        Index kl = gcd_degree(q1, q2, tols);
        if (kl < k) continue;  // degenerate restriction
        Poly g = gcd_poly(q1, q2, kl, tols);
        double mx = 0.0;
        for (Complex cc : g) mx = std::max(mx, std::abs(cc));
        if (mx == 0.0) continue;
        // The restrictions pass through the query point, so a shared root of
        // the two cofactors there contributes t^m with m = kl - k to the gcd
        // even when the common factor itself misses the point. Only a root at
        // t = 0 of order beyond that excess belongs to the common factor.
        Index ord = 0;
        while (ord < static_cast<Index>(g.size()) &&
               std::abs(g[ord]) <= tols.common_factor * mx)
            ++ord;
        if (ord > kl - k) ++votes;
    }
    return votes >= 2;
}

// ---------------------------------------------------------------------------
// solver
// ---------------------------------------------------------------------------

namespace {

double eig_rank_cut(const CMatrix& M, const Tolerances& tols) {
    return std::max(tols.rank_rel(M.rows(), M.cols()), tols.residual);
}

} // namespace

SolveResult solve(const TwoParameterProblem& P, const SolveOptions& opts) {
    P.validate();
    const Tolerances& tols = opts.tols;
    Rng rng(opts.seed);

    double phi = 0.0;
    if (opts.rotate == RotateMode::Auto) {
        std::uniform_real_distribution<double> ang(0.25, 2.0 * M_PI - 0.25);
        phi = ang(rng);
    } else if (opts.rotate == RotateMode::Angle) {
        phi = opts.angle;
    }
    TwoParameterProblem Q = rotate(P, {phi});

    BivarPoly p1 = char_poly(Q, 1, tols);
    BivarPoly p2 = char_poly(Q, 2, tols);
    if (p1.is_zero() || p2.is_zero())
        throw std::invalid_argument("solve: W_i pencil is non-regular (det identically zero)");

    DeltaSystem D = build_deltas(Q, rng, tols);
    auto lam_cands = eigenvalues_regular(D.pencil1(), rng, tols);
    auto mu_cands = eigenvalues_regular(D.pencil2(), rng, tols);
    Subspace R = subspace_union({D.R1, D.R2});
    CoprimeReport cop = coprime_test(p1, p2, rng, tols);

    SolveResult res;
    for (const auto& lc : lam_cands) {
        Subspace ker1 = nullspace(D.pencil1().eval(lc.lambda),
                                  eig_rank_cut(D.D1, tols));
        for (const auto& mc : mu_cands) {
            Subspace ker2 = nullspace(D.pencil2().eval(mc.lambda),
                                      eig_rank_cut(D.D2, tols));
            Subspace K = subspace_intersect(ker1, ker2);
            if (K.dim() == 0) continue;
            CMatrix W = K.basis;
            if (R.dim() > 0) W -= R.basis * (R.basis.adjoint() * W);
            Eigen::JacobiSVD<CMatrix> svd(W, Eigen::ComputeThinV);
            Index surviving = 0;
            for (Index i = 0; i < svd.singularValues().size(); ++i)
                if (svd.singularValues()(i) > tols.subspace) ++surviving;
            if (surviving == 0) continue;

            Eigenvalue2P ev;
            ev.multiplicity_hint = surviving;
            ev.z = K.basis * svd.matrixV().col(0);
            ev.z /= ev.z.norm();
            auto [lam, mu] = derotate_point(lc.lambda, mc.lambda, {phi});
            ev.lambda = lam;
            ev.mu = mu;
            ev.on_common_factor =
                on_common_factor_at(p1, p2, lc.lambda, mc.lambda, cop.common_degree, rng, tols);

            // rank-one split z ~ x1 (x) x2 (row-major reshape)
            Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                           Eigen::RowMajor>>
                Z(ev.z.data(), P.n1(), P.n2());
            Eigen::JacobiSVD<CMatrix> zsvd(CMatrix(Z),
                                           Eigen::ComputeThinU | Eigen::ComputeThinV);
            CVector x1 = zsvd.matrixU().col(0);
            CVector x2 = zsvd.matrixV().col(0).conjugate();
            CMatrix W1 = P.W1(lam, mu), W2 = P.W2(lam, mu);
            double r1 = (W1 * x1).norm() / std::max(W1.norm(), 1e-300);
            double r2 = (W2 * x2).norm() / std::max(W2.norm(), 1e-300);
            if (r1 <= tols.residual && r2 <= tols.residual) {
                ev.x1 = x1;
                ev.x2 = x2;
                ev.residual = std::max(r1, r2);
            }
            res.eigenvalues.push_back(std::move(ev));
        }
    }

    // cluster duplicates (same candidate pair may surface twice)
    std::vector<Eigenvalue2P> unique;
    for (auto& ev : res.eigenvalues) {
        bool dup = false;
        for (const auto& u : unique)
            if (std::abs(ev.lambda - u.lambda) <= tols.cluster * std::max(1.0, std::abs(u.lambda)) &&
                std::abs(ev.mu - u.mu) <= tols.cluster * std::max(1.0, std::abs(u.mu)))
                dup = true;
        if (!dup) unique.push_back(std::move(ev));
    }
    std::sort(unique.begin(), unique.end(), [](const auto& a, const auto& b) {
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
        if (a.lambda.imag() != b.lambda.imag()) return a.lambda.imag() < b.lambda.imag();
        if (a.mu.real() != b.mu.real()) return a.mu.real() < b.mu.real();
        return a.mu.imag() < b.mu.imag();
    });
    res.eigenvalues = std::move(unique);

    res.diagnostics.nrank1 = D.nrank1;
    res.diagnostics.nrank2 = D.nrank2;
    res.diagnostics.kcf1 = to_string(kcf_structure(D.pencil1(), rng, tols));
    res.diagnostics.kcf2 = to_string(kcf_structure(D.pencil2(), rng, tols));
    res.diagnostics.r1_dim = D.R1.dim();
    res.diagnostics.r2_dim = D.R2.dim();
    res.diagnostics.same_bundle =
        same_bundle_structure(parse_structure(res.diagnostics.kcf1),
                              parse_structure(res.diagnostics.kcf2));
    res.diagnostics.coprime = cop.coprime;
    res.diagnostics.common_degree = cop.common_degree;
    res.diagnostics.phi = phi;
    res.diagnostics.seed = opts.seed;
    return res;
}

WEigenvalueVerdict verify_W_eigenvalue(const TwoParameterProblem& P, Complex lambda0,
                                       Complex mu0, Rng& rng, const Tolerances& tols) {
    P.validate();
    WEigenvalueVerdict v;
    BivarPoly p1 = char_poly(P, 1, tols);
    BivarPoly p2 = char_poly(P, 2, tols);
    CoprimeReport cop = coprime_test(p1, p2, rng, tols);
    if (on_common_factor_at(p1, p2, lambda0, mu0, cop.common_degree, rng, tols)) {
        v.on_common_factor = true;
        return v;
    }
    CMatrix W1 = P.W1(lambda0, mu0), W2 = P.W2(lambda0, mu0);
    v.is_W_eigenvalue = rank_tol(W1, eig_rank_cut(W1, tols)) < P.n1() &&
                        rank_tol(W2, eig_rank_cut(W2, tols)) < P.n2();
    return v;
}

GenericityReport check_genericity(const TwoParameterProblem& P, Complex lambda0,
                                  Complex mu0, Rng& rng, const Tolerances& tols) {
    P.validate();
    GenericityReport rep;
    auto regular_probe = [&](const CMatrix& base, const CMatrix& dir) {
        for (int t = 0; t < 3; ++t) {
            Complex xi = random_unit_complex(rng) * 1.1;
            if (std::abs((base - xi * dir).determinant()) > 1e-12) return true;
        }
        return false;
    };
    rep.regular_gamma = regular_probe(P.W1(lambda0, 0.0), P.C1) &&
                        regular_probe(P.W2(lambda0, 0.0), P.C2);
    rep.regular_beta = regular_probe(P.W1(0.0, mu0), P.B1) &&
                       regular_probe(P.W2(0.0, mu0), P.B2);

    double r = tols.neighbourhood;
    auto full_rank_near = [&](bool lambda_side) {
        for (int t = 0; t < 5; ++t) {
            Complex d = r * random_unit_complex(rng);
            CMatrix W1 = lambda_side ? P.W1(lambda0 + d, mu0) : P.W1(lambda0, mu0 + d);
            CMatrix W2 = lambda_side ? P.W2(lambda0 + d, mu0) : P.W2(lambda0, mu0 + d);
            if (rank_tol(W1, eig_rank_cut(W1, tols)) != P.n1()) return false;
            if (rank_tol(W2, eig_rank_cut(W2, tols)) != P.n2()) return false;
        }
        return true;
    };
    rep.full_rank_lambda_perturbed = full_rank_near(true);
    rep.full_rank_mu_perturbed = full_rank_near(false);

    // no other eigenvalue shares a coordinate with the point: a collision
    // at lambda0 means some other mu-candidate forms a second eigenvalue
    // (lambda0, mu'), and symmetrically.  Duplicates inside one candidate
    // list merge into a single cluster, so the mixed point must be probed
    // directly.
    {
        DeltaSystem D = build_deltas(P, rng, tols);
        rep.coordinates_isolated = true;
        auto w_singular = [&](Complex l, Complex m) {
            CMatrix W1 = P.W1(l, m), W2 = P.W2(l, m);
            return rank_tol(W1, eig_rank_cut(W1, tols)) < P.n1() &&
                   rank_tol(W2, eig_rank_cut(W2, tols)) < P.n2();
        };
        auto near = [&](Complex a, Complex b) {
            return std::abs(a - b) <= tols.cluster * std::max(1.0, std::abs(b));
        };
        for (const auto& c : eigenvalues_regular(D.pencil2(), rng, tols))
            if (!near(c.lambda, mu0) && w_singular(lambda0, c.lambda))
                rep.coordinates_isolated = false;
        for (const auto& c : eigenvalues_regular(D.pencil1(), rng, tols))
            if (!near(c.lambda, lambda0) && w_singular(c.lambda, mu0))
                rep.coordinates_isolated = false;
    }

    // strict rank-sum drop against 8 nearby probes
    {
        auto rank_sum = [&](Complex l, Complex m) {
            CMatrix W1 = P.W1(l, m), W2 = P.W2(l, m);
            return rank_tol(W1, eig_rank_cut(W1, tols)) + rank_tol(W2, eig_rank_cut(W2, tols));
        };
        Index at_point = rank_sum(lambda0, mu0);
        rep.rank_sum_drops = true;
        for (int t = 0; t < 8; ++t) {
            double a = 2.0 * M_PI * t / 8.0;
            Complex dl = r * Complex(std::cos(a), std::sin(a));
            Complex dm = r * random_unit_complex(rng);
            if (rank_sum(lambda0 + dl, mu0 + dm) <= at_point) rep.rank_sum_drops = false;
        }
    }
    return rep;
}

bool same_bundle_check(const DeltaSystem& D, Rng& rng, const Tolerances& tols) {
    KroneckerStructure S1 = kcf_structure(D.pencil1(), rng, tols);
    KroneckerStructure S2 = kcf_structure(D.pencil2(), rng, tols);
    return same_bundle_structure(S1, S2);
}

} // namespace sing2ep
