#pragma once
//
// The two-parameter eigenvalue problem W_i(lambda, mu) x_i =
// (A_i + lambda B_i + mu C_i) x_i = 0: operator determinants, rotation
// substitution, characteristic polynomials and coprimality, the solver,
// per-point verification and genericity diagnostics.
//

#include "sing2ep/pencil.hpp"

#include <cstdint>
#include <optional>

namespace sing2ep {

struct TwoParameterProblem {
    CMatrix A1, B1, C1;  // n1 x n1
    CMatrix A2, B2, C2;  // n2 x n2

    Index n1() const { return A1.rows(); }
    Index n2() const { return A2.rows(); }
    CMatrix W1(Complex lambda, Complex mu) const { return A1 + lambda * B1 + mu * C1; }
    CMatrix W2(Complex lambda, Complex mu) const { return A2 + lambda * B2 + mu * C2; }
    void validate() const;  // squares, consistent shapes, finite entries
};

struct DeltaSystem {
    CMatrix D0, D1, D2;   // n1n2 x n1n2
    Index nrank1 = 0, nrank2 = 0;
    Subspace R1, R2;      // minimal reducing subspaces of (D1, D0), (D2, D0)

    MatrixPencil pencil1() const { return {D1, D0}; }
    MatrixPencil pencil2() const { return {D2, D0}; }
};

/// Dense coefficient grid c(j,k) of sum c_jk lambda^j mu^k.
struct BivarPoly {
    CMatrix coeff;  // (d+1) x (d+1)

    Index degree_bound() const { return coeff.rows() - 1; }
    Complex eval(Complex lambda, Complex mu) const;
    double max_abs() const;
    bool is_zero(double tol = 1e-10) const;
};

struct Eigenvalue2P {
    Complex lambda, mu;
    std::optional<CVector> x1, x2;  // present when the rank-one split verified
    CVector z;                      // unit regular eigenvector of the Delta system
    bool on_common_factor = false;
    Index multiplicity_hint = 0;    // dim of ker-intersection directions outside R1 u R2
    double residual = 0.0;          // max_i ||W_i x_i|| / ||W_i||, when x_i present
};

struct RotationAngle {
    double phi = 0.0;
};

/// Kronecker combinations D0 = B1(x)C2 - C1(x)B2, D1 = C1(x)A2 - A1(x)C2,
/// D2 = A1(x)B2 - B1(x)A2, with cached normal ranks and minimal reducing
/// subspaces. The identity D1 - lambda*D0 = C1(x)W2(lambda,0) -
/// W1(lambda,0)(x)C2 is verified at random lambda.
DeltaSystem build_deltas(const TwoParameterProblem& P, Rng& rng,
                         const Tolerances& tols = {});

/// B~ = cos(phi) B + sin(phi) C, C~ = -sin(phi) B + cos(phi) C.
TwoParameterProblem rotate(const TwoParameterProblem& P, RotationAngle phi);

/// Map an eigenvalue of the rotated problem back to original coordinates.
std::pair<Complex, Complex> derotate_point(Complex lambda, Complex mu, RotationAngle phi);

/// Coefficients of det(W_i(lambda, mu)) via evaluation on a tensor grid of
/// roots of unity and Vandermonde solves.
BivarPoly char_poly(const TwoParameterProblem& P, int i, const Tolerances& tols = {});

struct CoprimeReport {
    bool coprime = true;
    Index common_degree = 0;
};

/// Degree of the common factor of p1, p2, from Sylvester rank deficiency on
/// random affine-line restrictions.
CoprimeReport coprime_test(const BivarPoly& p1, const BivarPoly& p2, Rng& rng,
                           const Tolerances& tols = {});

/// True when (lambda0, mu0) annihilates the detected common factor of p1, p2
/// (extracted along random lines through the point); k = global common degree.
bool on_common_factor_at(const BivarPoly& p1, const BivarPoly& p2, Complex lambda0,
                         Complex mu0, Index k, Rng& rng, const Tolerances& tols = {});

enum class RotateMode { Auto, None, Angle };

struct SolveOptions {
    RotateMode rotate = RotateMode::Auto;
    double angle = 0.0;          // used when rotate == Angle
    std::uint64_t seed = 12345;
    Tolerances tols{};
};

struct SolveDiagnostics {
    Index nrank1 = 0, nrank2 = 0;
    std::string kcf1, kcf2;      // of D1 - lambda D0 and D2 - mu D0 (rotated frame)
    Index r1_dim = 0, r2_dim = 0;
    bool same_bundle = false;
    bool coprime = true;
    Index common_degree = 0;
    double phi = 0.0;
    std::uint64_t seed = 0;
};

struct SolveResult {
    std::vector<Eigenvalue2P> eigenvalues;
    SolveDiagnostics diagnostics;
};

/// Candidate lambda/mu lists from the Delta pencils, all-pairs kernel
/// intersection, deflation against R1 u R2, rank-one eigenvector recovery,
/// de-rotation, common-factor flagging.
SolveResult solve(const TwoParameterProblem& P, const SolveOptions& opts = {});

struct WEigenvalueVerdict {
    bool on_common_factor = false;
    bool is_W_eigenvalue = false;  // meaningful when not on a common factor
};

WEigenvalueVerdict verify_W_eigenvalue(const TwoParameterProblem& P, Complex lambda0,
                                       Complex mu0, Rng& rng,
                                       const Tolerances& tols = {});

struct GenericityReport {
    bool regular_gamma = false;      // W_i(l0, 0) - gamma C_i regular, i = 1, 2
    bool regular_beta = false;       // W_i(0, m0) - beta B_i regular
    bool full_rank_lambda_perturbed = false;  // rank W_i(eta, m0) = n_i near l0
    bool full_rank_mu_perturbed = false;      // rank W_i(l0, nu) = n_i near m0
    bool coordinates_isolated = false;        // no other candidate shares l0 or m0
    bool rank_sum_drops = false;     // sum rank W_i strictly lower at the point
    bool all() const {
        return regular_gamma && regular_beta && full_rank_lambda_perturbed &&
               full_rank_mu_perturbed && coordinates_isolated && rank_sum_drops;
    }
};

GenericityReport check_genericity(const TwoParameterProblem& P, Complex lambda0,
                                  Complex mu0, Rng& rng, const Tolerances& tols = {});

/// Bundle equality of the Kronecker structures of the two Delta pencils.
bool same_bundle_check(const DeltaSystem& D, Rng& rng, const Tolerances& tols = {});

} // namespace sing2ep
