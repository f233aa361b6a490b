#include "sing2ep/pencil.hpp"

#include "zggev.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace sing2ep {

MatrixPencil::MatrixPencil(CMatrix a, CMatrix b) : A(std::move(a)), B(std::move(b)) {
    if (A.rows() != B.rows() || A.cols() != B.cols())
        throw std::invalid_argument("MatrixPencil: shape mismatch");
    if (!A.allFinite() || !B.allFinite())
        throw std::invalid_argument("MatrixPencil: non-finite entries");
}

double MatrixPencil::scale() const {
    double s = std::max(A.norm(), B.norm());
    return s > 0.0 ? s : 1.0;
}

Index KroneckerBlock::rows() const {
    switch (kind) {
        case BlockKind::FiniteRegular:
        case BlockKind::InfiniteRegular: return size;
        case BlockKind::RightSingular: return size;
        case BlockKind::LeftSingular: return size + 1;
    }
    return 0;
}

Index KroneckerBlock::cols() const {
    switch (kind) {
        case BlockKind::FiniteRegular:
        case BlockKind::InfiniteRegular: return size;
        case BlockKind::RightSingular: return size + 1;
        case BlockKind::LeftSingular: return size;
    }
    return 0;
}

Index KroneckerStructure::num_right_singular() const {
    return std::count_if(blocks.begin(), blocks.end(), [](const KroneckerBlock& b) {
        return b.kind == BlockKind::RightSingular;
    });
}

Index KroneckerStructure::num_left_singular() const {
    return std::count_if(blocks.begin(), blocks.end(), [](const KroneckerBlock& b) {
        return b.kind == BlockKind::LeftSingular;
    });
}

std::vector<Index> KroneckerStructure::right_minimal_indices() const {
    std::vector<Index> out;
    for (const auto& b : blocks)
        if (b.kind == BlockKind::RightSingular) out.push_back(b.size);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Index> KroneckerStructure::left_minimal_indices() const {
    std::vector<Index> out;
    for (const auto& b : blocks)
        if (b.kind == BlockKind::LeftSingular) out.push_back(b.size);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Index> KroneckerStructure::infinite_segre() const {
    std::vector<Index> out;
    for (const auto& b : blocks)
        if (b.kind == BlockKind::InfiniteRegular) out.push_back(b.size);
    std::sort(out.rbegin(), out.rend());
    return out;
}

std::vector<std::pair<Complex, std::vector<Index>>> KroneckerStructure::finite_eigen_groups(
    double cluster_tol) const {
    std::vector<std::pair<Complex, std::vector<Index>>> groups;
    for (const auto& b : blocks) {
        if (b.kind != BlockKind::FiniteRegular) continue;
        bool placed = false;
        for (auto& [alpha, sizes] : groups) {
            if (std::abs(alpha - b.alpha) <= cluster_tol * std::max(1.0, std::abs(alpha))) {
                sizes.push_back(b.size);
                placed = true;
                break;
            }
        }
        if (!placed) groups.push_back({b.alpha, {b.size}});
    }
    for (auto& [alpha, sizes] : groups) std::sort(sizes.rbegin(), sizes.rend());
    // order by eigenvalue, real part descending then imaginary descending
    std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
        if (a.first.real() != b.first.real()) return a.first.real() > b.first.real();
        return a.first.imag() > b.first.imag();
    });
    return groups;
}

bool KroneckerStructure::tiles() const {
    Index rows = 0, cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    return rows == m && cols == n;
}

KroneckerStructure KroneckerStructure::from_blocks(std::vector<KroneckerBlock> blocks) {
    KroneckerStructure s;
    s.blocks = std::move(blocks);
    for (const auto& b : s.blocks) {
        s.m += b.rows();
        s.n += b.cols();
    }
    return s;
}

namespace {

std::string format_double(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, p);
}

// Snap near-integer components so canonical strings are stable for the
// integer-entry problems this renders.
double snap(double x) {
    double r = std::round(x);
    if (std::abs(x - r) <= 1e-6 * std::max(1.0, std::abs(x))) return r == 0.0 ? 0.0 : r;
    return x;
}

std::string format_complex(Complex z) {
    double re = snap(z.real()), im = snap(z.imag());
    if (im == 0.0) return format_double(re);
    std::string s = format_double(re);
    s += (im < 0.0 ? "-" : "+");
    s += format_double(std::abs(im));
    s += "i";
    return s;
}

std::string block_token(const KroneckerBlock& b) {
    std::ostringstream os;
    switch (b.kind) {
        case BlockKind::FiniteRegular:
            os << "J" << b.size << "(" << format_complex(b.alpha) << ")";
            break;
        case BlockKind::InfiniteRegular: os << "N" << b.size; break;
        case BlockKind::RightSingular: os << "L" << b.size; break;
        case BlockKind::LeftSingular: os << "L" << b.size << "T"; break;
    }
    return os.str();
}

} // namespace

std::string to_string(const KroneckerStructure& s) {
    // canonical order: right singular (size asc), left singular (size asc),
    // finite groups (eigenvalue desc by re then im; sizes desc), infinite (desc)
    std::vector<std::string> tokens;
    for (Index d : s.right_minimal_indices())
        tokens.push_back(block_token({BlockKind::RightSingular, d, {}}));
    for (Index d : s.left_minimal_indices())
        tokens.push_back(block_token({BlockKind::LeftSingular, d, {}}));
    for (const auto& [alpha, sizes] : s.finite_eigen_groups())
        for (Index d : sizes)
            tokens.push_back(block_token({BlockKind::FiniteRegular, d, alpha}));
    for (Index d : s.infinite_segre())
        tokens.push_back(block_token({BlockKind::InfiniteRegular, d, {}}));

    std::string out;
    for (size_t i = 0; i < tokens.size();) {
        size_t j = i;
        while (j < tokens.size() && tokens[j] == tokens[i]) ++j;
        if (!out.empty()) out += "+";
        if (j - i > 1) out += std::to_string(j - i) + "*";
        out += tokens[i];
        i = j;
    }
    if (out.empty()) out = "empty";
    return out;
}

namespace {

double parse_double(std::string_view& sv) {
    const char* begin = sv.data();
    const char* end = sv.data() + sv.size();
    double x = 0;
    auto [p, ec] = std::from_chars(begin, end, x);
    if (ec != std::errc{}) throw std::invalid_argument("structure grammar: bad number");
    sv.remove_prefix(p - begin);
    return x;
}

Complex parse_complex(std::string_view text) {
    std::string_view sv = text;
    double re = parse_double(sv);
    if (sv.empty()) return Complex(re, 0.0);
    char sign = sv.front();
    if (sign != '+' && sign != '-')
        throw std::invalid_argument("structure grammar: bad complex literal");
    sv.remove_prefix(1);
    double im = parse_double(sv);
    if (sv != "i") throw std::invalid_argument("structure grammar: bad complex literal");
    return Complex(re, sign == '-' ? -im : im);
}

KroneckerBlock parse_block(std::string_view tok) {
    if (tok.empty()) throw std::invalid_argument("structure grammar: empty token");
    KroneckerBlock b;
    char kind = tok.front();
    tok.remove_prefix(1);
    Index d = 0;
    {
        const char* begin = tok.data();
        auto [p, ec] = std::from_chars(begin, begin + tok.size(), d);
        if (ec != std::errc{}) throw std::invalid_argument("structure grammar: bad size");
        tok.remove_prefix(p - begin);
    }
    b.size = d;
    switch (kind) {
        case 'J': {
            if (tok.size() < 3 || tok.front() != '(' || tok.back() != ')')
                throw std::invalid_argument("structure grammar: J needs an eigenvalue");
            b.kind = BlockKind::FiniteRegular;
            b.alpha = parse_complex(tok.substr(1, tok.size() - 2));
            if (d < 1) throw std::invalid_argument("structure grammar: J size >= 1");
            break;
        }
        case 'N':
            if (!tok.empty() || d < 1) throw std::invalid_argument("structure grammar: bad N");
            b.kind = BlockKind::InfiniteRegular;
            break;
        case 'L':
            if (tok == "T")
                b.kind = BlockKind::LeftSingular;
            else if (tok.empty())
                b.kind = BlockKind::RightSingular;
            else
                throw std::invalid_argument("structure grammar: bad L token");
            break;
        default:
            throw std::invalid_argument("structure grammar: unknown block kind");
    }
    return b;
}

} // namespace

KroneckerStructure parse_structure(std::string_view text) {
    std::vector<KroneckerBlock> blocks;
    if (text == "empty") return KroneckerStructure::from_blocks({});
    size_t pos = 0;
    int depth = 0;
    size_t start = 0;
    auto flush = [&](size_t end) {
        std::string_view tok = text.substr(start, end - start);
        if (tok.empty()) throw std::invalid_argument("structure grammar: empty token");
        Index mult = 1;
        if (auto star = tok.find('*'); star != std::string_view::npos) {
            const char* begin = tok.data();
            auto [p, ec] = std::from_chars(begin, begin + star, mult);
            if (ec != std::errc{} || p != begin + star || mult < 1)
                throw std::invalid_argument("structure grammar: bad multiplicity");
            tok.remove_prefix(star + 1);
        }
        KroneckerBlock b = parse_block(tok);
        for (Index i = 0; i < mult; ++i) blocks.push_back(b);
    };
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == '+' && depth == 0) {
            flush(pos);
            start = pos + 1;
        }
    }
    flush(text.size());
    return KroneckerStructure::from_blocks(std::move(blocks));
}

namespace {

bool same_partition_multiset(std::vector<std::vector<Index>> a,
                             std::vector<std::vector<Index>> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

} // namespace

bool same_structure(const KroneckerStructure& a, const KroneckerStructure& b,
                    double eig_tol) {
    if (a.m != b.m || a.n != b.n) return false;
    if (a.right_minimal_indices() != b.right_minimal_indices()) return false;
    if (a.left_minimal_indices() != b.left_minimal_indices()) return false;
    if (a.infinite_segre() != b.infinite_segre()) return false;
    auto ga = a.finite_eigen_groups(eig_tol);
    auto gb = b.finite_eigen_groups(eig_tol);
    if (ga.size() != gb.size()) return false;
    std::vector<bool> used(gb.size(), false);
    for (const auto& [alpha, sizes] : ga) {
        bool matched = false;
        for (size_t j = 0; j < gb.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(alpha - gb[j].first) <= eig_tol * std::max(1.0, std::abs(alpha)) &&
                sizes == gb[j].second) {
                used[j] = true;
                matched = true;
                break;
            }
        }
        if (!matched) return false;
    }
    return true;
}

bool same_bundle_structure(const KroneckerStructure& a, const KroneckerStructure& b) {
    if (a.m != b.m || a.n != b.n) return false;
    if (a.right_minimal_indices() != b.right_minimal_indices()) return false;
    if (a.left_minimal_indices() != b.left_minimal_indices()) return false;
    if (a.infinite_segre() != b.infinite_segre()) return false;
    std::vector<std::vector<Index>> pa, pb;
    for (const auto& [alpha, sizes] : a.finite_eigen_groups()) pa.push_back(sizes);
    for (const auto& [alpha, sizes] : b.finite_eigen_groups()) pb.push_back(sizes);
    return same_partition_multiset(pa, pb);
}

CVector MinimalBasisVector::eval(Complex lambda) const {
    CVector v = CVector::Zero(coeffs.front().size());
    Complex p = 1.0;
    for (const auto& c : coeffs) {
        v += p * c;
        p *= lambda;
    }
    return v;
}

// ---------------------------------------------------------------------------
// normal rank
// ---------------------------------------------------------------------------

namespace {

Complex random_probe_point(Rng& rng) {
    std::uniform_real_distribution<double> mag(0.5, 1.5);
    return mag(rng) * random_unit_complex(rng);
}

} // namespace

Index normal_rank(const MatrixPencil& P, Rng& rng, const Tolerances& tols) {
    auto sample3 = [&]() -> std::optional<Index> {
        Index r0 = rank_tol(P.eval(random_probe_point(rng)), tols);
        Index r1 = rank_tol(P.eval(random_probe_point(rng)), tols);
        Index r2 = rank_tol(P.eval(random_probe_point(rng)), tols);
        if (r0 == r1 && r1 == r2) return r0;
        return std::nullopt;
    };
    if (auto r = sample3()) return *r;
    if (auto r = sample3()) return *r;
    throw ToleranceAmbiguity("normal_rank: tolerance ambiguity (rank disagrees across 6 samples)");
}

// ---------------------------------------------------------------------------
// minimal basis via block-Toeplitz nullspaces
// ---------------------------------------------------------------------------

namespace {

// Coefficient map of p -> (A - lambda B) p(lambda) for deg(p) <= k:
// (k+2)m x (k+1)n with A on the diagonal and -B shifted one block down.
CMatrix toeplitz_poly(const MatrixPencil& P, Index k) {
    Index m = P.rows(), n = P.cols();
    CMatrix T = CMatrix::Zero((k + 2) * m, (k + 1) * n);
    for (Index j = 0; j <= k; ++j) {
        T.block(j * m, j * n, m, n) = P.A;
        T.block((j + 1) * m, j * n, m, n) = -P.B;
    }
    return T;
}

Index normal_rank_deterministic(const MatrixPencil& P, const Tolerances& tols) {
    // fixed probe points; minimal_basis has no rng in its contract
    static const Complex probes[] = {{0.6123, 0.7911}, {-0.3771, 0.2043}, {1.2707, -0.9331}};
    Index r = 0;
    for (Complex xi : probes) r = std::max(r, rank_tol(P.eval(xi), tols));
    return r;
}

} // namespace

std::vector<MinimalBasisVector> minimal_basis(const MatrixPencil& P,
                                              const Tolerances& tols) {
    Index n = P.cols();
    Index s = n - normal_rank_deterministic(P, tols);
    std::vector<MinimalBasisVector> result;
    if (s == 0) return result;

    Index prev_nullity = 0;
    Index prev_count = 0;  // c_{k-1} = number of minimal indices <= k-1
    for (Index k = 0; static_cast<Index>(result.size()) < s && k <= n; ++k) {
        CMatrix T = toeplitz_poly(P, k);
        Subspace NS = nullspace(T, tols);
        Index nu = NS.dim();
        Index count = nu - prev_nullity;        // number of indices <= k
        Index fresh = count - prev_count;        // number of indices == k
        prev_nullity = nu;
        prev_count = count;
        if (fresh <= 0) continue;

        // span of lambda^o * p for already-found p (all polynomial solutions
        // of degree < k)
        Index shift_cols = 0;
        for (const auto& v : result) shift_cols += k - v.degree() + 1;
        CMatrix shifts = CMatrix::Zero((k + 1) * n, shift_cols);
        Index c = 0;
        for (const auto& v : result) {
            Index d = v.degree();
            for (Index o = 0; o + d <= k; ++o, ++c)
                for (Index i = 0; i <= d; ++i)
                    shifts.block((o + i) * n, c, n, 1) = v.coeffs[i];
        }
        CMatrix W = NS.basis;
        if (shift_cols > 0) {
            Subspace Q = Subspace::from_span(shifts, tols.subspace);
            W -= Q.basis * (Q.basis.adjoint() * W);
        }
        Eigen::JacobiSVD<CMatrix> svd(W, Eigen::ComputeThinU);
        for (Index i = 0; i < fresh; ++i) {
            CVector stacked = svd.matrixU().col(i);
            // clean up: project back onto the computed nullspace
            stacked = NS.basis * (NS.basis.adjoint() * stacked);
            stacked /= stacked.norm();
            MinimalBasisVector v;
            for (Index j = 0; j <= k; ++j) v.coeffs.push_back(stacked.segment(j * n, n));
            result.push_back(std::move(v));
        }
    }
    if (static_cast<Index>(result.size()) != s)
        throw ToleranceAmbiguity("minimal_basis: found " + std::to_string(result.size()) +
                                 " vectors, expected " + std::to_string(s));
    std::sort(result.begin(), result.end(),
              [](const auto& a, const auto& b) { return a.degree() < b.degree(); });
    return result;
}

Subspace generic_kernel(const MatrixPencil& P, Complex lambda0, const Tolerances& tols) {
    auto basis = minimal_basis(P, tols);
    CMatrix span(P.cols(), static_cast<Index>(basis.size()));
    for (size_t i = 0; i < basis.size(); ++i) span.col(i) = basis[i].eval(lambda0);
    return Subspace::from_span(span, tols.subspace);
}

Subspace minimal_reducing(const MatrixPencil& P, Rng& rng, const Tolerances& tols) {
    auto basis = minimal_basis(P, tols);
    if (basis.empty()) return Subspace::zero(P.cols(), tols.subspace);

    // route (i): span of all coefficient vectors
    Index total = 0;
    for (const auto& v : basis) total += v.degree() + 1;
    CMatrix span(P.cols(), total);
    Index c = 0;
    for (const auto& v : basis)
        for (const auto& coeff : v.coeffs) span.col(c++) = coeff;
    Subspace direct = Subspace::from_span(span, tols.subspace);

    // route (ii): union of generic kernels at (max index + 2) random shifts
    Index max_deg = basis.back().degree();
    std::vector<Subspace> kernels;
    for (Index i = 0; i < max_deg + 2; ++i) {
        Complex xi = random_probe_point(rng);
        CMatrix gk(P.cols(), static_cast<Index>(basis.size()));
        for (size_t j = 0; j < basis.size(); ++j) gk.col(j) = basis[j].eval(xi);
        kernels.push_back(Subspace::from_span(gk, tols.subspace));
    }
    Subspace unioned = subspace_union(kernels);
    if (unioned.dim() != direct.dim())
        throw ToleranceAmbiguity("minimal_reducing: tolerance ambiguity (union dim " +
                                 std::to_string(unioned.dim()) + " vs coefficient span dim " +
                                 std::to_string(direct.dim()) + ")");
    return direct;
}

// ---------------------------------------------------------------------------
// eigenvalues of (possibly singular) pencils: twice-projected QZ
// ---------------------------------------------------------------------------

namespace {

// Cross-run matching/cluster radius. Eigenvalues of defective blocks J_d come
// back from QZ as a ring of radius ~eps^(1/d); the cluster mean restores the
// accuracy, so the radius here is much looser than the final reporting
// tolerance.
constexpr double kDefectiveRadius = 2e-2;

// Candidates beyond this magnitude are treated as infinite: defective
// infinite blocks N_d shatter under QZ into huge finite values ~eps^(-1/d).
constexpr double kFiniteCap = 1e6;

// Rank of A - lambda*B with the cutoff tied to the pencil scale rather than
// to the evaluated matrix: at an eigenvalue with a complete rank collapse the
// evaluation is pure roundoff, and a cutoff relative to its own sigma_max
// would still report full rank. Normalizing by max(1, |lambda|) keeps the
// decision meaningful for large candidates.
Index eval_rank(const MatrixPencil& P, Complex lambda, double tol) {
    double s = std::max(1.0, std::abs(lambda));
    CMatrix M = P.eval(lambda) / s;
    auto sv = singular_values(M);
    double cutoff = tol * std::max(sv.empty() ? 0.0 : sv[0], P.scale());
    Index r = 0;
    for (double v : sv)
        if (v > cutoff) ++r;
    return r;
}

Subspace eval_nullspace(const MatrixPencil& P, Complex lambda, double tol) {
    double s = std::max(1.0, std::abs(lambda));
    CMatrix M = P.eval(lambda) / s;
    Eigen::JacobiSVD<CMatrix> svd(M, Eigen::ComputeFullV);
    double smax = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
    double cutoff = tol * std::max(smax, P.scale());
    Index r = 0;
    for (Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > cutoff) ++r;
    return Subspace(M.cols(), svd.matrixV().rightCols(M.cols() - r));
}

std::vector<Complex> finite_eigenvalues_qz(const CMatrix& A, const CMatrix& B) {
    std::vector<Complex> out;
    for (auto [alpha, beta] : generalized_eigenvalues(A, B)) {
        double denom = std::abs(alpha) + std::abs(beta);
        if (denom == 0.0) continue;  // 0/0: singular projected pencil
        if (std::abs(beta) <= 1e-10 * denom) continue;  // infinite
        out.push_back(alpha / beta);
    }
    return out;
}

} // namespace

std::vector<PencilEigenvalue> projected_eigenvalues(const MatrixPencil& P, Index r,
                                                    Index s, Rng& rng,
                                                    const Tolerances& tols) {
    if (r == 0) return {};
    Index m = P.rows(), n = P.cols();

    std::vector<Complex> runs[2];
    for (int run = 0; run < 2; ++run) {
        bool ok = false;
        for (int attempt = 0; attempt < 4 && !ok; ++attempt) {
            // random projectors even in the square full-rank case: the two
            // runs must be independent so projection artifacts (e.g. shattered
            // defective infinite eigenvalues) fail to match across them
            CMatrix U = random_orthonormal(m, r, rng);
            CMatrix V = random_orthonormal(n, r, rng);
            CMatrix pa = U.adjoint() * P.A * V;
            CMatrix pb = U.adjoint() * P.B * V;
            if (rank_tol(pa - random_probe_point(rng) * pb, tols) < r) continue;
            runs[run] = finite_eigenvalues_qz(pa, pb);
            ok = true;
        }
        if (!ok)
            throw ToleranceAmbiguity("projected_eigenvalues: projected pencil singular after retries");
    }

    // keep values present in both runs, then cluster and average
    double radius = std::max(tols.cluster, kDefectiveRadius);
    std::vector<Complex> matched;
    for (Complex la : runs[0]) {
        for (Complex lb : runs[1]) {
            if (std::abs(la - lb) <= radius * std::max(1.0, std::abs(la))) {
                matched.push_back(la);
                break;
            }
        }
    }
    std::vector<std::vector<Complex>> clusters;
    for (Complex l : matched) {
        bool placed = false;
        for (auto& cl : clusters) {
            if (std::abs(l - cl.front()) <= radius * std::max(1.0, std::abs(cl.front()))) {
                cl.push_back(l);
                placed = true;
                break;
            }
        }
        if (!placed) clusters.push_back({l});
    }

    // Confirm each cluster by a rank drop at its mean. A spurious QZ value can
    // land inside the loose matching radius of a genuine eigenvalue and drag
    // the mean off target, so on failure retry with the outliers (members
    // farthest from the component-wise median) trimmed away.
    double eig_tol = std::max(tols.rank_rel(m, n), tols.residual);
    std::vector<PencilEigenvalue> out;
    for (auto cl : clusters) {
        std::vector<double> re, im;
        for (Complex l : cl) {
            re.push_back(l.real());
            im.push_back(l.imag());
        }
        std::nth_element(re.begin(), re.begin() + re.size() / 2, re.end());
        std::nth_element(im.begin(), im.begin() + im.size() / 2, im.end());
        Complex med(re[re.size() / 2], im[im.size() / 2]);
        std::sort(cl.begin(), cl.end(), [med](Complex a, Complex b) {
            return std::abs(a - med) < std::abs(b - med);
        });
        while (!cl.empty()) {
            Complex mean = 0.0;
            for (Complex l : cl) mean += l;
            mean /= static_cast<double>(cl.size());
            if (std::abs(mean) > kFiniteCap) break;
            Index rank0 = eval_rank(P, mean, eig_tol);
            if (rank0 < r) {
                out.push_back({mean, (n - rank0) - s});
                break;
            }
            cl.pop_back();
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() > b.lambda.real();
        return a.lambda.imag() > b.lambda.imag();
    });
    return out;
}

std::vector<PencilEigenvalue> eigenvalues_regular(const MatrixPencil& P, Rng& rng,
                                                  const Tolerances& tols) {
    if (P.rows() != P.cols())
        throw std::invalid_argument("eigenvalues_regular: square pencil required");
    Index r = normal_rank(P, rng, tols);
    return projected_eigenvalues(P, r, P.cols() - r, rng, tols);
}

// ---------------------------------------------------------------------------
// five-way eigenvalue equivalence (conditions b..e)
// ---------------------------------------------------------------------------

bool EigenvalueEquivReport::all_agree() const {
    return rank_drop == gker_smaller && gker_smaller == kernel_outside_gker &&
           kernel_outside_gker == kernel_outside_reducing;
}

namespace {

bool has_direction_outside(const Subspace& inside, const Subspace& outside, double tol) {
    if (inside.dim() == 0) return false;
    CMatrix W = inside.basis;
    if (outside.dim() > 0) W -= outside.basis * (outside.basis.adjoint() * W);
    Eigen::JacobiSVD<CMatrix> svd(W);
    return svd.singularValues().size() > 0 && svd.singularValues()(0) > tol;
}

} // namespace

EigenvalueEquivReport is_eigenvalue_equiv(const MatrixPencil& P, Complex lambda0,
                                          Rng& rng, const Tolerances& tols) {
    if (P.rows() != P.cols())
        throw std::invalid_argument("is_eigenvalue_equiv: square pencil required");
    Index r = normal_rank(P, rng, tols);
    double eig_rank_tol = std::max(tols.rank_rel(P.rows(), P.cols()), tols.residual);
    Subspace ker = eval_nullspace(P, lambda0, eig_rank_tol);
    Subspace gker = generic_kernel(P, lambda0, tols);
    Subspace reducing = minimal_reducing(P, rng, tols);

    EigenvalueEquivReport rep;
    rep.rank_drop = eval_rank(P, lambda0, eig_rank_tol) < r;
    rep.gker_smaller = gker.dim() < ker.dim();
    rep.kernel_outside_gker = has_direction_outside(ker, gker, tols.subspace);
    rep.kernel_outside_reducing = has_direction_outside(ker, reducing, tols.subspace);
    return rep;
}

// ---------------------------------------------------------------------------
// canonical blocks and synthesis
// ---------------------------------------------------------------------------

MatrixPencil canonical_block(const KroneckerBlock& b) {
    Index d = b.size;
    switch (b.kind) {
        case BlockKind::FiniteRegular: {
            CMatrix A = CMatrix::Zero(d, d), B = CMatrix::Identity(d, d);
            for (Index i = 0; i < d; ++i) A(i, i) = b.alpha;
            for (Index i = 0; i + 1 < d; ++i) A(i, i + 1) = 1.0;
            return {A, B};
        }
        case BlockKind::InfiniteRegular: {
            CMatrix A = CMatrix::Identity(d, d), B = CMatrix::Zero(d, d);
            for (Index i = 0; i + 1 < d; ++i) B(i, i + 1) = 1.0;
            return {A, B};
        }
        case BlockKind::RightSingular: {
            CMatrix A = CMatrix::Zero(d, d + 1), B = CMatrix::Zero(d, d + 1);
            for (Index i = 0; i < d; ++i) {
                A(i, i + 1) = 1.0;
                B(i, i) = 1.0;
            }
            return {A, B};
        }
        case BlockKind::LeftSingular: {
            CMatrix A = CMatrix::Zero(d + 1, d), B = CMatrix::Zero(d + 1, d);
            for (Index i = 0; i < d; ++i) {
                A(i + 1, i) = 1.0;
                B(i, i) = 1.0;
            }
            return {A, B};
        }
    }
    throw std::logic_error("canonical_block: unreachable");
}

MatrixPencil synth_pencil(const KroneckerStructure& S, Rng& rng) {
    if (!S.tiles()) throw std::invalid_argument("synth_pencil: structure does not tile m x n");
    CMatrix A = CMatrix::Zero(S.m, S.n), B = CMatrix::Zero(S.m, S.n);
    Index r = 0, c = 0;
    for (const auto& b : S.blocks) {
        MatrixPencil blk = canonical_block(b);
        A.block(r, c, blk.rows(), blk.cols()) = blk.A;
        B.block(r, c, blk.rows(), blk.cols()) = blk.B;
        r += blk.rows();
        c += blk.cols();
    }
    CMatrix P = random_well_conditioned(S.m, rng);
    CMatrix Q = random_well_conditioned(S.n, rng);
    return {P * A * Q, P * B * Q};
}

// ---------------------------------------------------------------------------
// staircase nullity (shared with kcf.cpp / chains.cpp)
// ---------------------------------------------------------------------------

CMatrix staircase_matrix(const MatrixPencil& P, Complex alpha, Index k) {
    Index m = P.rows(), n = P.cols();
    CMatrix M = P.eval(alpha);
    CMatrix T = CMatrix::Zero(k * m, k * n);
    for (Index j = 0; j < k; ++j) {
        T.block(j * m, j * n, m, n) = M;
        if (j > 0) T.block(j * m, (j - 1) * n, m, n) = P.B;
    }
    return T;
}

Index staircase_nullity(const MatrixPencil& P, Complex alpha, Index k,
                        const Tolerances& tols) {
    CMatrix T = staircase_matrix(P, alpha, k);
    double tol = std::max(tols.rank_rel(T.rows(), T.cols()), tols.residual);
    // cutoff tied to the pencil scale: at an eigenvalue with a complete rank
    // collapse the diagonal blocks are pure roundoff
    auto sv = singular_values(T);
    double smax = sv.empty() ? 0.0 : sv[0];
    double cutoff = tol * std::max(smax, P.scale() * std::max(1.0, std::abs(alpha)));
    Index r = 0;
    for (double v : sv)
        if (v > cutoff) ++r;
    return k * P.cols() - r;
}

} // namespace sing2ep
