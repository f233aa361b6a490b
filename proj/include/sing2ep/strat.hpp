#pragma once
//
// Combinatorial stratification of regular pencil bundles: Segre
// characteristics, MLW and HC moves, cover enumeration, and the T(alpha)
// interaction count with executable monotonicity checks.
//

#include "sing2ep/matcore.hpp"

#include <string>
#include <string_view>

namespace sing2ep {

/// Weakly decreasing list of positive block sizes at one eigenvalue.
struct Segre {
    std::vector<Index> parts;

    Segre() = default;
    explicit Segre(std::vector<Index> p);

    Index total() const;
    bool empty() const { return parts.empty(); }
    bool operator==(const Segre&) const = default;
};

/// Canonical structure with eigenvalues unspecified: one partition per
/// distinct finite eigenvalue plus the partition at infinity.
struct RegularBundle {
    std::vector<Segre> eigen_partitions;
    Segre infinite_partition;

    Index total() const;
    /// canonical form: finite partitions sorted descending
    RegularBundle normalized() const;
    bool operator==(const RegularBundle&) const = default;
};

struct MlwResult {
    Segre segre;
    bool dropped_block = false;  // q was last and d_q = 1: one block vanished
};

/// Minimum leftward move at 1-based site (p, q): d_p grows, d_q shrinks.
MlwResult mlw_move(const Segre& s, Index p, Index q);

/// Horizontal cut of size C: beta_j = min(d_j, C), gamma_j = d_j - beta_j.
std::pair<Segre, Segre> hc_move(const Segre& s, Index C);

/// All distinct bundles reachable by one MLW or HC move; the infinite
/// eigenvalue may perturb to a finite one, never the other way round.
std::vector<RegularBundle> enumerate_covers(const RegularBundle& b);

/// T(alpha) = sum_i sum_j min(d_i, e_j).
Index t_alpha(const Segre& d, const Segre& e);

struct MlwLemmaReport {
    Index T = 0, T_tilde = 0;
    bool monotone = false;        // T_tilde <= T
    bool strict_expected = false; // exists e_j in [d_q, d_p]
    bool strict_holds = false;    // T_tilde < T
};

MlwLemmaReport check_mlw_lemma(const Segre& d, const Segre& e, Index p, Index q);

struct HcLemmaReport {
    Index T = 0, T_tilde = 0;  // T_tilde: best simultaneous split assignment
    bool monotone = false;
};

HcLemmaReport check_hc_lemma(const Segre& d, const Segre& e, Index C_d, Index C_e);

/// Bundle grammar: finite partitions in braces joined by "|", infinite
/// partition last with prefix "inf:"; e.g. "{2,2}|{1}|inf:{1}".
std::string to_string(const RegularBundle& b);
RegularBundle parse_bundle(std::string_view text);

} // namespace sing2ep
