#include "sing2ep/strat.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sing2ep {

Segre::Segre(std::vector<Index> p) : parts(std::move(p)) {
    for (size_t i = 0; i < parts.size(); ++i) {
        if (parts[i] < 1) throw std::invalid_argument("Segre: parts must be positive");
        if (i > 0 && parts[i] > parts[i - 1])
            throw std::invalid_argument("Segre: parts must be weakly decreasing");
    }
}

Index Segre::total() const {
    Index t = 0;
    for (Index p : parts) t += p;
    return t;
}

Index RegularBundle::total() const {
    Index t = infinite_partition.total();
    for (const auto& s : eigen_partitions) t += s.total();
    return t;
}

RegularBundle RegularBundle::normalized() const {
    RegularBundle b = *this;
    std::sort(b.eigen_partitions.begin(), b.eigen_partitions.end(),
              [](const Segre& a, const Segre& c) { return a.parts > c.parts; });
    return b;
}

MlwResult mlw_move(const Segre& s, Index p, Index q) {
    Index m = static_cast<Index>(s.parts.size());
    if (p < 1 || q <= p || q > m) throw std::invalid_argument("mlw_move: need 1 <= p < q <= m");
    for (Index j = p; j < q - 1; ++j)
        if (s.parts[j - 1] != s.parts[j])
            throw std::invalid_argument("mlw_move: d_p..d_{q-1} must be equal");
    if (s.parts[p - 1] < s.parts[q - 1])
        throw std::invalid_argument("mlw_move: need d_p >= d_q");
    std::vector<Index> out = s.parts;
    out[p - 1] += 1;
    out[q - 1] -= 1;
    MlwResult r;
    if (out[q - 1] == 0) {
        out.erase(out.begin() + (q - 1));
        r.dropped_block = true;
    }
    std::sort(out.rbegin(), out.rend());
    r.segre = Segre(std::move(out));
    return r;
}

std::pair<Segre, Segre> hc_move(const Segre& s, Index C) {
    if (s.empty() || C < 1 || C >= s.parts.front())
        throw std::invalid_argument("hc_move: need 1 <= C < d_1");
    std::vector<Index> beta, gamma;
    for (Index d : s.parts) {
        Index b = std::min(d, C);
        beta.push_back(b);
        if (d - b > 0) gamma.push_back(d - b);
    }
    return {Segre(std::move(beta)), Segre(std::move(gamma))};
}

Index t_alpha(const Segre& d, const Segre& e) {
    Index t = 0;
    for (Index a : d.parts)
        for (Index b : e.parts) t += std::min(a, b);
    return t;
}

MlwLemmaReport check_mlw_lemma(const Segre& d, const Segre& e, Index p, Index q) {
    MlwLemmaReport rep;
    Index dp = d.parts[p - 1], dq = d.parts[q - 1];
    Segre moved = mlw_move(d, p, q).segre;
    rep.T = t_alpha(d, e);
    rep.T_tilde = t_alpha(moved, e);
    rep.monotone = rep.T_tilde <= rep.T;
    for (Index ej : e.parts)
        if (ej >= dq && ej <= dp) rep.strict_expected = true;
    rep.strict_holds = rep.T_tilde < rep.T;
    return rep;
}

HcLemmaReport check_hc_lemma(const Segre& d, const Segre& e, Index C_d, Index C_e) {
    auto [bd, cd] = hc_move(d, C_d);
    auto [be, ce] = hc_move(e, C_e);
    HcLemmaReport rep;
    rep.T = t_alpha(d, e);
    // the two split eigenvalues on each side can be identified either way
    rep.T_tilde = std::max(t_alpha(bd, be) + t_alpha(cd, ce),
                           t_alpha(bd, ce) + t_alpha(cd, be));
    rep.monotone = rep.T_tilde <= rep.T;
    return rep;
}

namespace {

struct BundleLess {
    bool operator()(const RegularBundle& a, const RegularBundle& b) const {
        auto key = [](const RegularBundle& x) {
            std::vector<std::vector<Index>> k;
            for (const auto& s : x.eigen_partitions) k.push_back(s.parts);
            k.push_back(x.infinite_partition.parts);
            return k;
        };
        return key(a) < key(b);
    }
};

std::vector<std::pair<Index, Index>> mlw_sites(const Segre& s) {
    std::vector<std::pair<Index, Index>> sites;
    Index m = static_cast<Index>(s.parts.size());
    for (Index p = 1; p <= m; ++p)
        for (Index q = p + 1; q <= m; ++q) {
            bool ok = s.parts[p - 1] >= s.parts[q - 1];
            for (Index j = p; j < q - 1 && ok; ++j)
                if (s.parts[j - 1] != s.parts[j]) ok = false;
            if (ok) sites.push_back({p, q});
        }
    return sites;
}

} // namespace

std::vector<RegularBundle> enumerate_covers(const RegularBundle& input) {
    RegularBundle b = input.normalized();
    std::set<RegularBundle, BundleLess> out;
    auto add = [&](RegularBundle cand) {
        std::vector<Segre> kept;
        for (auto& s : cand.eigen_partitions)
            if (!s.empty()) kept.push_back(std::move(s));
        cand.eigen_partitions = std::move(kept);
        cand = cand.normalized();
        if (!(cand == b)) out.insert(std::move(cand));
    };

    size_t nf = b.eigen_partitions.size();
    for (size_t i = 0; i < nf; ++i) {
        const Segre& s = b.eigen_partitions[i];
        for (auto [p, q] : mlw_sites(s)) {
            RegularBundle c = b;
            c.eigen_partitions[i] = mlw_move(s, p, q).segre;
            add(c);
        }
        if (!s.empty())
            for (Index C = 1; C < s.parts.front(); ++C) {
                auto [beta, gamma] = hc_move(s, C);
                RegularBundle c = b;
                c.eigen_partitions[i] = beta;
                c.eigen_partitions.push_back(gamma);
                add(c);
            }
    }

    const Segre& inf = b.infinite_partition;
    if (!inf.empty()) {
        // structure-preserving perturbation of infinity to a finite eigenvalue
        {
            RegularBundle c = b;
            c.infinite_partition = Segre{};
            c.eigen_partitions.push_back(inf);
            add(c);
        }
        for (auto [p, q] : mlw_sites(inf)) {
            Segre moved = mlw_move(inf, p, q).segre;
            RegularBundle stay = b;
            stay.infinite_partition = moved;
            add(stay);
            RegularBundle fin = b;
            fin.infinite_partition = Segre{};
            fin.eigen_partitions.push_back(moved);
            add(fin);
        }
        for (Index C = 1; C < inf.parts.front(); ++C) {
            auto [beta, gamma] = hc_move(inf, C);
            // at most one of the two offspring may remain at infinity
            RegularBundle keep_beta = b;
            keep_beta.infinite_partition = beta;
            keep_beta.eigen_partitions.push_back(gamma);
            add(keep_beta);
            RegularBundle keep_gamma = b;
            keep_gamma.infinite_partition = gamma;
            keep_gamma.eigen_partitions.push_back(beta);
            add(keep_gamma);
            RegularBundle both_finite = b;
            both_finite.infinite_partition = Segre{};
            both_finite.eigen_partitions.push_back(beta);
            both_finite.eigen_partitions.push_back(gamma);
            add(both_finite);
        }
    }
    return {out.begin(), out.end()};
}

std::string to_string(const RegularBundle& input) {
    RegularBundle b = input.normalized();
    std::ostringstream os;
    bool first = true;
    auto emit = [&](const Segre& s, bool inf) {
        if (!first) os << "|";
        first = false;
        if (inf) os << "inf:";
        os << "{";
        for (size_t i = 0; i < s.parts.size(); ++i) {
            if (i) os << ",";
            os << s.parts[i];
        }
        os << "}";
    };
    for (const auto& s : b.eigen_partitions) emit(s, false);
    if (!b.infinite_partition.empty()) emit(b.infinite_partition, true);
    if (first) os << "{}";
    return os.str();
}

RegularBundle parse_bundle(std::string_view text) {
    RegularBundle b;
    size_t pos = 0;
    bool seen_inf = false;
    while (pos < text.size()) {
        bool inf = false;
        if (text.substr(pos, 4) == "inf:") {
            inf = true;
            pos += 4;
        }
        if (pos >= text.size() || text[pos] != '{')
            throw std::invalid_argument("bundle grammar: expected '{'");
        size_t close = text.find('}', pos);
        if (close == std::string_view::npos)
            throw std::invalid_argument("bundle grammar: missing '}'");
        std::vector<Index> parts;
        std::string_view inner = text.substr(pos + 1, close - pos - 1);
        while (!inner.empty()) {
            Index v = 0;
            auto [p, ec] = std::from_chars(inner.data(), inner.data() + inner.size(), v);
            if (ec != std::errc{}) throw std::invalid_argument("bundle grammar: bad part");
            inner.remove_prefix(p - inner.data());
            parts.push_back(v);
            if (!inner.empty()) {
                if (inner.front() != ',')
                    throw std::invalid_argument("bundle grammar: expected ','");
                inner.remove_prefix(1);
            }
        }
        Segre s{std::vector<Index>(parts)};
        if (inf) {
            if (seen_inf) throw std::invalid_argument("bundle grammar: duplicate inf part");
            seen_inf = true;
            b.infinite_partition = std::move(s);
        } else {
            if (seen_inf)
                throw std::invalid_argument("bundle grammar: inf part must come last");
            if (!s.empty()) b.eigen_partitions.push_back(std::move(s));
        }
        pos = close + 1;
        if (pos < text.size()) {
            if (text[pos] != '|') throw std::invalid_argument("bundle grammar: expected '|'");
            ++pos;
        }
    }
    return b.normalized();
}

} // namespace sing2ep
