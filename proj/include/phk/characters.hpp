#pragma once

#include <optional>

#include "phk/embedding_poly.hpp"
#include "phk/qpow.hpp"

namespace phk {

/// Smooth-part data of a deRham character: value at the uniformizer power
/// spanning the domain, plus a finite-order table on units modulo a conductor.
/// An empty table means the character is unramified.
struct SmoothPart {
    QPower pi_value;
    unsigned conductor = 0;
    std::vector<Cyclotomic> unit_table;            // values on an indexed unit enumeration
    std::optional<std::vector<Cyclotomic>> inertia_values; // optional action on the inertia quotient

    bool unramified() const {
        for (const auto& v : unit_table)
            if (v != Cyclotomic(1)) return false;
        return true;
    }
    bool trivial() const { return unramified() && pi_value == QPower::one(pi_value.q()); }

    void check_finite_order() const {
        for (const auto& v : unit_table) {
            if (v.is_zero()) throw std::invalid_argument("SmoothPart: zero unit value");
            unsigned m = v.conductor();
            unsigned s = static_cast<unsigned>(std::lcm(2u, m));
            if (v.pow(s) != Cyclotomic(1))
                throw std::invalid_argument("SmoothPart: unit value is not a root of unity");
        }
    }
};

/// deRham character of (a norm subgroup of) K^x in its normal form
/// delta = delta_sm * delta_alg. The domain is {a : v_K(a) in norm_index * Z};
/// pi_value is delta(varpi^{norm_index}).
struct DeRhamCharacter {
    EmbeddingSet embeddings;
    SmoothPart smooth;
    std::vector<Int> alg_weights; // k_eta per embedding
    unsigned norm_index = 1;

    static DeRhamCharacter trivial(EmbeddingSet e, Int q, unsigned norm_index = 1) {
        DeRhamCharacter d;
        d.embeddings = std::move(e);
        d.smooth.pi_value = QPower::one(std::move(q));
        d.alg_weights.assign(d.embeddings.size(), Int(0));
        d.norm_index = norm_index;
        return d;
    }

    void validate() const {
        if (alg_weights.size() != embeddings.size())
            throw std::invalid_argument("DeRhamCharacter: one weight per embedding required");
        if (norm_index == 0) throw std::invalid_argument("DeRhamCharacter: norm index must be positive");
        smooth.check_finite_order();
    }

    bool is_trivial() const {
        if (!smooth.trivial()) return false;
        for (const auto& k : alg_weights)
            if (k != 0) return false;
        return true;
    }
};

/// wt(delta): the algebraic weight vector; smooth characters contribute 0.
inline std::vector<Int> wt(const DeRhamCharacter& d) { return d.alg_weights; }

/// The norm character |z|(a) = |N_{K/Qp}(a)| restricted to the norm subgroup,
/// with the configuration constant |z|(varpi) = q_K^{-1}.
inline DeRhamCharacter norm_abs_character(EmbeddingSet e, Int q, unsigned norm_index = 1) {
    DeRhamCharacter d = DeRhamCharacter::trivial(std::move(e), q, norm_index);
    d.smooth.pi_value = QPower::q_to(q, -Rational(static_cast<long>(norm_index)));
    return d;
}

namespace charops {

inline DeRhamCharacter mul(const DeRhamCharacter& a, const DeRhamCharacter& b) {
    if (a.embeddings != b.embeddings)
        throw std::invalid_argument("char mul: embedding sets differ");
    unsigned e = static_cast<unsigned>(std::lcm(a.norm_index, b.norm_index));
    DeRhamCharacter r;
    r.embeddings = a.embeddings;
    r.norm_index = e;
    r.smooth.pi_value = a.smooth.pi_value.pow(e / a.norm_index) * b.smooth.pi_value.pow(e / b.norm_index);
    if (a.smooth.conductor != b.smooth.conductor && !a.smooth.unramified() && !b.smooth.unramified())
        throw std::invalid_argument("char mul: unit tables over different conductors");
    r.smooth.conductor = std::max(a.smooth.conductor, b.smooth.conductor);
    const auto& ta = a.smooth.unit_table;
    const auto& tb = b.smooth.unit_table;
    std::size_t n = std::max(ta.size(), tb.size());
    r.smooth.unit_table.resize(n, Cyclotomic(1));
    for (std::size_t i = 0; i < n; ++i) {
        Cyclotomic va = i < ta.size() ? ta[i] : Cyclotomic(1);
        Cyclotomic vb = i < tb.size() ? tb[i] : Cyclotomic(1);
        r.smooth.unit_table[i] = va * vb;
    }
    if (a.smooth.inertia_values && b.smooth.inertia_values) {
        std::vector<Cyclotomic> iv(a.smooth.inertia_values->size());
        for (std::size_t i = 0; i < iv.size(); ++i)
            iv[i] = (*a.smooth.inertia_values)[i] * (*b.smooth.inertia_values)[i];
        r.smooth.inertia_values = std::move(iv);
    } else if (a.smooth.inertia_values) {
        r.smooth.inertia_values = a.smooth.inertia_values;
    } else if (b.smooth.inertia_values) {
        r.smooth.inertia_values = b.smooth.inertia_values;
    }
    r.alg_weights.resize(a.alg_weights.size());
    for (std::size_t i = 0; i < r.alg_weights.size(); ++i)
        r.alg_weights[i] = a.alg_weights[i] + b.alg_weights[i];
    return r;
}

inline DeRhamCharacter inv(const DeRhamCharacter& a) {
    DeRhamCharacter r = a;
    r.smooth.pi_value = a.smooth.pi_value.inverse();
    for (auto& v : r.smooth.unit_table) v = v.inverse();
    if (r.smooth.inertia_values)
        for (auto& v : *r.smooth.inertia_values) v = v.inverse();
    for (auto& k : r.alg_weights) k = -k;
    return r;
}

/// Restriction to the index-e norm subgroup of the current domain.
inline DeRhamCharacter restrict_to_norm(const DeRhamCharacter& a, unsigned e) {
    if (e == 0) throw std::invalid_argument("restrict_to_norm: e must be positive");
    DeRhamCharacter r = a;
    r.norm_index = a.norm_index * e;
    r.smooth.pi_value = a.smooth.pi_value.pow(e);
    return r;
}

} // namespace charops

/// Per-embedding root multiset of the Sen polynomial.
struct SenPolynomial {
    EmbeddingSet embeddings;
    std::vector<std::vector<Cyclotomic>> roots;

    static SenPolynomial one(EmbeddingSet e) {
        SenPolynomial s;
        s.roots.assign(e.size(), {});
        s.embeddings = std::move(e);
        return s;
    }

    void validate() const {
        if (roots.size() != embeddings.size())
            throw std::invalid_argument("SenPolynomial: one root list per embedding required");
        for (const auto& r : roots)
            if (r.size() != roots.front().size())
                throw std::invalid_argument("SenPolynomial: same cardinality per embedding required");
    }

    std::size_t degree() const { return roots.empty() ? 0 : roots.front().size(); }

    EmbeddingPoly as_poly() const { return EmbeddingPoly::from_roots(embeddings, roots); }

    bool operator==(const SenPolynomial& o) const {
        if (embeddings != o.embeddings || degree() != o.degree()) return false;
        for (std::size_t e = 0; e < roots.size(); ++e) {
            std::vector<bool> used(o.roots[e].size(), false);
            for (const auto& r : roots[e]) {
                bool found = false;
                for (std::size_t j = 0; j < o.roots[e].size(); ++j) {
                    if (!used[j] && o.roots[e][j] == r) {
                        used[j] = true;
                        found = true;
                        break;
                    }
                }
                if (!found) return false;
            }
        }
        return true;
    }
};

/// Sen polynomial of a quasi-deRham module: roots wt_sigma(delta) - k_{sigma,i}.
inline SenPolynomial sen_of_quasi_deRham(const EmbeddingSet& emb,
                                         const std::vector<std::vector<Int>>& weights,
                                         const DeRhamCharacter& delta) {
    if (weights.size() != emb.size())
        throw std::invalid_argument("sen_of_quasi_deRham: one weight list per embedding");
    if (delta.embeddings != emb)
        throw std::invalid_argument("sen_of_quasi_deRham: embedding mismatch");
    SenPolynomial s;
    s.embeddings = emb;
    s.roots.resize(emb.size());
    for (std::size_t e = 0; e < emb.size(); ++e) {
        if (weights[e].size() != weights[0].size())
            throw std::invalid_argument("sen_of_quasi_deRham: ragged weights");
        for (const auto& k : weights[e])
            s.roots[e].push_back(Cyclotomic(Rational(delta.alg_weights[e] - k)));
    }
    return s;
}

/// Short-exact-sequence multiplicativity: root multiset union per embedding.
inline SenPolynomial sen_multiply(const SenPolynomial& a, const SenPolynomial& b) {
    if (a.embeddings != b.embeddings)
        throw std::invalid_argument("sen_multiply: embedding mismatch");
    SenPolynomial s = a;
    for (std::size_t e = 0; e < s.roots.size(); ++e)
        s.roots[e].insert(s.roots[e].end(), b.roots[e].begin(), b.roots[e].end());
    return s;
}

/// Twist shift: every root r_eta becomes r_eta + wt_eta(delta).
inline SenPolynomial sen_twist_shift(const SenPolynomial& a, const DeRhamCharacter& delta) {
    if (a.embeddings != delta.embeddings)
        throw std::invalid_argument("sen_twist_shift: embedding mismatch");
    SenPolynomial s = a;
    for (std::size_t e = 0; e < s.roots.size(); ++e)
        for (auto& r : s.roots[e]) r = r + Cyclotomic(Rational(delta.alg_weights[e]));
    return s;
}

enum class SenOrder { equal, less_or_equal, incomparable };

namespace detail {

inline bool nonneg_integer_diff(const Cyclotomic& from, const Cyclotomic& to) {
    Cyclotomic d = to - from;
    if (!d.is_rational()) return false;
    Rational v = d.rational_value();
    return is_integer(v) && v >= 0;
}

inline bool match_roots(const std::vector<Cyclotomic>& s, const std::vector<Cyclotomic>& sp,
                        std::vector<bool>& used, std::size_t i) {
    if (i == s.size()) return true;
    for (std::size_t j = 0; j < sp.size(); ++j) {
        if (used[j] || !nonneg_integer_diff(s[i], sp[j])) continue;
        used[j] = true;
        if (match_roots(s, sp, used, i + 1)) return true;
        used[j] = false;
    }
    return false;
}

} // namespace detail

/// Partial order: S' <= S iff per embedding some matching sends each root a of
/// S to a root a + k of S' with k a nonnegative integer.
inline SenOrder sen_partial_order(const SenPolynomial& sp, const SenPolynomial& s) {
    if (sp.embeddings != s.embeddings || sp.degree() != s.degree())
        throw std::invalid_argument("sen_partial_order: degree or embedding mismatch");
    if (sp == s) return SenOrder::equal;
    for (std::size_t e = 0; e < s.roots.size(); ++e) {
        std::vector<bool> used(sp.roots[e].size(), false);
        if (!detail::match_roots(s.roots[e], sp.roots[e], used, 0)) return SenOrder::incomparable;
    }
    return SenOrder::less_or_equal;
}

struct SenCompareVerdict {
    SenOrder order;
    bool consistent;   // false flags an inconsistent-submodule claim
    bool equal;        // equality signals D' = D
};

/// Compares Sen polynomials of a submodule candidate against the ambient one;
/// an order violation is flagged as an inconsistent submodule claim.
inline SenCompareVerdict submodule_sen_compare(const SenPolynomial& sub, const SenPolynomial& amb,
                                               bool claim_equal) {
    SenOrder o = sen_partial_order(sub, amb);
    SenCompareVerdict v{o, o != SenOrder::incomparable, o == SenOrder::equal};
    if (claim_equal && o != SenOrder::equal) v.consistent = false;
    return v;
}

/// Regular-locus membership for a single character ratio delta = delta_i/delta_j
/// (types isomorphic): excluded families are delta_{-k} and |z| delta_{k+1}
/// with k_eta <= gap_{eta,t} for all eta, t.
inline bool is_regular_pair(const DeRhamCharacter& delta,
                            const std::vector<std::vector<Int>>& gaps) {
    if (gaps.size() != delta.embeddings.size())
        throw std::invalid_argument("is_regular_pair: one gap list per embedding");
    auto k_below_gaps = [&](const std::vector<Int>& k) {
        for (std::size_t e = 0; e < gaps.size(); ++e)
            for (const auto& g : gaps[e])
                if (k[e] > g) return false;
        return true;
    };
    // family delta_{-k}: trivial smooth part, weights -k
    if (delta.smooth.trivial()) {
        std::vector<Int> k(delta.alg_weights.size());
        for (std::size_t e = 0; e < k.size(); ++e) k[e] = -delta.alg_weights[e];
        if (k_below_gaps(k)) return false;
    }
    // family |z| delta_{k+1}: smooth part equal to |z| on the domain, weights k+1
    DeRhamCharacter zn = norm_abs_character(delta.embeddings, delta.smooth.pi_value.q(),
                                            delta.norm_index);
    if (delta.smooth.unramified() && delta.smooth.pi_value == zn.smooth.pi_value) {
        std::vector<Int> k(delta.alg_weights.size());
        for (std::size_t e = 0; e < k.size(); ++e) k[e] = delta.alg_weights[e] - 1;
        if (k_below_gaps(k)) return false;
    }
    return true;
}

} // namespace phk
