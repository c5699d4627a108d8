#pragma once

#include <set>

#include "phk/characters.hpp"
#include "phk/weil_deligne.hpp"

namespace phk {

/// Decreasing per-embedding filtration: column i of the invertible flag matrix
/// carries weight weights[i] (nondecreasing), and Fil^j is spanned by the
/// columns of weight >= j.
struct Filtration {
    std::vector<Int> weights;
    CMatrix flag;

    void validate(std::size_t dim) const {
        if (weights.size() != dim || flag.rows() != dim || flag.cols() != dim)
            throw std::invalid_argument("Filtration: size mismatch");
        for (std::size_t i = 1; i < weights.size(); ++i)
            if (weights[i - 1] > weights[i])
                throw std::invalid_argument("Filtration: weights must be nondecreasing");
        if (!flag.is_invertible())
            throw std::invalid_argument("Filtration: flag matrix must be invertible");
    }

    /// Basis of Fil^j as columns.
    CMatrix step(const Int& j) const {
        std::vector<std::size_t> cols;
        for (std::size_t i = 0; i < weights.size(); ++i)
            if (weights[i] >= j) cols.push_back(i);
        return flag.submatrix_columns(cols);
    }
};

/// Filtered (phi, N, G_{L/K})-module via the WD equivalence: a WD part plus a
/// per-embedding flag, with degree bookkeeping [K:Q_p] and [K_0:Q_p].
struct FilteredModule {
    WDRep wd;
    EmbeddingSet embeddings;
    std::vector<Filtration> filtration;
    unsigned deg_K = 1;   // [K:Q_p]
    unsigned deg_K0 = 1;  // [K_0:Q_p]
    Int prime = 0;

    std::size_t rank() const { return wd.dim(); }
    unsigned ramification() const { return deg_K / deg_K0; } // [K:K_0]

    void validate() const {
        if (!check_wd_axioms(wd).empty())
            throw std::invalid_argument("FilteredModule: invalid WD part");
        if (embeddings.size() != deg_K)
            throw std::invalid_argument("FilteredModule: [K:Q_p] embeddings required");
        if (deg_K0 == 0 || deg_K % deg_K0 != 0)
            throw std::invalid_argument("FilteredModule: [K_0:Q_p] must divide [K:Q_p]");
        if (filtration.size() != embeddings.size())
            throw std::invalid_argument("FilteredModule: one filtration per embedding required");
        for (const auto& f : filtration) f.validate(rank());
        if (prime < 2 || !is_prime(prime))
            throw std::invalid_argument("FilteredModule: a prime is required for valuations");
        Int qf = boost::multiprecision::pow(prime, deg_K0);
        if (qf != wd.q())
            throw std::invalid_argument("FilteredModule: q must equal p^{[K_0:Q_p]}");
    }

    std::vector<std::vector<Int>> weight_table() const {
        std::vector<std::vector<Int>> w;
        for (const auto& f : filtration) w.push_back(f.weights);
        return w;
    }
};

/// Idempotent system of Lemma-style embedding decomposition: given the values
/// eta_j(x) of a primitive element, solves the Vandermonde system B c = e_j.
struct EmbeddingIdempotents {
    EmbeddingSet embeddings;
    std::vector<Cyclotomic> primitive_values;      // eta_j(x)
    std::vector<std::vector<Cyclotomic>> coeffs;   // e_eta as polynomials in x
};

inline EmbeddingIdempotents embedding_decompose(const EmbeddingSet& emb,
                                                const std::vector<Cyclotomic>& eta_of_x) {
    std::size_t r = emb.size();
    if (eta_of_x.size() != r)
        throw std::invalid_argument("embedding_decompose: one value per embedding");
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j)
            if (eta_of_x[i] == eta_of_x[j])
                throw std::invalid_argument(
                    "embedding_decompose: degenerate primitive element (repeated value)");
    // B[j][i] = eta_j(x)^i
    CMatrix b(r, r);
    for (std::size_t j = 0; j < r; ++j) {
        Cyclotomic p(1);
        for (std::size_t i = 0; i < r; ++i) {
            b(j, i) = p;
            p = p * eta_of_x[j];
        }
    }
    EmbeddingIdempotents out;
    out.embeddings = emb;
    out.primitive_values = eta_of_x;
    for (std::size_t target = 0; target < r; ++target) {
        std::vector<Cyclotomic> rhs(r, Cyclotomic(0));
        rhs[target] = Cyclotomic(1);
        out.coeffs.push_back(b.solve(rhs));
    }
    return out;
}

/// det(B^T B) as in the lemma's proof: prod_{eta != eta'} (eta(x) - eta'(x)).
inline Cyclotomic embedding_gram_det(const std::vector<Cyclotomic>& eta_of_x) {
    std::size_t r = eta_of_x.size();
    CMatrix b(r, r);
    for (std::size_t j = 0; j < r; ++j) {
        Cyclotomic p(1);
        for (std::size_t i = 0; i < r; ++i) {
            b(j, i) = p;
            p = p * eta_of_x[j];
        }
    }
    return (b.transpose() * b).det();
}

/// Pairing direction of the FWD correspondence: filtration data + WD part.
inline FilteredModule fwd_correspond(const EmbeddingSet& emb, std::vector<Filtration> filtration,
                                     const WDRep& v, unsigned deg_K, unsigned deg_K0, Int prime) {
    for (const auto& f : filtration)
        if (f.weights.size() != v.dim())
            throw std::invalid_argument("fwd_correspond: filtration dimension mismatch");
    FilteredModule m{v, emb, std::move(filtration), deg_K, deg_K0, std::move(prime)};
    m.validate();
    return m;
}

/// Inverse projection: forget the filtration, keep the WD factor.
inline std::pair<std::vector<Filtration>, WDRep> fwd_project(const FilteredModule& m) {
    return {m.filtration, m.wd};
}

/// t_H(M) = (1/[K:Q_p]) sum_eta sum_i k_{eta,i}
inline Rational hodge_number(const FilteredModule& m) {
    Rational s(0);
    for (const auto& f : m.filtration)
        for (const auto& k : f.weights) s += Rational(k);
    return s / Rational(static_cast<long>(m.deg_K));
}

/// t_N(M) = (1/[K_0:Q_p]) val(det of the geometric Frobenius action)
inline Rational newton_number(const FilteredModule& m) {
    Cyclotomic det = m.wd.frobenius.det();
    auto v = det.padic_val_if_defined(m.prime);
    if (!v)
        throw std::domain_error(
            "newton_number: Frobenius determinant has undefined valuation over this field");
    return *v / Rational(static_cast<long>(m.deg_K0));
}

// ---- stable-subspace machinery ----------------------------------------------

namespace subspaces {

/// Reduced column-echelon basis; canonical per subspace.
inline CMatrix canonical(const CMatrix& basis) {
    CMatrix t = basis.transpose();
    t.rref();
    // drop zero rows, transpose back
    std::vector<std::vector<Cyclotomic>> rows;
    for (std::size_t i = 0; i < t.rows(); ++i) {
        bool zero = true;
        for (std::size_t j = 0; j < t.cols(); ++j)
            if (!(t(i, j) == Cyclotomic(0))) zero = false;
        if (!zero) {
            std::vector<Cyclotomic> r(t.cols());
            for (std::size_t j = 0; j < t.cols(); ++j) r[j] = t(i, j);
            rows.push_back(std::move(r));
        }
    }
    if (rows.empty()) return CMatrix(basis.rows(), 0);
    return CMatrix::from_rows(rows).transpose();
}

inline std::string key(const CMatrix& canon) {
    std::string s = std::to_string(canon.cols()) + "|";
    for (std::size_t j = 0; j < canon.cols(); ++j)
        for (std::size_t i = 0; i < canon.rows(); ++i) s += canon(i, j).normalized().str();
    return s;
}

inline CMatrix sum(const CMatrix& a, const CMatrix& b) { return canonical(a.hstack(b)); }

inline CMatrix intersect(const CMatrix& a, const CMatrix& b) {
    if (a.cols() == 0 || b.cols() == 0) return CMatrix(a.rows(), 0);
    // kernel of [a | -b]: pairs (x, y) with a x = b y
    CMatrix ab(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) ab(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) ab(i, a.cols() + j) = Cyclotomic(0) - b(i, j);
    }
    CMatrix ker = ab.kernel();
    CMatrix vecs(a.rows(), ker.cols());
    for (std::size_t c = 0; c < ker.cols(); ++c)
        for (std::size_t i = 0; i < a.rows(); ++i) {
            Cyclotomic acc(0);
            for (std::size_t j = 0; j < a.cols(); ++j) acc = acc + a(i, j) * ker(j, c);
            vecs(i, c) = acc;
        }
    return canonical(vecs);
}

inline bool contains(const CMatrix& space, const CMatrix& vectors) {
    if (vectors.cols() == 0) return true;
    return space.hstack(vectors).rank() == space.rank();
}

inline bool is_stable(const CMatrix& s, const std::vector<const CMatrix*>& operators) {
    for (const auto* op : operators)
        if (!contains(s, *op * s)) return false;
    return true;
}

} // namespace subspaces

/// Eigenvalues of phi found exactly among candidate scalars; throws when the
/// generalized eigenspaces do not exhaust the space, since stable-subspace
/// enumeration could then silently miss subobjects.
namespace detail {

/// Divisors from trial-division factorization over small primes; a composite
/// cofactor beyond the bound contributes only itself, leaving the candidate
/// list incomplete (callers treat missing roots as an uncertifiable split).
inline std::vector<Int> divisors_bounded(Int n, unsigned long prime_bound = 10000) {
    if (n < 0) n = -n;
    std::vector<std::pair<Int, unsigned>> factors;
    for (Int p = 2; p <= prime_bound && p * p <= n; ++p) {
        if (n % p != 0) continue;
        unsigned e = 0;
        while (n % p == 0) { n /= p; ++e; }
        factors.emplace_back(p, e);
    }
    if (n > 1) factors.emplace_back(n, 1);
    std::vector<Int> ds{1};
    for (const auto& [p, e] : factors) {
        std::size_t base = ds.size();
        Int pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) ds.push_back(ds[i] * pk);
        }
    }
    return ds;
}

} // namespace detail

inline std::vector<std::pair<Cyclotomic, CMatrix>> split_generalized_eigenspaces(const CMatrix& phi) {
    std::size_t d = phi.rows();
    Poly<Cyclotomic> cp = phi.charpoly();
    std::vector<Cyclotomic> candidates;
    auto push = [&](const Cyclotomic& c) {
        for (const auto& x : candidates)
            if (x == c) return;
        candidates.push_back(c);
    };

    std::vector<std::pair<Cyclotomic, CMatrix>> out;
    std::size_t covered = 0;
    auto consume = [&]() {
        for (const auto& lambda : candidates) {
            bool seen = false;
            for (const auto& [mu, sp] : out)
                if (mu == lambda) seen = true;
            if (seen || !(cp.eval(lambda) == Cyclotomic(0))) continue;
            CMatrix shifted = phi;
            for (std::size_t i = 0; i < d; ++i) shifted(i, i) = shifted(i, i) - lambda;
            CMatrix power = CMatrix::identity(d);
            for (std::size_t i = 0; i < d; ++i) power = power * shifted;
            CMatrix ker = subspaces::canonical(power.kernel());
            if (ker.cols() == 0) continue;
            covered += ker.cols();
            out.emplace_back(lambda, std::move(ker));
        }
    };

    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (!(phi(i, j) == Cyclotomic(0))) push(phi(i, j));
    consume();

    // rational root scan only when the entries were not enough
    if (covered != d) {
        bool rational = true;
        for (const auto& c : cp.coeffs())
            if (!c.is_rational()) rational = false;
        if (rational) {
            Int lead = 1;
            for (const auto& c : cp.coeffs()) lead = lcm_int(lead, denominator(c.rational_value()));
            Int a0 = numerator(cp.coeff(0).rational_value() * Rational(lead));
            Int al = numerator(cp.leading().rational_value() * Rational(lead));
            candidates.clear();
            if (a0 == 0) push(Cyclotomic(0));
            if (a0 != 0)
                for (const Int& pnum : detail::divisors_bounded(a0))
                    for (const Int& pden : detail::divisors_bounded(al)) {
                        push(Cyclotomic(Rational(pnum, pden)));
                        push(Cyclotomic(-Rational(pnum, pden)));
                    }
            consume();
        }
    }
    if (covered != d)
        throw std::domain_error(
            "split_generalized_eigenspaces: cannot certify a complete eigenvalue splitting "
            "of the Frobenius at this scale");
    return out;
}

/// All (phi, N, G)-stable subspaces, enumerated as spans of subsets of the
/// atoms cut out by the generalized eigenspaces of Phi^E and the inertia
/// isotypic pieces. Spectral and isotypic projectors are polynomials in the
/// acting operators, so every stable subspace splits along the atoms; the
/// enumeration is certified complete by matching dim End_WD against the count
/// of minimal nonzero stable members, and raises an error otherwise.
inline std::vector<CMatrix> stable_subspace_lattice(const FilteredModule& m,
                                                    std::size_t max_rank = 5) {
    if (m.rank() > max_rank)
        throw std::invalid_argument("stable_subspace_lattice: rank exceeds the enumeration cap");
    std::size_t d = m.rank();
    // eigenvalues of Phi itself may generate an extension; Phi^E for E the
    // order of the Frobenius action splits fieldwise on induced blocks
    CMatrix phi_pow = m.wd.frobenius;
    for (unsigned i = 1; i < m.wd.group()->frobenius_order(); ++i)
        phi_pow = phi_pow * m.wd.frobenius;
    std::vector<CMatrix> atoms;
    for (auto& [lambda, space] : split_generalized_eigenspaces(phi_pow)) atoms.push_back(space);
    // refine by the isotypic decomposition of the inertia action
    auto parts = irreducible_decompose(m.wd.inertia);
    if (parts.size() > 1) {
        std::vector<CMatrix> refined;
        for (const auto& a : atoms) {
            std::size_t total = 0;
            for (const auto& p : parts) {
                CMatrix piece = subspaces::intersect(a, subspaces::canonical(p.projector));
                if (piece.cols() == 0) continue;
                total += piece.cols();
                refined.push_back(piece);
            }
            if (total != a.cols())
                throw std::logic_error("stable_subspace_lattice: isotypic refinement mismatch");
        }
        atoms = std::move(refined);
    }
    if (atoms.size() > 16)
        throw std::domain_error("stable_subspace_lattice: too many atoms at this scale");

    std::vector<const CMatrix*> ops;
    ops.push_back(&m.wd.frobenius);
    ops.push_back(&m.wd.monodromy);
    std::vector<CMatrix> gens;
    for (unsigned g : m.wd.group()->generators()) gens.push_back(m.wd.inertia.at(g));
    for (const auto& g : gens) ops.push_back(&g);

    std::vector<CMatrix> stable;
    for (std::size_t mask = 1; mask < (1u << atoms.size()); ++mask) {
        CMatrix span(d, 0);
        for (std::size_t a = 0; a < atoms.size(); ++a)
            if (mask & (1u << a)) span = span.cols() ? span.hstack(atoms[a]) : atoms[a];
        span = subspaces::canonical(span);
        if (subspaces::is_stable(span, ops)) {
            bool dup = false;
            for (const auto& s : stable)
                if (s.cols() == span.cols() && subspaces::contains(s, span)) dup = true;
            if (!dup) stable.push_back(span);
        }
    }

    // completeness certificate: minimal nonzero stable members, one per
    // simple socle factor, must match the endomorphism dimension
    std::size_t minimal = 0;
    for (const auto& s : stable) {
        bool is_min = true;
        for (const auto& t : stable)
            if (t.cols() < s.cols() && subspaces::contains(s, t)) is_min = false;
        if (is_min) ++minimal;
    }
    if (hom_wd(m.wd, m.wd) != minimal)
        throw std::domain_error(
            "stable_subspace_lattice: cannot certify a complete subobject enumeration "
            "(repeated isomorphic constituents at this scale)");
    return stable;
}

/// Induced weights of a subspace by intersection with the filtration steps;
/// levels of an adapted basis land in the ambient jump set.
inline std::vector<Int> induced_weights(const Filtration& f, const CMatrix& sub) {
    std::vector<Int> out;
    if (sub.cols() == 0) return out;
    std::set<Int> distinct(f.weights.begin(), f.weights.end());
    std::size_t prev = 0;
    for (auto it = distinct.rbegin(); it != distinct.rend(); ++it) {
        CMatrix inter = subspaces::intersect(sub, f.step(*it));
        for (std::size_t c = prev; c < inter.cols(); ++c) out.push_back(*it);
        prev = inter.cols();
    }
    if (prev != sub.cols()) throw std::logic_error("induced_weights: filtration not exhaustive");
    std::sort(out.begin(), out.end());
    return out;
}

/// Hodge and Newton numbers of a stable subspace with its induced filtration.
inline Rational sub_hodge_number(const FilteredModule& m, const CMatrix& sub) {
    Rational s(0);
    for (const auto& f : m.filtration)
        for (const auto& k : induced_weights(f, sub)) s += Rational(k);
    return s / Rational(static_cast<long>(m.deg_K));
}

inline Rational sub_newton_number(const FilteredModule& m, const CMatrix& sub) {
    // restriction of the Frobenius to the subspace in its own basis
    std::size_t k = sub.cols();
    CMatrix img = m.wd.frobenius * sub;
    CMatrix r(k, k);
    for (std::size_t c = 0; c < k; ++c) {
        auto x = sub.solve(img.column(c));
        for (std::size_t i = 0; i < k; ++i) r(i, c) = x[i];
    }
    auto v = r.det().padic_val_if_defined(m.prime);
    if (!v)
        throw std::domain_error("sub_newton_number: undefined determinant valuation");
    return *v / Rational(static_cast<long>(m.deg_K0));
}

struct WeakAdmissibility {
    bool admissible;
    std::optional<CMatrix> violator; // basis of a violating subobject when false
    std::string reason;
};

/// Fontaine's condition: t_H(M) = t_N(M) and t_H(M') <= t_N(M') for every
/// stable subobject with the induced filtration.
inline WeakAdmissibility is_weakly_admissible(const FilteredModule& m, std::size_t max_rank = 5) {
    m.validate();
    if (hodge_number(m) != newton_number(m))
        return {false, std::nullopt, "t_H(M) != t_N(M)"};
    for (const auto& s : stable_subspace_lattice(m, max_rank)) {
        if (s.cols() == m.rank()) continue;
        if (sub_hodge_number(m, s) > sub_newton_number(m, s))
            return {false, s, "subobject with t_H > t_N"};
    }
    return {true, std::nullopt, ""};
}

/// Twist by a deRham character: weights shift by -wt_eta, the WD part tensors
/// with the rank-one twist. The smooth part must be trivial on I_L, i.e. either
/// unramified or explicitly given on the inertia quotient.
inline FilteredModule twist_by_character(const FilteredModule& m, const DeRhamCharacter& delta) {
    if (delta.embeddings != m.embeddings)
        throw std::invalid_argument("twist_by_character: embedding mismatch");
    if (delta.norm_index != 1)
        throw std::invalid_argument("twist_by_character: character must live on all of K^x");
    if (!delta.smooth.unramified() && !delta.smooth.inertia_values)
        throw std::domain_error(
            "twist_by_character: smooth part is ramified and carries no inertia action, "
            "so triviality on I_L cannot be checked");
    FilteredModule out = m;
    for (std::size_t e = 0; e < out.filtration.size(); ++e)
        for (auto& w : out.filtration[e].weights) w -= delta.alg_weights[e];
    Cyclotomic alpha = delta.smooth.pi_value.to_cyclotomic();
    out.wd.frobenius = m.wd.frobenius * alpha;
    if (delta.smooth.inertia_values) {
        const auto& iv = *delta.smooth.inertia_values;
        if (iv.size() != m.wd.group()->order())
            throw std::invalid_argument("twist_by_character: inertia table size mismatch");
        out.wd.inertia = m.wd.inertia.twisted(iv);
    }
    return out;
}

/// Chain of nested stable subspaces of a parent module, with induced filtrations.
struct FiltrationChain {
    FilteredModule parent;
    std::vector<CMatrix> steps; // strictly increasing, last = full space (optional)

    void validate() const {
        parent.validate();
        std::vector<const CMatrix*> ops;
        ops.push_back(&parent.wd.frobenius);
        ops.push_back(&parent.wd.monodromy);
        std::vector<CMatrix> gens;
        for (unsigned g : parent.wd.group()->generators()) gens.push_back(parent.wd.inertia.at(g));
        for (const auto& g : gens) ops.push_back(&g);
        std::size_t prev = 0;
        for (const auto& s : steps) {
            if (s.cols() <= prev && !(s.cols() == 0 && prev == 0))
                throw std::invalid_argument("FiltrationChain: steps must increase");
            prev = s.cols();
            if (!subspaces::is_stable(s, ops))
                throw std::invalid_argument("FiltrationChain: step is not stable");
        }
        for (std::size_t i = 1; i < steps.size(); ++i)
            if (!subspaces::contains(steps[i], steps[i - 1]))
                throw std::invalid_argument("FiltrationChain: steps are not nested");
    }
};

/// Non-critical: for each step and embedding the induced weights are exactly
/// the smallest d_i weights of the ambient module.
inline bool is_noncritical(const FiltrationChain& chain) {
    chain.validate();
    for (const auto& s : chain.steps) {
        std::size_t di = s.cols();
        for (std::size_t e = 0; e < chain.parent.filtration.size(); ++e) {
            auto ind = induced_weights(chain.parent.filtration[e], s);
            std::vector<Int> smallest(chain.parent.filtration[e].weights.begin(),
                                      chain.parent.filtration[e].weights.begin() + di);
            if (ind != smallest) return false;
        }
    }
    return true;
}

/// Sufficient inequality for non-criticality of the canonical chain:
/// (k_{eta,s_i+1} - k_{eta,s_i}) + sum_eta sum_{j<=s_i} k_{eta,j}
///   > [K:K_0] * sum_{j<=i} val(det Frobenius of block j), for all i, eta.
/// The gap term uses the (s_i+1)-th weight, the jump produced by the minimal
/// non-identity order-preserving map in the supporting poset argument.
inline bool noncritical_criterion(const std::vector<std::vector<Int>>& weights,
                                  const std::vector<Rational>& block_det_vals,
                                  const std::vector<std::size_t>& partition,
                                  unsigned ram_index) {
    std::size_t l = partition.size();
    if (block_det_vals.size() != l)
        throw std::invalid_argument("noncritical_criterion: one det valuation per block");
    std::size_t n = 0;
    for (auto x : partition) n += x;
    for (const auto& w : weights) {
        if (w.size() != n) throw std::invalid_argument("noncritical_criterion: weight length mismatch");
        for (std::size_t i = 1; i < w.size(); ++i)
            if (w[i - 1] > w[i])
                throw std::invalid_argument("noncritical_criterion: weights must be sorted");
    }
    std::vector<std::size_t> s(l + 1, 0);
    for (std::size_t i = 0; i < l; ++i) s[i + 1] = s[i] + partition[i];
    Rational val_acc(0);
    for (std::size_t i = 1; i < l; ++i) { // conditions for 1 <= i <= l-1
        val_acc += block_det_vals[i - 1];
        Rational weight_sum(0);
        for (const auto& w : weights)
            for (std::size_t j = 0; j < s[i]; ++j) weight_sum += Rational(w[j]);
        for (const auto& w : weights) {
            Rational lhs = Rational(w[s[i]] - w[s[i] - 1]) + weight_sum;
            if (!(lhs > Rational(static_cast<long>(ram_index)) * val_acc)) return false;
        }
    }
    return true;
}

} // namespace phk
