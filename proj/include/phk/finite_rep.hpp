#pragma once

#include <map>
#include <mutex>
#include <random>

#include "phk/character_table.hpp"
#include "phk/cyclotomic.hpp"
#include "phk/group.hpp"
#include "phk/matrix.hpp"

namespace phk {

using CMatrix = Matrix<Cyclotomic>;

/// Matrix representation of a finite group over a cyclotomic field.
class FiniteRep {
public:
    FiniteRep() = default;
    FiniteRep(GroupPtr g, std::vector<CMatrix> mats, bool check = true)
        : g_(std::move(g)), mats_(std::move(mats)) {
        if (mats_.size() != g_->order())
            throw std::invalid_argument("FiniteRep: one matrix per group element required");
        dim_ = mats_.empty() ? 0 : mats_[0].rows();
        for (const auto& m : mats_)
            if (m.rows() != dim_ || m.cols() != dim_)
                throw std::invalid_argument("FiniteRep: matrices must be square of equal size");
        if (check) validate();
    }

    static FiniteRep trivial(GroupPtr g, std::size_t dim = 1) {
        std::vector<CMatrix> mats(g->order(), CMatrix::identity(dim));
        return FiniteRep(std::move(g), std::move(mats), false);
    }

    static FiniteRep regular(GroupPtr g) {
        unsigned n = g->order();
        std::vector<CMatrix> mats(n, CMatrix(n, n));
        for (unsigned x = 0; x < n; ++x)
            for (unsigned y = 0; y < n; ++y) mats[x](g->mul(x, y), y) = Cyclotomic(1);
        return FiniteRep(std::move(g), std::move(mats), false);
    }

    /// One-dimensional representation from values on elements.
    static FiniteRep linear(GroupPtr g, const std::vector<Cyclotomic>& values) {
        std::vector<CMatrix> mats(g->order(), CMatrix(1, 1));
        for (unsigned x = 0; x < g->order(); ++x) mats[x](0, 0) = values[x];
        return FiniteRep(std::move(g), std::move(mats));
    }

    const GroupPtr& group() const { return g_; }
    std::size_t dim() const { return dim_; }
    const CMatrix& at(unsigned g) const { return mats_[g]; }
    const std::vector<CMatrix>& matrices() const { return mats_; }

    void validate() const {
        if (!mats_[0].is_invertible() || !(mats_[0] == CMatrix::identity(dim_)))
            throw std::invalid_argument("FiniteRep: identity must act as the identity matrix");
        for (unsigned a = 0; a < g_->order(); ++a)
            for (unsigned b = 0; b < g_->order(); ++b)
                if (!(mats_[a] * mats_[b] == mats_[g_->mul(a, b)]))
                    throw std::invalid_argument("FiniteRep: matrices do not respect the group law");
    }

    CharacterVector character() const {
        CharacterVector cv;
        cv.group = g_;
        cv.values.resize(g_->class_count());
        for (std::size_t c = 0; c < g_->class_count(); ++c)
            cv.values[c] = mats_[g_->class_rep(c)].trace();
        return cv;
    }

    /// tau^{Fr^k}: g acts by tau(Fr^{-k} g Fr^{k}).
    FiniteRep conjugated(long k) const {
        std::vector<CMatrix> mats(g_->order());
        for (unsigned g = 0; g < g_->order(); ++g) {
            unsigned x = g;
            long kk = k;
            // fc^{-k}(g)
            long ord = g_->frobenius_order();
            kk %= ord;
            if (kk < 0) kk += ord;
            for (long i = 0; i < kk; ++i) x = g_->frobenius_conj_inv(x);
            mats[g] = mats_[x];
        }
        return FiniteRep(g_, std::move(mats), false);
    }

    FiniteRep direct_sum(const FiniteRep& o) const {
        if (g_ != o.g_) throw std::invalid_argument("FiniteRep: direct sum needs a common group");
        std::vector<CMatrix> mats(g_->order());
        for (unsigned g = 0; g < g_->order(); ++g)
            mats[g] = CMatrix::block_diag({mats_[g], o.mats_[g]});
        return FiniteRep(g_, std::move(mats), false);
    }

    FiniteRep tensor_line(const Cyclotomic& unused) const = delete;

    /// Twist by a one-dimensional character given by element values.
    FiniteRep twisted(const std::vector<Cyclotomic>& psi) const {
        std::vector<CMatrix> mats(g_->order());
        for (unsigned g = 0; g < g_->order(); ++g) mats[g] = mats_[g] * psi[g];
        return FiniteRep(g_, std::move(mats), false);
    }

private:
    GroupPtr g_;
    std::size_t dim_ = 0;
    std::vector<CMatrix> mats_;
};

/// Basis of the space of intertwiners f with f . rho1(g) = rho2(g) . f.
inline std::vector<CMatrix> hom_space(const FiniteRep& v1, const FiniteRep& v2) {
    if (v1.group() != v2.group())
        throw std::invalid_argument("hom_space: representations of different groups");
    std::size_t d1 = v1.dim(), d2 = v2.dim();
    const auto& gens = v1.group()->generators();
    std::vector<unsigned> use = gens.empty() ? std::vector<unsigned>{0} : gens;
    CMatrix sys(use.size() * d1 * d2, d1 * d2);
    std::size_t row = 0;
    auto idx = [d1](std::size_t i, std::size_t j) { return i * d1 + j; }; // X is d2 x d1
    for (unsigned g : use) {
        const CMatrix& r1 = v1.at(g);
        const CMatrix& r2 = v2.at(g);
        for (std::size_t i = 0; i < d2; ++i)
            for (std::size_t j = 0; j < d1; ++j) {
                // (X r1 - r2 X)[i][j] = 0
                for (std::size_t k = 0; k < d1; ++k)
                    sys(row, idx(i, k)) = sys(row, idx(i, k)) + r1(k, j);
                for (std::size_t k = 0; k < d2; ++k)
                    sys(row, idx(k, j)) = sys(row, idx(k, j)) - r2(i, k);
                ++row;
            }
    }
    CMatrix ker = sys.kernel();
    std::vector<CMatrix> basis;
    for (std::size_t c = 0; c < ker.cols(); ++c) {
        CMatrix X(d2, d1);
        for (std::size_t i = 0; i < d2; ++i)
            for (std::size_t j = 0; j < d1; ++j) X(i, j) = ker(idx(i, j), c);
        basis.push_back(X);
    }
    return basis;
}

inline std::size_t hom_dimension(const FiniteRep& v1, const FiniteRep& v2) {
    return hom_space(v1, v2).size();
}

/// Classical induction from a subgroup (given as a sorted element list).
inline FiniteRep induce_from_subgroup(const FiniteRep& tau_sub,
                                      const std::vector<unsigned>& sub_elements,
                                      const GroupPtr& g) {
    // tau_sub is a representation of the subgroup group object whose element i
    // corresponds to sub_elements[i]
    if (!g->is_subgroup(sub_elements))
        throw std::invalid_argument("induce_from_subgroup: not a subgroup");
    if (tau_sub.group()->order() != sub_elements.size())
        throw std::invalid_argument("induce_from_subgroup: subgroup size mismatch");
    std::vector<int> sub_index(g->order(), -1);
    for (std::size_t i = 0; i < sub_elements.size(); ++i) sub_index[sub_elements[i]] = static_cast<int>(i);
    auto reps = g->coset_reps(sub_elements);
    std::size_t m = reps.size(), d = tau_sub.dim();
    std::vector<int> coset_of(g->order(), -1);
    for (std::size_t j = 0; j < m; ++j)
        for (unsigned h : sub_elements) coset_of[g->mul(reps[j], h)] = static_cast<int>(j);

    std::vector<CMatrix> mats(g->order(), CMatrix(m * d, m * d));
    for (unsigned x = 0; x < g->order(); ++x) {
        for (std::size_t i = 0; i < m; ++i) {
            unsigned xi = g->mul(x, reps[i]);
            int j = coset_of[xi];
            unsigned h = g->mul(g->inv(reps[j]), xi);
            const CMatrix& th = tau_sub.at(static_cast<unsigned>(sub_index[h]));
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b)
                    mats[x](static_cast<std::size_t>(j) * d + a, i * d + b) = th(a, b);
        }
    }
    return FiniteRep(g, std::move(mats), false);
}

/// Subgroup as a standalone group object plus the element correspondence.
inline std::pair<GroupPtr, std::vector<unsigned>> subgroup_group(const GroupPtr& g,
                                                                 const std::vector<unsigned>& h) {
    if (!g->is_subgroup(h)) throw std::invalid_argument("subgroup_group: not a subgroup");
    std::vector<int> index(g->order(), -1);
    for (std::size_t i = 0; i < h.size(); ++i) index[h[i]] = static_cast<int>(i);
    std::vector<std::vector<unsigned>> cayley(h.size(), std::vector<unsigned>(h.size()));
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = 0; j < h.size(); ++j)
            cayley[i][j] = static_cast<unsigned>(index[g->mul(h[i], h[j])]);
    // keep the frobenius action when the subgroup is stable under it, else trivial
    std::vector<unsigned> frob(h.size());
    bool stable = true;
    for (std::size_t i = 0; i < h.size(); ++i) {
        int fi = index[g->frobenius_conj(h[i])];
        if (fi < 0) { stable = false; break; }
        frob[i] = static_cast<unsigned>(fi);
    }
    if (!stable)
        for (std::size_t i = 0; i < h.size(); ++i) frob[i] = static_cast<unsigned>(i);
    return {std::make_shared<FiniteGroup>(std::move(cayley), std::move(frob), g->q()), h};
}

inline FiniteRep restrict_to_subgroup(const FiniteRep& v, const std::vector<unsigned>& h) {
    auto [sub, elems] = subgroup_group(v.group(), h);
    std::vector<CMatrix> mats(elems.size());
    for (std::size_t i = 0; i < elems.size(); ++i) mats[i] = v.at(elems[i]);
    return FiniteRep(sub, std::move(mats), false);
}

/// Cached irreducible data of a group: character table plus explicit models.
class IrreducibleSet {
public:
    struct Entry {
        FiniteRep rep;
        CharacterVector chi;
        unsigned degree;
    };

    static const IrreducibleSet& of(const GroupPtr& g) {
        static std::map<const FiniteGroup*, std::unique_ptr<IrreducibleSet>> cache;
        static std::mutex mu;
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(g.get());
        if (it == cache.end())
            it = cache.emplace(g.get(), std::unique_ptr<IrreducibleSet>(new IrreducibleSet(g))).first;
        return *it->second;
    }

    const CharacterTable& table() const { return table_; }
    std::size_t size() const { return entries_.size(); }
    const Entry& entry(std::size_t i) const { return entries_[i]; }

    /// Index of the irreducible with the given character; npos when absent.
    std::size_t index_of_character(const CharacterVector& chi) const {
        for (std::size_t i = 0; i < entries_.size(); ++i)
            if (entries_[i].chi == chi) return i;
        return static_cast<std::size_t>(-1);
    }

private:
    explicit IrreducibleSet(GroupPtr g);
    FiniteRep extract_model(std::size_t chi_index) const;

    GroupPtr g_;
    CharacterTable table_;
    std::vector<Entry> entries_;
};

inline IrreducibleSet::IrreducibleSet(GroupPtr g) : g_(std::move(g)), table_(g_) {
    std::vector<std::size_t> order(table_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    // canonical ordering: lexicographically minimal character vector first
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ca = table_.character(a).values;
        const auto& cb = table_.character(b).values;
        for (std::size_t c = 0; c < ca.size(); ++c) {
            int cmp = Cyclotomic::compare(ca[c], cb[c]);
            if (cmp != 0) return cmp < 0;
        }
        return false;
    });
    for (std::size_t i : order) {
        Entry e{extract_model(i), table_.character(i), table_.degree(i)};
        entries_.push_back(std::move(e));
    }
}

inline FiniteRep IrreducibleSet::extract_model(std::size_t ci) const {
    const FiniteGroup& G = *g_;
    unsigned n = G.order(), E = G.exponent();
    unsigned d = table_.degree(ci);
    const CharacterVector& chi = table_.character(ci);

    if (d == 1) {
        std::vector<Cyclotomic> vals(n);
        for (unsigned g = 0; g < n; ++g) vals[g] = chi.at_element(g);
        return FiniteRep::linear(g_, vals);
    }

    // isotypic projector of the regular representation:
    // e_chi[x][y] = (d/|G|) chi(y x^{-1})
    CMatrix proj(n, n);
    Cyclotomic scale(Rational(d, static_cast<long>(n)));
    for (unsigned x = 0; x < n; ++x)
        for (unsigned y = 0; y < n; ++y)
            proj(x, y) = scale * chi.at_element(G.mul(y, G.inv(x)));

    auto submodule_matrices = [&](const CMatrix& basis) {
        std::vector<CMatrix> mats(n);
        std::size_t k = basis.cols();
        for (unsigned g = 0; g < n; ++g) {
            // left translation of each basis column, expressed in the basis
            CMatrix images(n, k);
            for (std::size_t c = 0; c < k; ++c)
                for (unsigned z = 0; z < n; ++z)
                    images(G.mul(g, z), c) = basis(z, c);
            CMatrix m(k, k);
            for (std::size_t c = 0; c < k; ++c) {
                auto x = basis.solve(images.column(c));
                for (std::size_t r = 0; r < k; ++r) m(r, c) = x[r];
            }
            mats[g] = m;
        }
        return mats;
    };

    // right-multiplication eigenspace with a multiplicity-one eigenvalue cuts
    // out a single copy of the irreducible inside its isotypic component
    for (std::size_t c = 0; c < G.class_count(); ++c) {
        unsigned h = G.class_rep(c), e = G.element_order(h);
        if (e == 1) continue;
        for (unsigned j = 0; j < e; ++j) {
            if (table_.eigen_multiplicity(ci, c, j) != 1) continue;
            Cyclotomic lambda = Cyclotomic::zeta(E, static_cast<long>(j) * (E / e));
            // rows: (proj - I) x = 0 and (R_h - lambda) x = 0
            CMatrix sys(2 * n, n);
            for (unsigned x = 0; x < n; ++x)
                for (unsigned y = 0; y < n; ++y) {
                    sys(x, y) = proj(x, y) - (x == y ? Cyclotomic(1) : Cyclotomic(0));
                    // right multiplication: e_y -> e_{y h}
                    if (G.mul(y, h) == x) sys(n + x, y) = sys(n + x, y) + Cyclotomic(1);
                }
            for (unsigned y = 0; y < n; ++y) sys(n + y, y) = sys(n + y, y) - lambda;
            CMatrix ker = sys.kernel();
            if (ker.cols() != d) continue;
            return FiniteRep(g_, submodule_matrices(ker), false);
        }
    }

    // fallback: smallest multiplicity, then shrink by cyclic spans
    unsigned best_c = 0, best_j = 0, best_m = d + 1;
    for (std::size_t c = 0; c < G.class_count(); ++c) {
        unsigned h = G.class_rep(c), e = G.element_order(h);
        if (e == 1) continue;
        for (unsigned j = 0; j < e; ++j) {
            unsigned m = table_.eigen_multiplicity(ci, c, j);
            if (m > 0 && m < best_m) { best_m = m; best_c = static_cast<unsigned>(c); best_j = j; }
        }
    }
    unsigned h = G.class_rep(best_c), e = G.element_order(h);
    Cyclotomic lambda = Cyclotomic::zeta(E, static_cast<long>(best_j) * (E / e));
    CMatrix sys(2 * n, n);
    for (unsigned x = 0; x < n; ++x)
        for (unsigned y = 0; y < n; ++y) {
            sys(x, y) = proj(x, y) - (x == y ? Cyclotomic(1) : Cyclotomic(0));
            if (G.mul(y, h) == x) sys(n + x, y) = sys(n + x, y) + Cyclotomic(1);
        }
    for (unsigned y = 0; y < n; ++y) sys(n + y, y) = sys(n + y, y) - lambda;
    CMatrix space = sys.kernel();

    auto cyclic_span = [&](const std::vector<Cyclotomic>& v) {
        std::vector<std::vector<Cyclotomic>> basis;
        std::vector<std::vector<Cyclotomic>> queue{v};
        while (!queue.empty()) {
            auto w = queue.back();
            queue.pop_back();
            CMatrix test(n, basis.size() + 1);
            for (std::size_t b = 0; b < basis.size(); ++b)
                for (unsigned i = 0; i < n; ++i) test(i, b) = basis[b][i];
            for (unsigned i = 0; i < n; ++i) test(i, basis.size()) = w[i];
            if (test.rank() == basis.size()) continue;
            basis.push_back(w);
            for (unsigned g : G.generators()) {
                std::vector<Cyclotomic> u(n, Cyclotomic(0));
                for (unsigned z = 0; z < n; ++z) u[G.mul(g, z)] = w[z];
                queue.push_back(u);
            }
        }
        CMatrix out(n, basis.size());
        for (std::size_t b = 0; b < basis.size(); ++b)
            for (unsigned i = 0; i < n; ++i) out(i, b) = basis[b][i];
        return out;
    };

    std::mt19937_64 rng(20240901u + static_cast<unsigned>(ci));
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<Cyclotomic> v(n, Cyclotomic(0));
        if (attempt < static_cast<int>(space.cols())) {
            for (unsigned i = 0; i < n; ++i) v[i] = space(i, static_cast<std::size_t>(attempt));
        } else {
            std::uniform_int_distribution<int> coef(-3, 3);
            for (std::size_t cidx = 0; cidx < space.cols(); ++cidx) {
                Cyclotomic a(coef(rng));
                for (unsigned i = 0; i < n; ++i) v[i] = v[i] + space(i, cidx) * a;
            }
        }
        bool zero = true;
        for (const auto& x : v)
            if (!x.is_zero()) { zero = false; break; }
        if (zero) continue;
        CMatrix span = cyclic_span(v);
        if (span.cols() == d) return FiniteRep(g_, submodule_matrices(span), false);
    }
    throw std::runtime_error("IrreducibleSet: failed to split an isotypic component at this scale");
}

/// Constituent data of a decomposition into irreducibles.
struct IsotypicPart {
    FiniteRep irreducible;      // canonical model
    CharacterVector chi;
    unsigned degree;            // d_tau
    unsigned multiplicity;      // dim of the multiplicity space
    CMatrix projector;          // isotypic projector on the ambient module
};

/// Decomposition of V into irreducibles: multiplicities by character inner
/// products, isotypic projectors by the exact averaging formula.
inline std::vector<IsotypicPart> irreducible_decompose(const FiniteRep& v) {
    const auto& irr = IrreducibleSet::of(v.group());
    const FiniteGroup& G = *v.group();
    CharacterVector chiV = v.character();
    std::vector<IsotypicPart> parts;
    std::size_t total = 0;
    for (std::size_t i = 0; i < irr.size(); ++i) {
        const auto& e = irr.entry(i);
        Rational m = chiV.inner(e.chi);
        if (m == 0) continue;
        if (!is_integer(m) || m < 0)
            throw std::logic_error("irreducible_decompose: non-integral multiplicity");
        unsigned mult = static_cast<unsigned>(numerator(m).convert_to<unsigned long>());
        CMatrix proj(v.dim(), v.dim());
        Cyclotomic scale(Rational(e.degree, static_cast<long>(G.order())));
        for (unsigned g = 0; g < G.order(); ++g) {
            Cyclotomic coeff = scale * e.chi.at_element(G.inv(g));
            if (coeff.is_zero()) continue;
            proj = proj + v.at(g) * coeff;
        }
        parts.push_back({e.rep, e.chi, e.degree, mult, std::move(proj)});
        total += e.degree * mult;
    }
    if (total != v.dim())
        throw std::logic_error("irreducible_decompose: dimensions do not add up");
    return parts;
}

} // namespace phk
