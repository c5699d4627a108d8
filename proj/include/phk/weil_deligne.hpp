#pragma once

#include <optional>
#include <string>

#include "phk/finite_rep.hpp"

namespace phk {

/// Weil-Deligne representation of K, unramified over L, stored as the
/// equivalent triple (inertia action, matrix of a fixed geometric Frobenius
/// lift, monodromy N). Conventions: ||Fr|| = 1 for the geometric lift, so the
/// axioms read  Phi rho(g) Phi^{-1} = rho(fc(g))  and  Phi N Phi^{-1} = q^{-1} N.
struct WDRep {
    FiniteRep inertia;
    CMatrix frobenius;
    CMatrix monodromy;

    std::size_t dim() const { return inertia.dim(); }
    const GroupPtr& group() const { return inertia.group(); }
    const Int& q() const { return inertia.group()->q(); }

    static WDRep unramified(GroupPtr g, CMatrix phi, CMatrix n) {
        std::size_t d = phi.rows();
        return WDRep{FiniteRep::trivial(std::move(g), d), std::move(phi), std::move(n)};
    }

    WDRep conjugated_by(const CMatrix& p) const {
        CMatrix pinv = p.inverse();
        std::vector<CMatrix> mats;
        mats.reserve(group()->order());
        for (unsigned g = 0; g < group()->order(); ++g)
            mats.push_back(p * inertia.at(g) * pinv);
        return WDRep{FiniteRep(group(), std::move(mats), false), p * frobenius * pinv,
                     p * monodromy * pinv};
    }
};

/// Irreducible inertial type with its Frobenius stabilizer data.
struct InertialType {
    FiniteRep tau;
    unsigned e_tau = 1;           // [W_K : W_tau]
    unsigned d_tau = 1;           // dim tau
    CMatrix tilde_frobenius;      // A with A tau(g) A^{-1} = tau(fc^{e}(g))
};

struct TypeBlock {
    InertialType type;
    CMatrix frobenius;            // action of Fr^{e_tau} on the multiplicity space
    CMatrix monodromy;            // induced N
    std::size_t n_tau() const { return frobenius.rows(); }
};

struct TypeDecomposition {
    std::vector<TypeBlock> blocks;
    std::size_t total_dim = 0;

    std::size_t star_sum() const {
        std::size_t s = 0;
        for (const auto& b : blocks) s += b.n_tau() * b.type.d_tau * b.type.e_tau;
        return s;
    }
};

/// Checks every WD axiom; returns one message per violated identity.
inline std::vector<std::string> check_wd_axioms(const WDRep& v) {
    std::vector<std::string> bad;
    const auto& G = *v.group();
    std::size_t d = v.dim();
    if (v.frobenius.rows() != d || v.frobenius.cols() != d || v.monodromy.rows() != d ||
        v.monodromy.cols() != d) {
        bad.push_back("matrix sizes disagree with the inertia dimension");
        return bad;
    }
    if (!v.frobenius.is_invertible()) bad.push_back("frobenius matrix is not invertible");
    try {
        v.inertia.validate();
    } catch (const std::exception& e) {
        bad.push_back(std::string("inertia action: ") + e.what());
    }
    if (bad.empty()) {
        CMatrix phi_inv = v.frobenius.inverse();
        for (unsigned g : G.generators()) {
            if (!(v.frobenius * v.inertia.at(g) * phi_inv == v.inertia.at(G.frobenius_conj(g)))) {
                bad.push_back("frobenius does not normalize the inertia action at generator " +
                              std::to_string(g));
            }
        }
        Cyclotomic qinv = Cyclotomic(Rational(1) / Rational(v.q()));
        if (!(v.frobenius * v.monodromy * phi_inv == v.monodromy * qinv))
            bad.push_back("frobenius-monodromy relation Phi N Phi^{-1} = q^{-1} N fails");
        for (unsigned g : G.generators())
            if (!(v.inertia.at(g) * v.monodromy == v.monodromy * v.inertia.at(g)))
                bad.push_back("monodromy does not commute with inertia at generator " +
                              std::to_string(g));
        // nilpotency
        CMatrix p = v.monodromy;
        for (std::size_t i = 1; i < d; ++i) p = p * v.monodromy;
        if (d > 0 && !p.is_zero()) bad.push_back("monodromy is not nilpotent");
    }
    return bad;
}

/// e_tau and the normalized extension matrix tilde_tau(Fr^{e_tau}).
inline InertialType stabilizer_type(const FiniteRep& tau) {
    const auto& G = *tau.group();
    CharacterVector chi = tau.character();
    auto conj_char = [&](unsigned k) {
        CharacterVector c;
        c.group = tau.group();
        c.values.resize(G.class_count());
        for (std::size_t cl = 0; cl < G.class_count(); ++cl) {
            unsigned g = G.class_rep(cl);
            for (unsigned i = 0; i < k; ++i) g = G.frobenius_conj_inv(g);
            c.values[cl] = chi.at_element(g);
        }
        return c;
    };
    unsigned e = 0;
    for (unsigned k = 1; k <= G.frobenius_order(); ++k) {
        if (conj_char(k) == chi) { e = k; break; }
    }
    if (e == 0) throw std::logic_error("stabilizer_type: no stabilizing power found");

    FiniteRep sigma = tau.conjugated(-static_cast<long>(e));
    auto basis = hom_space(tau, sigma);
    if (basis.size() != 1)
        throw std::logic_error("stabilizer_type: intertwiner space is not one-dimensional");
    CMatrix a = basis[0];
    // scale so the first nonzero entry (row-major) is 1
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!(a(i, j) == Cyclotomic(0))) {
                Cyclotomic inv = a(i, j).inverse();
                return InertialType{tau, e, static_cast<unsigned>(tau.dim()), a * inv};
            }
    throw std::logic_error("stabilizer_type: zero intertwiner");
}

/// Canonical representatives of the Frobenius-conjugation orbits on the
/// irreducibles of the inertia group: lexicographically minimal character
/// vector within each orbit, orbits listed by their minimal character.
inline std::vector<InertialType> inertial_orbit_representatives(const GroupPtr& g) {
    const auto& irr = IrreducibleSet::of(g);
    const FiniteGroup& G = *g;
    std::vector<bool> used(irr.size(), false);
    std::vector<InertialType> out;
    auto conj_values = [&](const CharacterVector& chi, unsigned k) {
        std::vector<Cyclotomic> v(G.class_count());
        for (std::size_t cl = 0; cl < G.class_count(); ++cl) {
            unsigned x = G.class_rep(cl);
            for (unsigned i = 0; i < k; ++i) x = G.frobenius_conj_inv(x);
            v[cl] = chi.at_element(x);
        }
        return v;
    };
    for (std::size_t i = 0; i < irr.size(); ++i) {
        if (used[i]) continue;
        // orbit of i under frobenius conjugation, tracked by character values
        std::vector<std::size_t> orbit;
        for (unsigned k = 0; k < G.frobenius_order(); ++k) {
            auto vals = conj_values(irr.entry(i).chi, k);
            for (std::size_t j = 0; j < irr.size(); ++j)
                if (!used[j] && irr.entry(j).chi.values == vals) {
                    used[j] = true;
                    orbit.push_back(j);
                }
        }
        // entries are already sorted by character; the orbit's first member is minimal
        std::size_t rep = *std::min_element(orbit.begin(), orbit.end());
        out.push_back(stabilizer_type(irr.entry(rep).rep));
    }
    return out;
}

namespace detail {

/// Basis matrices of Hom_I(tau, V) together with a coordinate solver.
struct HomBlock {
    std::vector<CMatrix> basis; // d x D intertwiners mapping tau into V
    CMatrix coords;             // (d*D) x n, columns are vectorized basis elements
};

inline HomBlock hom_block(const FiniteRep& tau, const FiniteRep& v) {
    // intertwiners f: tau -> V with f tau(g) = rho(g) f, as D x d matrices
    HomBlock hb;
    auto maps = hom_space(tau, v); // basis of {X : X tau(g) = rho(g) X}, X is D x d
    hb.basis = maps;
    std::size_t d = tau.dim(), D = v.dim();
    hb.coords = CMatrix(d * D, maps.size());
    for (std::size_t c = 0; c < maps.size(); ++c)
        for (std::size_t i = 0; i < D; ++i)
            for (std::size_t j = 0; j < d; ++j) hb.coords(i * d + j, c) = maps[c](i, j);
    return hb;
}

inline std::vector<Cyclotomic> vectorize(const CMatrix& m) {
    std::vector<Cyclotomic> v(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) v[i * m.cols() + j] = m(i, j);
    return v;
}

} // namespace detail

/// Decomposition by inertial type: for each orbit representative tau, the
/// block Hom_I(tilde tau, V) carries Fr^{e_tau} via f -> Phi^e f A^{-1} and
/// N via f -> N f.
inline TypeDecomposition type_decompose(const WDRep& v) {
    auto bad = check_wd_axioms(v);
    if (!bad.empty())
        throw std::invalid_argument("type_decompose: invalid WD representation: " + bad.front());
    TypeDecomposition dec;
    dec.total_dim = v.dim();
    for (const auto& t : inertial_orbit_representatives(v.group())) {
        auto hb = detail::hom_block(t.tau, v.inertia);
        std::size_t n = hb.basis.size();
        if (n == 0) continue;
        CMatrix phi_e = CMatrix::identity(v.dim());
        for (unsigned i = 0; i < t.e_tau; ++i) phi_e = phi_e * v.frobenius;
        CMatrix a_inv = t.tilde_frobenius.inverse();
        CMatrix bf(n, n), bn(n, n);
        for (std::size_t c = 0; c < n; ++c) {
            CMatrix f_img = phi_e * hb.basis[c] * a_inv;
            CMatrix n_img = v.monodromy * hb.basis[c];
            auto fx = hb.coords.solve(detail::vectorize(f_img));
            auto nx = hb.coords.solve(detail::vectorize(n_img));
            for (std::size_t r = 0; r < n; ++r) {
                bf(r, c) = fx[r];
                bn(r, c) = nx[r];
            }
        }
        dec.blocks.push_back(TypeBlock{t, std::move(bf), std::move(bn)});
    }
    if (dec.star_sum() != v.dim())
        throw std::logic_error("type_decompose: star condition failed");
    return dec;
}

/// Induction of a single block back to a WD representation of K.
inline WDRep induce_block(const GroupPtr& g, const TypeBlock& b) {
    const FiniteGroup& G = *g;
    unsigned e = b.type.e_tau;
    std::size_t d = b.type.d_tau, n = b.n_tau();
    std::size_t dim = static_cast<std::size_t>(e) * d * n;
    auto at = [&](unsigned j, std::size_t a, std::size_t u) {
        return (static_cast<std::size_t>(j) * d + a) * n + u;
    };
    // inertia: g acts on summand j through tau(fc^{-j}(g))
    std::vector<CMatrix> mats(G.order(), CMatrix(dim, dim));
    for (unsigned x = 0; x < G.order(); ++x) {
        for (unsigned j = 0; j < e; ++j) {
            unsigned y = x;
            for (unsigned i = 0; i < j; ++i) y = G.frobenius_conj_inv(y);
            const CMatrix& m = b.type.tau.at(y);
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t a2 = 0; a2 < d; ++a2) {
                    if (m(a, a2) == Cyclotomic(0)) continue;
                    for (std::size_t u = 0; u < n; ++u)
                        mats[x](at(j, a, u), at(j, a2, u)) = m(a, a2);
                }
        }
    }
    // frobenius: j -> j+1 identically, wrapping through A (x) B at the top
    CMatrix phi(dim, dim), mono(dim, dim);
    for (unsigned j = 0; j + 1 < e; ++j)
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t u = 0; u < n; ++u) phi(at(j + 1, a, u), at(j, a, u)) = Cyclotomic(1);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t a2 = 0; a2 < d; ++a2)
            for (std::size_t u = 0; u < n; ++u)
                for (std::size_t u2 = 0; u2 < n; ++u2) {
                    Cyclotomic c = b.type.tilde_frobenius(a, a2) * b.frobenius(u, u2);
                    if (!(c == Cyclotomic(0))) phi(at(0, a, u), at(e - 1, a2, u2)) = c;
                }
    // monodromy: q^j * (1 (x) N_U) on summand j
    Cyclotomic qc{Rational(g->q())};
    for (unsigned j = 0; j < e; ++j) {
        Cyclotomic qj = qc.pow(j);
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t u = 0; u < n; ++u)
                for (std::size_t u2 = 0; u2 < n; ++u2) {
                    Cyclotomic c = b.monodromy(u, u2) * qj;
                    if (!(c == Cyclotomic(0))) mono(at(j, a, u), at(j, a, u2)) = c;
                }
    }
    return WDRep{FiniteRep(g, std::move(mats), false), std::move(phi), std::move(mono)};
}

inline WDRep reassemble(const GroupPtr& g, const TypeDecomposition& dec) {
    if (dec.star_sum() != dec.total_dim)
        throw std::invalid_argument("reassemble: star condition violated");
    if (dec.blocks.empty()) throw std::invalid_argument("reassemble: empty decomposition");
    WDRep acc = induce_block(g, dec.blocks[0]);
    for (std::size_t i = 1; i < dec.blocks.size(); ++i) {
        WDRep next = induce_block(g, dec.blocks[i]);
        std::vector<CMatrix> mats(g->order());
        for (unsigned x = 0; x < g->order(); ++x)
            mats[x] = CMatrix::block_diag({acc.inertia.at(x), next.inertia.at(x)});
        acc = WDRep{FiniteRep(g, std::move(mats), false),
                    CMatrix::block_diag({acc.frobenius, next.frobenius}),
                    CMatrix::block_diag({acc.monodromy, next.monodromy})};
    }
    return acc;
}

/// Basis of Hom_WD(V1, V2): intertwiners for inertia, Frobenius and N.
inline std::vector<CMatrix> hom_wd_basis(const WDRep& v1, const WDRep& v2) {
    if (v1.group() != v2.group() || v1.q() != v2.q())
        throw std::invalid_argument("hom_wd: representations over different (group, q)");
    std::size_t d1 = v1.dim(), d2 = v2.dim();
    auto gens = v1.group()->generators();
    std::vector<std::pair<CMatrix, CMatrix>> conditions;
    for (unsigned g : gens) conditions.emplace_back(v1.inertia.at(g), v2.inertia.at(g));
    conditions.emplace_back(v1.frobenius, v2.frobenius);
    conditions.emplace_back(v1.monodromy, v2.monodromy);

    CMatrix sys(conditions.size() * d1 * d2, d1 * d2);
    std::size_t row = 0;
    auto idx = [d1](std::size_t i, std::size_t j) { return i * d1 + j; };
    for (const auto& [m1, m2] : conditions) {
        for (std::size_t i = 0; i < d2; ++i)
            for (std::size_t j = 0; j < d1; ++j) {
                for (std::size_t k = 0; k < d1; ++k)
                    sys(row, idx(i, k)) = sys(row, idx(i, k)) + m1(k, j);
                for (std::size_t k = 0; k < d2; ++k)
                    sys(row, idx(k, j)) = sys(row, idx(k, j)) - m2(i, k);
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

inline std::size_t hom_wd(const WDRep& v1, const WDRep& v2) { return hom_wd_basis(v1, v2).size(); }

/// Hom dimension of two unramified blocks (trivial inertia): maps commuting
/// with the block Frobenius and monodromy.
inline std::size_t hom_block_dim(const TypeBlock& b1, const TypeBlock& b2) {
    std::size_t d1 = b1.n_tau(), d2 = b2.n_tau();
    CMatrix sys(2 * d1 * d2, d1 * d2);
    std::size_t row = 0;
    auto idx = [d1](std::size_t i, std::size_t j) { return i * d1 + j; };
    std::vector<std::pair<const CMatrix*, const CMatrix*>> conds{
        {&b1.frobenius, &b2.frobenius}, {&b1.monodromy, &b2.monodromy}};
    for (auto [m1, m2] : conds) {
        for (std::size_t i = 0; i < d2; ++i)
            for (std::size_t j = 0; j < d1; ++j) {
                for (std::size_t k = 0; k < d1; ++k)
                    sys(row, idx(i, k)) = sys(row, idx(i, k)) + (*m1)(k, j);
                for (std::size_t k = 0; k < d2; ++k)
                    sys(row, idx(k, j)) = sys(row, idx(k, j)) - (*m2)(i, k);
                ++row;
            }
    }
    return sys.kernel().cols();
}

/// Hom via the type decomposition: sum over matching types of block homs.
inline std::size_t hom_wd_blockwise(const WDRep& v1, const WDRep& v2) {
    auto d1 = type_decompose(v1), d2 = type_decompose(v2);
    std::size_t total = 0;
    for (const auto& b1 : d1.blocks)
        for (const auto& b2 : d2.blocks) {
            if (b1.type.tau.character() == b2.type.tau.character()) total += hom_block_dim(b1, b2);
        }
    return total;
}

/// Invertible intertwiner between isomorphic WD representations, when one exists.
inline std::optional<CMatrix> wd_isomorphism(const WDRep& v1, const WDRep& v2) {
    if (v1.dim() != v2.dim()) return std::nullopt;
    auto basis = hom_wd_basis(v1, v2);
    if (basis.empty()) return std::nullopt;
    for (const auto& b : basis)
        if (b.is_invertible()) return b;
    // generic combinations x -> sum lambda^i b_i hit an invertible element when
    // one exists; the failure locus is a proper algebraic set
    for (int lambda = 1; lambda <= 16; ++lambda) {
        CMatrix acc(v2.dim(), v1.dim());
        Cyclotomic l(lambda), pw(1);
        for (const auto& b : basis) {
            acc = acc + b * pw;
            pw = pw * l;
        }
        if (acc.is_invertible()) return acc;
    }
    return std::nullopt;
}

/// Twist stabilizer Y_tau: linear characters psi of the inertia quotient with
/// tau (x) psi isomorphic to some Frobenius conjugate of tau; reports the
/// witnessing power k for each member.
struct TwistStabilizer {
    std::vector<std::vector<Cyclotomic>> characters; // element-indexed values
    std::vector<unsigned> witnesses;                 // matching k per character
};

inline TwistStabilizer twist_stabilizer(const FiniteRep& tau) {
    const auto& G = *tau.group();
    const auto& irr = IrreducibleSet::of(tau.group());
    CharacterVector chi = tau.character();
    TwistStabilizer out;
    for (std::size_t i = 0; i < irr.size(); ++i) {
        if (irr.entry(i).degree != 1) continue;
        const auto& psi = irr.entry(i).rep;
        // character of tau (x) psi
        CharacterVector twisted;
        twisted.group = tau.group();
        twisted.values.resize(G.class_count());
        for (std::size_t c = 0; c < G.class_count(); ++c)
            twisted.values[c] = chi.values[c] * psi.at(G.class_rep(c))(0, 0);
        for (unsigned k = 0; k < G.frobenius_order(); ++k) {
            // character of tau^{Fr^k}
            CharacterVector conj;
            conj.group = tau.group();
            conj.values.resize(G.class_count());
            for (std::size_t c = 0; c < G.class_count(); ++c) {
                unsigned x = G.class_rep(c);
                for (unsigned s = 0; s < k; ++s) x = G.frobenius_conj_inv(x);
                conj.values[c] = chi.at_element(x);
            }
            if (twisted == conj) {
                std::vector<Cyclotomic> vals(G.order());
                for (unsigned g = 0; g < G.order(); ++g) vals[g] = psi.at(g)(0, 0);
                out.characters.push_back(std::move(vals));
                out.witnesses.push_back(k);
                break;
            }
        }
    }
    return out;
}

/// (is_frobenius_semisimple, is_N_zero): semisimplicity decided by
/// squarefreeness of the minimal polynomial of the block Frobenius on each
/// isotypic block, computed exactly.
inline std::pair<bool, bool> frobenius_semisimple_check(const WDRep& v) {
    bool n_zero = v.monodromy.is_zero();
    bool fss = true;
    for (const auto& b : type_decompose(v).blocks) {
        if (!poly_squarefree(b.frobenius.minpoly())) {
            fss = false;
            break;
        }
    }
    return {fss, n_zero};
}

} // namespace phk
