#pragma once

#include <cstdint>
#include <vector>

#include "phk/cyclotomic.hpp"
#include "phk/group.hpp"
#include "phk/matrix.hpp"

namespace phk {

namespace detail {

/// Prime field scalar for the modular character-table computation.
struct Fp {
    static inline std::uint64_t p = 0; // set once per computation, single-threaded
    std::uint64_t v = 0;
    Fp() = default;
    Fp(int x) {
        long long r = x % static_cast<long long>(p);
        if (r < 0) r += p;
        v = static_cast<std::uint64_t>(r);
    }
    static Fp of(std::uint64_t x) {
        Fp f;
        f.v = x % p;
        return f;
    }
    bool operator==(const Fp& o) const { return v == o.v; }
    Fp operator+(const Fp& o) const { return of(v + o.v); }
    Fp operator-(const Fp& o) const { return of(v + p - o.v); }
    Fp operator*(const Fp& o) const { return of(v * o.v); }
    Fp operator/(const Fp& o) const { return *this * o.inverse(); }
    Fp inverse() const {
        // p is prime, Fermat
        std::uint64_t base = v % p, e = p - 2, acc = 1;
        while (e) {
            if (e & 1) acc = acc * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return of(acc);
    }
    Fp pow(std::uint64_t e) const {
        std::uint64_t base = v % p, acc = 1;
        while (e) {
            if (e & 1) acc = acc * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return of(acc);
    }
};

} // namespace detail

/// Class function with exact cyclotomic values, indexed by conjugacy class.
struct CharacterVector {
    GroupPtr group;
    std::vector<Cyclotomic> values; // one per conjugacy class

    const Cyclotomic& at_class(std::size_t c) const { return values.at(c); }
    const Cyclotomic& at_element(unsigned g) const { return values.at(group->class_of(g)); }

    /// <this, other> = (1/|G|) sum_i |C_i| this(g_i) other(g_i^{-1})
    Rational inner(const CharacterVector& o) const {
        Cyclotomic acc(0);
        for (std::size_t c = 0; c < values.size(); ++c) {
            Rational size(static_cast<long>(group->class_members(c).size()));
            acc = acc + Cyclotomic(size) * values[c] * o.values[o.group->inverse_class(c)];
        }
        acc = acc * Cyclotomic(Rational(1, static_cast<long>(group->order())));
        if (!acc.is_rational())
            throw std::logic_error("CharacterVector::inner: non-rational inner product");
        return acc.rational_value();
    }

    bool operator==(const CharacterVector& o) const { return values == o.values; }
};

/// Exact irreducible character table, computed modulo a prime p = 1 (mod exp G)
/// and lifted to Q(zeta_{exp G}) from eigenvalue multiplicities.
class CharacterTable {
public:
    explicit CharacterTable(GroupPtr g) : g_(std::move(g)) { compute(); }

    std::size_t size() const { return chars_.size(); }
    const CharacterVector& character(std::size_t i) const { return chars_[i]; }
    unsigned degree(std::size_t i) const { return degrees_[i]; }

    /// Multiplicity of eigenvalue zeta_e^j of the i-th irreducible at class c,
    /// where e is the order of the class representative.
    unsigned eigen_multiplicity(std::size_t i, std::size_t c, unsigned j) const {
        return eigmult_[i][c][j];
    }

private:
    void compute();

    GroupPtr g_;
    std::vector<CharacterVector> chars_;
    std::vector<unsigned> degrees_;
    std::vector<std::vector<std::vector<unsigned>>> eigmult_;
};

inline void CharacterTable::compute() {
    using detail::Fp;
    const FiniteGroup& G = *g_;
    const std::size_t r = G.class_count();
    const unsigned n = G.order(), E = G.exponent();

    // prime p = 1 mod exp(G) with p > 2|G| so dimensions are recovered uniquely
    std::uint64_t p = E + 1;
    while (p <= 2 * n || (p - 1) % E != 0 || !is_prime(Int(static_cast<long>(p)))) ++p;
    Fp::p = p;

    // generator of the order-E subgroup of F_p^*
    Fp zE = Fp::of(1);
    if (E > 1) {
        zE = Fp(0);
        for (std::uint64_t w = 2; w < p; ++w) {
            Fp cand = Fp::of(w).pow((p - 1) / E);
            bool primitive = cand.v != 1;
            for (unsigned d = 2; primitive && d < E; ++d)
                if (E % d == 0 && cand.pow(d).v == 1) primitive = false;
            if (primitive) { zE = cand; break; }
        }
        if (zE.v == 0) throw std::logic_error("CharacterTable: no primitive root found");
    }

    // class-sum structure constants: K_i K_j = sum_k a_{ijk} K_k
    std::vector<Matrix<Fp>> M(r, Matrix<Fp>(r, r));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < r; ++k) {
            unsigned zk = G.class_rep(k);
            std::vector<std::uint64_t> count(r, 0);
            for (unsigned x : G.class_members(i)) {
                unsigned y = G.mul(G.inv(x), zk);
                count[G.class_of(y)]++;
            }
            // a_{ijk}: coefficient of K_k in K_i K_j; count pairs x in C_i, y in C_j with xy = z_k
            for (std::size_t j = 0; j < r; ++j) M[i](k, j) = Fp::of(count[j]);
        }

    // simultaneous eigenspace refinement: subspaces stored as column bases
    std::vector<Matrix<Fp>> spaces{Matrix<Fp>::identity(r)};
    for (std::size_t i = 0; i < r; ++i) {
        std::vector<Matrix<Fp>> next;
        for (auto& S : spaces) {
            if (S.cols() == 1) { next.push_back(S); continue; }
            // restriction R of M_i to the column space of S: M_i S = S R
            std::size_t k = S.cols();
            Matrix<Fp> MS = M[i] * S;
            Matrix<Fp> R(k, k);
            for (std::size_t col = 0; col < k; ++col) {
                auto x = S.solve(MS.column(col));
                for (std::size_t row = 0; row < k; ++row) R(row, col) = x[row];
            }
            auto cp = R.charpoly();
            bool split_any = false;
            for (std::uint64_t lam = 0; lam < p; ++lam) {
                if (!(cp.eval(Fp::of(lam)) == Fp(0))) continue;
                Matrix<Fp> shifted = R;
                for (std::size_t d = 0; d < k; ++d) shifted(d, d) = shifted(d, d) - Fp::of(lam);
                Matrix<Fp> ker = shifted.kernel();
                if (ker.cols() == k) { next.push_back(S); split_any = true; break; }
                next.push_back(S * ker);
                split_any = true;
            }
            if (!split_any) throw std::logic_error("CharacterTable: eigenvalue not in F_p");
        }
        spaces = std::move(next);
    }
    if (spaces.size() != r)
        throw std::logic_error("CharacterTable: class algebra did not split into lines");

    // central characters omega_i from each common eigenvector
    std::vector<std::vector<Fp>> omega(r, std::vector<Fp>(r));
    for (std::size_t s = 0; s < r; ++s) {
        auto v = spaces[s].column(0);
        std::size_t pivot = 0;
        while (pivot < v.size() && v[pivot] == Fp(0)) ++pivot;
        for (std::size_t i = 0; i < r; ++i) {
            auto w = (M[i] * spaces[s]).column(0);
            omega[s][i] = w[pivot] / v[pivot];
        }
    }

    // degrees: d^2 = |G| / sum_i omega_i omega_{i*} / |C_i|
    std::vector<unsigned> degs(r, 0);
    for (std::size_t s = 0; s < r; ++s) {
        Fp t(0);
        for (std::size_t i = 0; i < r; ++i) {
            Fp ci = Fp::of(G.class_members(i).size());
            t = t + omega[s][i] * omega[s][G.inverse_class(i)] / ci;
        }
        Fp d2 = Fp::of(n) / t;
        for (unsigned d = 1; static_cast<std::uint64_t>(d) * d <= n; ++d)
            if (Fp::of(d).pow(2) == d2) { degs[s] = d; break; }
        if (degs[s] == 0) throw std::logic_error("CharacterTable: degree recovery failed");
    }

    // character values mod p, then exact lift from eigenvalue multiplicities
    // chi(g) = sum_j m_j zeta_e^j with m_j = (1/e) sum_k chi(g^k) z_e^{-jk} mod p
    chars_.clear();
    degrees_.clear();
    eigmult_.clear();
    for (std::size_t s = 0; s < r; ++s) {
        std::vector<Fp> chi_mod(r);
        for (std::size_t i = 0; i < r; ++i)
            chi_mod[i] = Fp::of(degs[s]) * omega[s][i] / Fp::of(G.class_members(i).size());

        CharacterVector cv;
        cv.group = g_;
        cv.values.resize(r);
        std::vector<std::vector<unsigned>> mults(r);
        for (std::size_t c = 0; c < r; ++c) {
            unsigned g = G.class_rep(c);
            unsigned e = G.element_order(g);
            Fp ze = zE.pow(E / e);
            std::vector<unsigned> m(e, 0);
            Cyclotomic value(0);
            for (unsigned j = 0; j < e; ++j) {
                Fp acc(0);
                for (unsigned k = 0; k < e; ++k) {
                    unsigned gk = G.pow(g, k);
                    acc = acc + chi_mod[G.class_of(gk)] * ze.pow(static_cast<std::uint64_t>(j) * k).inverse();
                }
                acc = acc / Fp::of(e);
                if (acc.v > degs[s])
                    throw std::logic_error("CharacterTable: eigenvalue multiplicity out of range");
                m[j] = static_cast<unsigned>(acc.v);
                if (m[j]) value = value + Cyclotomic(Rational(m[j])) * Cyclotomic::zeta(E, static_cast<long>(j) * (E / e));
            }
            unsigned total = 0;
            for (unsigned j = 0; j < e; ++j) total += m[j];
            if (total != degs[s]) throw std::logic_error("CharacterTable: multiplicities inconsistent");
            cv.values[c] = value;
            mults[c] = std::move(m);
        }
        chars_.push_back(std::move(cv));
        degrees_.push_back(degs[s]);
        eigmult_.push_back(std::move(mults));
    }

    // exact verification: first orthogonality relations
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) {
            Rational ip = chars_[a].inner(chars_[b]);
            if (ip != Rational(a == b ? 1 : 0))
                throw std::logic_error("CharacterTable: orthogonality verification failed");
        }
    unsigned sumsq = 0;
    for (unsigned d : degrees_) sumsq += d * d;
    if (sumsq != n) throw std::logic_error("CharacterTable: sum of squared degrees mismatch");
}

} // namespace phk
