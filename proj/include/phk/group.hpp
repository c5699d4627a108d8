#pragma once

#include <algorithm>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "phk/rational.hpp"

namespace phk {

/// Finite group given by an explicit Cayley table, together with the
/// conjugation action of a fixed Frobenius lift and the residue cardinality q.
/// Element 0 is the identity. Desk scale: |G| <= 48.
class FiniteGroup {
public:
    FiniteGroup(std::vector<std::vector<unsigned>> cayley, std::vector<unsigned> frobenius_conj,
                Int q)
        : mul_(std::move(cayley)), frob_(std::move(frobenius_conj)), q_(std::move(q)) {
        n_ = static_cast<unsigned>(mul_.size());
        validate();
        build();
    }

    unsigned order() const { return n_; }
    const Int& q() const { return q_; }
    unsigned mul(unsigned a, unsigned b) const { return mul_[a][b]; }
    unsigned inv(unsigned a) const { return inv_[a]; }
    unsigned frobenius_conj(unsigned a) const { return frob_[a]; }
    unsigned frobenius_conj_inv(unsigned a) const { return frob_inv_[a]; }
    const std::vector<std::vector<unsigned>>& cayley() const { return mul_; }
    const std::vector<unsigned>& frobenius_perm() const { return frob_; }

    unsigned pow(unsigned g, long k) const {
        long m = k % static_cast<long>(element_order(g));
        if (m < 0) m += element_order(g);
        unsigned r = 0;
        for (long i = 0; i < m; ++i) r = mul_[r][g];
        return r;
    }

    unsigned element_order(unsigned g) const { return order_[g]; }
    unsigned exponent() const { return exponent_; }

    std::size_t class_count() const { return class_reps_.size(); }
    unsigned class_of(unsigned g) const { return class_of_[g]; }
    unsigned class_rep(std::size_t c) const { return class_reps_[c]; }
    const std::vector<unsigned>& class_members(std::size_t c) const { return classes_[c]; }
    unsigned inverse_class(std::size_t c) const { return class_of_[inv_[class_reps_[c]]]; }

    /// Greedy generating set (small, not minimal).
    const std::vector<unsigned>& generators() const { return gens_; }

    /// Order of frobenius_conj as an automorphism.
    unsigned frobenius_order() const { return frob_order_; }

    /// Subgroup closure of a seed set; sorted element list.
    std::vector<unsigned> subgroup_closure(std::vector<unsigned> seed) const {
        std::vector<bool> in(n_, false);
        in[0] = true;
        std::vector<unsigned> elems{0};
        for (unsigned s : seed)
            if (!in[s]) { in[s] = true; elems.push_back(s); }
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t i = 0; i < elems.size(); ++i)
                for (std::size_t j = 0; j < elems.size(); ++j) {
                    unsigned p = mul_[elems[i]][elems[j]];
                    if (!in[p]) { in[p] = true; elems.push_back(p); grew = true; }
                }
        }
        std::sort(elems.begin(), elems.end());
        return elems;
    }

    bool is_subgroup(const std::vector<unsigned>& h) const {
        std::vector<bool> in(n_, false);
        for (unsigned x : h) {
            if (x >= n_) return false;
            in[x] = true;
        }
        if (!in[0]) return false;
        for (unsigned a : h)
            for (unsigned b : h)
                if (!in[mul_[a][b]]) return false;
        return true;
    }

    /// Left coset representatives of a subgroup.
    std::vector<unsigned> coset_reps(const std::vector<unsigned>& h) const {
        std::vector<bool> seen(n_, false);
        std::vector<unsigned> reps;
        for (unsigned g = 0; g < n_; ++g) {
            if (seen[g]) continue;
            reps.push_back(g);
            for (unsigned x : h) seen[mul_[g][x]] = true;
        }
        return reps;
    }

    // common builders

    static std::shared_ptr<const FiniteGroup> cyclic(unsigned n, Int q, unsigned frob_mult = 1) {
        std::vector<std::vector<unsigned>> c(n, std::vector<unsigned>(n));
        for (unsigned a = 0; a < n; ++a)
            for (unsigned b = 0; b < n; ++b) c[a][b] = (a + b) % n;
        std::vector<unsigned> f(n);
        for (unsigned a = 0; a < n; ++a) f[a] = (a * frob_mult) % n;
        return std::make_shared<FiniteGroup>(std::move(c), std::move(f), std::move(q));
    }

    /// Dihedral group of order 2n: elements r^a s^b with b in {0,1}, index a + n*b.
    static std::shared_ptr<const FiniteGroup> dihedral(unsigned n, Int q) {
        unsigned N = 2 * n;
        auto idx = [n](unsigned a, unsigned b) { return a % n + n * (b % 2); };
        std::vector<std::vector<unsigned>> c(N, std::vector<unsigned>(N));
        for (unsigned a1 = 0; a1 < n; ++a1)
            for (unsigned b1 = 0; b1 < 2; ++b1)
                for (unsigned a2 = 0; a2 < n; ++a2)
                    for (unsigned b2 = 0; b2 < 2; ++b2) {
                        // (r^a1 s^b1)(r^a2 s^b2) = r^{a1 + (-1)^{b1} a2} s^{b1+b2}
                        unsigned a = b1 ? (a1 + n - a2 % n) % n : (a1 + a2) % n;
                        c[idx(a1, b1)][idx(a2, b2)] = idx(a, b1 + b2);
                    }
        std::vector<unsigned> f(N);
        for (unsigned i = 0; i < N; ++i) f[i] = i;
        return std::make_shared<FiniteGroup>(std::move(c), std::move(f), std::move(q));
    }

private:
    void validate() const {
        if (n_ == 0) throw std::invalid_argument("FiniteGroup: empty Cayley table");
        for (const auto& row : mul_)
            if (row.size() != n_) throw std::invalid_argument("FiniteGroup: ragged Cayley table");
        for (unsigned a = 0; a < n_; ++a)
            for (unsigned b = 0; b < n_; ++b)
                if (mul_[a][b] >= n_) throw std::invalid_argument("FiniteGroup: entry out of range");
        for (unsigned a = 0; a < n_; ++a)
            if (mul_[0][a] != a || mul_[a][0] != a)
                throw std::invalid_argument("FiniteGroup: element 0 must be the identity");
        // rows and columns are permutations
        for (unsigned a = 0; a < n_; ++a) {
            std::vector<bool> seen_r(n_, false), seen_c(n_, false);
            for (unsigned b = 0; b < n_; ++b) {
                if (seen_r[mul_[a][b]] || seen_c[mul_[b][a]])
                    throw std::invalid_argument("FiniteGroup: Cayley table is not a group law");
                seen_r[mul_[a][b]] = true;
                seen_c[mul_[b][a]] = true;
            }
        }
        for (unsigned a = 0; a < n_; ++a)
            for (unsigned b = 0; b < n_; ++b)
                for (unsigned c = 0; c < n_; ++c)
                    if (mul_[mul_[a][b]][c] != mul_[a][mul_[b][c]])
                        throw std::invalid_argument("FiniteGroup: associativity fails");
        if (frob_.size() != n_)
            throw std::invalid_argument("FiniteGroup: frobenius permutation has wrong size");
        std::vector<bool> seen(n_, false);
        for (unsigned x : frob_) {
            if (x >= n_ || seen[x])
                throw std::invalid_argument("FiniteGroup: frobenius is not a permutation");
            seen[x] = true;
        }
        for (unsigned a = 0; a < n_; ++a)
            for (unsigned b = 0; b < n_; ++b)
                if (frob_[mul_[a][b]] != mul_[frob_[a]][frob_[b]])
                    throw std::invalid_argument("FiniteGroup: frobenius is not an automorphism");
        if (q_ < 2) throw std::invalid_argument("FiniteGroup: q must be at least 2");
    }

    void build() {
        inv_.assign(n_, 0);
        for (unsigned a = 0; a < n_; ++a)
            for (unsigned b = 0; b < n_; ++b)
                if (mul_[a][b] == 0) inv_[a] = b;
        frob_inv_.assign(n_, 0);
        for (unsigned a = 0; a < n_; ++a) frob_inv_[frob_[a]] = a;

        order_.assign(n_, 1);
        for (unsigned g = 0; g < n_; ++g) {
            unsigned x = g, k = 1;
            while (x != 0) { x = mul_[x][g]; ++k; }
            order_[g] = k;
        }
        exponent_ = 1;
        for (unsigned g = 0; g < n_; ++g) exponent_ = static_cast<unsigned>(std::lcm(exponent_, order_[g]));

        class_of_.assign(n_, n_);
        for (unsigned g = 0; g < n_; ++g) {
            if (class_of_[g] != n_) continue;
            unsigned c = static_cast<unsigned>(classes_.size());
            classes_.emplace_back();
            class_reps_.push_back(g);
            for (unsigned x = 0; x < n_; ++x) {
                unsigned conj = mul_[mul_[x][g]][inv_[x]];
                if (class_of_[conj] == n_) {
                    class_of_[conj] = c;
                    classes_[c].push_back(conj);
                }
            }
        }

        // greedy generators
        std::vector<unsigned> cur{0};
        std::vector<bool> in(n_, false);
        in[0] = true;
        for (unsigned g = 1; g < n_; ++g) {
            if (in[g]) continue;
            gens_.push_back(g);
            auto closure = subgroup_closure(gens_);
            in.assign(n_, false);
            for (unsigned x : closure) in[x] = true;
            if (closure.size() == n_) break;
        }

        frob_order_ = 1;
        std::vector<unsigned> perm = frob_;
        auto is_id = [&](const std::vector<unsigned>& p) {
            for (unsigned i = 0; i < n_; ++i)
                if (p[i] != i) return false;
            return true;
        };
        while (!is_id(perm)) {
            std::vector<unsigned> next(n_);
            for (unsigned i = 0; i < n_; ++i) next[i] = frob_[perm[i]];
            perm = next;
            ++frob_order_;
        }
    }

    unsigned n_;
    std::vector<std::vector<unsigned>> mul_;
    std::vector<unsigned> frob_, frob_inv_, inv_, order_;
    std::vector<std::vector<unsigned>> classes_;
    std::vector<unsigned> class_reps_, class_of_, gens_;
    unsigned exponent_ = 1, frob_order_ = 1;
    Int q_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

} // namespace phk
