#pragma once

#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "phk/polynomial.hpp"
#include "phk/rational.hpp"

namespace phk {

namespace detail {
inline const Poly<Rational>& cyclo_modulus(unsigned m) {
    static std::map<unsigned, Poly<Rational>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, cyclotomic_poly(m)).first;
    return it->second;
}
} // namespace detail

/// Element of the cyclotomic field Q(zeta_m), stored as a residue modulo Phi_m
/// in the power basis 1, zeta, ..., zeta^{phi(m)-1}. Conductors are merged to
/// the lcm before mixed arithmetic. Immutable after construction.
class Cyclotomic {
public:
    Cyclotomic() : m_(1), c_(1, Rational(0)) {}
    Cyclotomic(int v) : m_(1), c_(1, Rational(v)) {}
    Cyclotomic(const Rational& v) : m_(1), c_(1, v) {}
    Cyclotomic(unsigned m, std::vector<Rational> coeffs) : m_(m), c_(std::move(coeffs)) {
        if (m_ == 0) throw std::invalid_argument("Cyclotomic: conductor must be positive");
        if (c_.size() != euler_phi(m_))
            throw std::invalid_argument("Cyclotomic: coefficient vector length must be phi(m)");
    }

    /// zeta_m^k
    static Cyclotomic zeta(unsigned m, long k = 1) {
        long r = k % static_cast<long>(m);
        if (r < 0) r += m;
        return from_power(m, static_cast<unsigned>(r));
    }

    unsigned conductor() const { return m_; }
    const std::vector<Rational>& coeffs() const { return c_; }

    bool is_zero() const {
        for (const auto& a : c_)
            if (a != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }
    Rational rational_value() const {
        if (!is_rational()) throw std::domain_error("Cyclotomic::rational_value: not rational");
        return c_[0];
    }

    Cyclotomic operator+(const Cyclotomic& o) const {
        if (m_ == o.m_) {
            Cyclotomic r = *this;
            for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += o.c_[i];
            return r;
        }
        auto [a, b] = merged(*this, o);
        for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] += b.c_[i];
        return a;
    }
    Cyclotomic operator-() const {
        Cyclotomic r = *this;
        for (auto& a : r.c_) a = -a;
        return r;
    }
    Cyclotomic operator-(const Cyclotomic& o) const { return *this + (-o); }
    Cyclotomic operator*(const Cyclotomic& o) const {
        // scalar fast paths dominate matrix work in practice
        if (is_rational()) {
            if (c_[0] == 0) return Cyclotomic(o.m_, std::vector<Rational>(o.c_.size(), Rational(0)));
            Cyclotomic r = o;
            for (auto& x : r.c_) x *= c_[0];
            return r;
        }
        if (o.is_rational()) return o * *this;
        auto [a, b] = merged(*this, o);
        Poly<Rational> p = a.as_poly() * b.as_poly();
        return reduce(a.m_, p);
    }
    Cyclotomic inverse() const {
        if (is_zero()) throw std::domain_error("Cyclotomic::inverse: division by zero");
        // extended Euclid against Phi_m
        Poly<Rational> r0 = detail::cyclo_modulus(m_), r1 = as_poly();
        Poly<Rational> t0, t1 = Poly<Rational>::constant(Rational(1));
        while (!r1.is_zero()) {
            auto [q, r2] = r0.divmod(r1);
            Poly<Rational> t2 = t0 - q * t1;
            r0 = r1; r1 = r2;
            t0 = t1; t1 = t2;
        }
        if (r0.degree() != 0) throw std::logic_error("Cyclotomic::inverse: modulus not coprime");
        return reduce(m_, t0 * (Rational(1) / r0.coeff(0)));
    }
    Cyclotomic operator/(const Cyclotomic& o) const { return *this * o.inverse(); }

    bool operator==(const Cyclotomic& o) const {
        if (m_ == o.m_) return c_ == o.c_;  // residues are canonical per conductor
        return (*this - o).is_zero();
    }
    bool operator!=(const Cyclotomic& o) const { return !(*this == o); }

    Cyclotomic pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        Cyclotomic acc(1), base = *this;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    /// Galois action zeta -> zeta^a for gcd(a, m) = 1.
    Cyclotomic galois(unsigned a) const {
        if (std::gcd(a, m_) != 1)
            throw std::invalid_argument("Cyclotomic::galois: exponent not coprime to conductor");
        Poly<Rational> p;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            unsigned e = static_cast<unsigned>((static_cast<unsigned long>(a) * i) % m_);
            p = p + from_power(m_, e).as_poly() * c_[i];
        }
        return reduce(m_, p);
    }

    /// Smallest cyclotomic field containing the element, with m never 2 mod 4.
    Cyclotomic normalized() const {
        Cyclotomic x = *this;
        bool shrunk = true;
        while (shrunk) {
            shrunk = false;
            if (x.m_ % 4 == 2) {
                x = x.rewritten(x.m_ / 2);
                shrunk = true;
                continue;
            }
            for (unsigned p = 2; p <= x.m_; ++p) {
                if (x.m_ % p != 0 || !is_prime(Int(p))) continue;
                unsigned m2 = x.m_ / p;
                if (x.fixed_by_subfield_galois(m2)) {
                    x = x.rewritten(m2);
                    shrunk = true;
                    break;
                }
            }
        }
        return x;
    }

    /// Lexicographic total order on normalized (conductor, coefficients) data.
    static int compare(const Cyclotomic& x, const Cyclotomic& y) {
        Cyclotomic a = x.normalized(), b = y.normalized();
        if (a.m_ != b.m_) return a.m_ < b.m_ ? -1 : 1;
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i] ? -1 : 1;
        }
        return 0;
    }

    /// val(x) = val(x^s)/s for the smallest s with x^s rational.
    /// Defined exactly for monomials c*zeta^k; nullopt when no power is rational
    /// (valuation depends on a choice of prime above p in that case).
    std::optional<Rational> padic_val_if_defined(const Int& p) const {
        if (is_zero()) throw std::domain_error("padic_val_if_defined: zero element");
        if (is_rational()) return padic_val(rational_value(), p);
        Cyclotomic acc = *this;
        for (unsigned s = 2; s <= 2 * m_; ++s) {
            acc = acc * *this;
            if (acc.is_rational()) {
                auto v = padic_val(acc.rational_value(), p);
                return Rational(*v / Rational(s));
            }
        }
        return std::nullopt;
    }

    Cyclotomic rewritten(unsigned target_m) const;

    std::string str() const {
        std::ostringstream os;
        os << "[m=" << m_ << ";";
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i) os << ",";
            os << rational_str(c_[i]);
        }
        os << "]";
        return os.str();
    }

private:
    Poly<Rational> as_poly() const { return Poly<Rational>(c_); }

    static Cyclotomic reduce(unsigned m, const Poly<Rational>& p) {
        Poly<Rational> r = p % detail::cyclo_modulus(m);
        std::vector<Rational> c(euler_phi(m), Rational(0));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = r.coeff(i);
        return Cyclotomic(m, std::move(c));
    }

    static Cyclotomic from_power(unsigned m, unsigned e) {
        return reduce(m, Poly<Rational>::monomial(e, Rational(1)));
    }

    // embed into Q(zeta_L), L = lcm of conductors
    static std::pair<Cyclotomic, Cyclotomic> merged(const Cyclotomic& x, const Cyclotomic& y) {
        if (x.m_ == y.m_) return {x, y};
        unsigned L = static_cast<unsigned>(std::lcm(x.m_, y.m_));
        return {x.embedded(L), y.embedded(L)};
    }

    Cyclotomic embedded(unsigned L) const {
        if (L == m_) return *this;
        if (L % m_ != 0) throw std::invalid_argument("Cyclotomic::embedded: not a multiple");
        unsigned step = L / m_;
        Poly<Rational> p;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            p = p + from_power(L, static_cast<unsigned>(i) * step).as_poly() * c_[i];
        }
        return reduce(L, p);
    }

    bool fixed_by_subfield_galois(unsigned m2) const {
        // invariance under Gal(Q(zeta_m)/Q(zeta_m2)) = {a == 1 mod m2}
        for (unsigned a = 1; a < m_; ++a) {
            if (std::gcd(a, m_) != 1 || a % m2 != 1 % m2) continue;
            if (galois(a) != *this) return false;
        }
        return true;
    }

    unsigned m_;
    std::vector<Rational> c_;
};

inline Cyclotomic Cyclotomic::rewritten(unsigned target_m) const {
    if (target_m == m_) return *this;
    if (m_ % target_m != 0) throw std::invalid_argument("Cyclotomic::rewritten: not a subfield");
    // solve sum_j d_j zeta_{m2}^j = x in the zeta_m power basis
    unsigned phi2 = euler_phi(target_m), phi1 = euler_phi(m_);
    unsigned step = m_ / target_m;
    std::vector<std::vector<Rational>> cols(phi2);
    for (unsigned j = 0; j < phi2; ++j) {
        Cyclotomic b = from_power(m_, (j * step) % m_);
        cols[j] = b.c_;
    }
    // gaussian solve of (phi1 x phi2) system
    std::vector<std::vector<Rational>> aug(phi1, std::vector<Rational>(phi2 + 1, Rational(0)));
    for (unsigned i = 0; i < phi1; ++i) {
        for (unsigned j = 0; j < phi2; ++j) aug[i][j] = cols[j][i];
        aug[i][phi2] = c_[i];
    }
    std::vector<int> pivot_col(phi1, -1);
    unsigned row = 0;
    for (unsigned col = 0; col < phi2 && row < phi1; ++col) {
        unsigned sel = row;
        while (sel < phi1 && aug[sel][col] == 0) ++sel;
        if (sel == phi1) continue;
        std::swap(aug[sel], aug[row]);
        Rational inv = Rational(1) / aug[row][col];
        for (auto& v : aug[row]) v *= inv;
        for (unsigned r = 0; r < phi1; ++r) {
            if (r == row || aug[r][col] == 0) continue;
            Rational f = aug[r][col];
            for (unsigned cc = 0; cc <= phi2; ++cc) aug[r][cc] -= f * aug[row][cc];
        }
        pivot_col[row] = static_cast<int>(col);
        ++row;
    }
    std::vector<Rational> d(phi2, Rational(0));
    for (unsigned r = 0; r < row; ++r)
        if (pivot_col[r] >= 0) d[static_cast<unsigned>(pivot_col[r])] = aug[r][phi2];
    for (unsigned r = row; r < phi1; ++r)
        if (aug[r][phi2] != 0)
            throw std::domain_error("Cyclotomic::rewritten: element not in subfield");
    // verify (guards against inconsistent pivots)
    Cyclotomic check(target_m, d);
    if (check.embedded(m_) != *this)
        throw std::domain_error("Cyclotomic::rewritten: element not in subfield");
    return check;
}

} // namespace phk
