#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "phk/rational.hpp"

namespace phk {

/// Dense univariate polynomial over an exact field F.
/// Coefficients are stored low degree first; the zero polynomial has no coefficients.
template <class F>
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<F> coeffs) : c_(std::move(coeffs)) { trim(); }
    static Poly constant(const F& a) { return Poly(std::vector<F>{a}); }
    static Poly monomial(std::size_t deg, const F& a) {
        std::vector<F> c(deg + 1, F(0));
        c[deg] = a;
        return Poly(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    // degree of the zero polynomial is reported as -1
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const std::vector<F>& coeffs() const { return c_; }
    F coeff(std::size_t i) const { return i < c_.size() ? c_[i] : F(0); }
    const F& leading() const {
        if (c_.empty()) throw std::domain_error("Poly::leading: zero polynomial");
        return c_.back();
    }

    bool operator==(const Poly& o) const { return c_ == o.c_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly operator+(const Poly& o) const {
        std::vector<F> r(std::max(c_.size(), o.c_.size()), F(0));
        for (std::size_t i = 0; i < c_.size(); ++i) r[i] = r[i] + c_[i];
        for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] = r[i] + o.c_[i];
        return Poly(std::move(r));
    }
    Poly operator-() const {
        std::vector<F> r(c_);
        for (auto& a : r) a = F(0) - a;
        return Poly(std::move(r));
    }
    Poly operator-(const Poly& o) const { return *this + (-o); }
    Poly operator*(const Poly& o) const {
        if (is_zero() || o.is_zero()) return Poly();
        std::vector<F> r(c_.size() + o.c_.size() - 1, F(0));
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < o.c_.size(); ++j)
                r[i + j] = r[i + j] + c_[i] * o.c_[j];
        return Poly(std::move(r));
    }
    Poly operator*(const F& a) const {
        std::vector<F> r(c_);
        for (auto& x : r) x = x * a;
        return Poly(std::move(r));
    }

    std::pair<Poly, Poly> divmod(const Poly& d) const {
        if (d.is_zero()) throw std::domain_error("Poly::divmod: division by zero polynomial");
        Poly r = *this;
        std::vector<F> q(r.c_.size() > d.c_.size() ? r.c_.size() - d.c_.size() + 1 : 1, F(0));
        while (!r.is_zero() && r.degree() >= d.degree()) {
            F factor = r.leading() / d.leading();
            std::size_t shift = static_cast<std::size_t>(r.degree() - d.degree());
            q[shift] = q[shift] + factor;
            for (std::size_t i = 0; i < d.c_.size(); ++i)
                r.c_[shift + i] = r.c_[shift + i] - factor * d.c_[i];
            r.trim();
        }
        return {Poly(std::move(q)), r};
    }
    Poly operator/(const Poly& d) const { return divmod(d).first; }
    Poly operator%(const Poly& d) const { return divmod(d).second; }

    F eval(const F& x) const {
        F acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<F> r(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * F(static_cast<int>(i));
        return Poly(std::move(r));
    }

    Poly monic() const {
        if (is_zero()) return *this;
        F inv = F(1) / leading();
        return *this * inv;
    }

    /// Substitution T -> T + a, computed by Horner on the shifted variable.
    Poly shift_var(const F& a) const {
        Poly acc;
        Poly lin(std::vector<F>{a, F(1)});
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            acc = acc * lin + Poly::constant(*it);
        return acc;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == F(0)) c_.pop_back();
    }
    std::vector<F> c_;
};

template <class F>
Poly<F> poly_gcd(Poly<F> a, Poly<F> b) {
    while (!b.is_zero()) {
        Poly<F> r = a % b;
        a = b;
        b = r;
    }
    return a.monic();
}

template <class F>
bool poly_squarefree(const Poly<F>& a) {
    if (a.is_zero()) return false;
    return poly_gcd(a, a.derivative()).degree() == 0;
}

/// Cyclotomic polynomial Phi_m over the rationals, by iterated exact division of x^m - 1.
inline Poly<Rational> cyclotomic_poly(unsigned m) {
    if (m == 0) throw std::invalid_argument("cyclotomic_poly: m must be positive");
    std::vector<Rational> x_m(m + 1, Rational(0));
    x_m[0] = -1;
    x_m[m] = 1;
    Poly<Rational> num{std::move(x_m)};
    for (unsigned d = 1; d < m; ++d) {
        if (m % d != 0) continue;
        auto [q, r] = num.divmod(cyclotomic_poly(d));
        if (!r.is_zero()) throw std::logic_error("cyclotomic_poly: non-exact division");
        num = q;
    }
    return num;
}

inline unsigned euler_phi(unsigned m) {
    unsigned result = m;
    for (unsigned p = 2; p * p <= m; ++p) {
        if (m % p != 0) continue;
        while (m % p == 0) m /= p;
        result -= result / p;
    }
    if (m > 1) result -= result / m;
    return result;
}

} // namespace phk
