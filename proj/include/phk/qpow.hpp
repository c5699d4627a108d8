#pragma once

#include <stdexcept>

#include "phk/cyclotomic.hpp"
#include "phk/rational.hpp"

namespace phk {

/// Exact monomial unit * q^exponent for a fixed residue cardinality q.
/// Canonical form: the integer part of the exponent is folded into the unit,
/// so the stored exponent lies in [0,1). Exponents seen in practice are
/// half-integers (and 1/f-integers from unramified weight folding).
class QPower {
public:
    QPower() : q_(0), unit_(1), exp_(0) {}
    explicit QPower(Int q, Cyclotomic unit = Cyclotomic(1), Rational exponent = Rational(0))
        : q_(std::move(q)), unit_(std::move(unit)), exp_(std::move(exponent)) {
        if (q_ < 2) throw std::invalid_argument("QPower: q must be at least 2");
        normalize();
    }

    static QPower one(Int q) { return QPower(std::move(q)); }
    static QPower q_to(Int q, const Rational& e) { return QPower(std::move(q), Cyclotomic(1), e); }

    const Int& q() const { return q_; }
    const Cyclotomic& unit() const { return unit_; }
    const Rational& frac_exponent() const { return exp_; }
    bool is_zero() const { return unit_.is_zero(); }

    QPower operator*(const QPower& o) const {
        check_base(o);
        return QPower(q_, unit_ * o.unit_, exp_ + o.exp_);
    }
    QPower operator/(const QPower& o) const { return *this * o.inverse(); }
    QPower inverse() const {
        if (is_zero()) throw std::domain_error("QPower::inverse: zero");
        return QPower(q_, unit_.inverse(), -exp_);
    }
    QPower pow(long e) const {
        QPower acc = one(q_), base = *this;
        long n = e < 0 ? -e : e;
        for (; n > 0; n >>= 1) {
            if (n & 1) acc = acc * base;
            base = QPower(q_, base.unit_ * base.unit_, base.exp_ * 2);
        }
        return e < 0 ? acc.inverse() : acc;
    }

    bool operator==(const QPower& o) const {
        return q_ == o.q_ && exp_ == o.exp_ && unit_ == o.unit_;
    }
    bool operator!=(const QPower& o) const { return !(*this == o); }

    /// Concrete field element; only defined when the exponent is integral
    /// (it then already sits in the unit). Raises the parity diagnostic otherwise.
    Cyclotomic to_cyclotomic() const {
        if (exp_ != 0)
            throw std::domain_error(
                "QPower: fractional q-exponent " + rational_str(exp_) +
                " cannot be resolved to a field element without a square-root choice");
        return unit_;
    }

    /// Normalized p-adic valuation, with val(q) equal to the residue degree f.
    std::optional<Rational> padic_val(const Int& p, const Rational& f) const {
        if (is_zero()) throw std::domain_error("QPower::padic_val: zero");
        auto u = unit_.padic_val_if_defined(p);
        if (!u) return std::nullopt;
        return *u + exp_ * f;
    }

private:
    void check_base(const QPower& o) const {
        if (q_ != o.q_) throw std::invalid_argument("QPower: mismatched residue cardinality");
    }
    void normalize() {
        if (unit_.is_zero()) { exp_ = 0; return; }
        Int n = numerator(exp_), d = denominator(exp_);
        Int fl = floor_div(n, d);
        exp_ -= Rational(fl);
        if (fl != 0) {
            // fold q^fl into the unit
            unsigned long k = (fl > 0 ? fl : Int(-fl)).convert_to<unsigned long>();
            Int qk = boost::multiprecision::pow(q_, static_cast<unsigned>(k));
            Rational scale = fl > 0 ? Rational(qk) : Rational(1, qk);
            unit_ = unit_ * Cyclotomic(scale);
        }
    }

    Int q_;
    Cyclotomic unit_;
    Rational exp_;
};

} // namespace phk
