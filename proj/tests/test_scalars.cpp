#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "phk/cyclotomic.hpp"
#include "phk/embedding_poly.hpp"
#include "phk/matrix.hpp"
#include "phk/qpow.hpp"
#include "phk/rational.hpp"

using namespace phk;

namespace {

Rational rand_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
    return Rational(num(rng), den(rng));
}

Cyclotomic rand_cyclo(std::mt19937_64& rng, unsigned m) {
    std::vector<Rational> c(euler_phi(m));
    for (auto& x : c) x = rand_rational(rng);
    return Cyclotomic(m, c);
}

} // namespace

TEST_CASE("rational basics and p-adic valuation") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(rational_str(Rational(-4, 6)) == "-2/3");

    CHECK(*padic_val(Rational(8), 2) == Rational(3));
    CHECK(*padic_val(Rational(2, 9), 3) == Rational(-2));
    CHECK(!padic_val(Rational(0), 5).has_value()); // +infinity

    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        Rational a = rand_rational(rng), b = rand_rational(rng);
        if (a == 0 || b == 0) continue;
        Int p = 3;
        CHECK(*padic_val(a * b, p) == *padic_val(a, p) + *padic_val(b, p));
        if (a + b != 0) {
            Rational va = *padic_val(a, p), vb = *padic_val(b, p);
            Rational vmin = va < vb ? va : vb;
            CHECK(*padic_val(a + b, p) >= vmin);
            if (va != vb) CHECK(*padic_val(a + b, p) == vmin);
        }
    }
}

TEST_CASE("cyclotomic arithmetic matches the minimal-polynomial relations") {
    Cyclotomic i = Cyclotomic::zeta(4);
    CHECK(i * i == Cyclotomic(-1));

    CHECK(Cyclotomic(2).inverse() == Cyclotomic(Rational(1, 2)));

    // the minimal polynomial of zeta_3 is T^2+T+1, hence 1 + z + z^2 = 0
    Cyclotomic z3 = Cyclotomic::zeta(3);
    Poly<Rational> phi3 = cyclotomic_poly(3);
    CHECK(phi3 == Poly<Rational>(std::vector<Rational>{1, 1, 1}));
    CHECK(z3 + z3 * z3 == Cyclotomic(-1));

    CHECK_THROWS_AS(Cyclotomic(0).inverse(), std::domain_error);
}

TEST_CASE("cyclotomic conductor merging and normalization") {
    Cyclotomic z3 = Cyclotomic::zeta(3), i = Cyclotomic::zeta(4);
    Cyclotomic s = z3 * i;
    CHECK(s.conductor() == 12);
    CHECK(s * s * s == i * i * i * Cyclotomic(1)); // (z3 i)^3 = z3^3 i^3 = i^3
    CHECK((s * s.inverse()) == Cyclotomic(1));

    // zeta_6 = -zeta_3^2 lives in Q(zeta_3)
    Cyclotomic z6 = Cyclotomic::zeta(6);
    Cyclotomic z6n = z6.normalized();
    CHECK(z6n.conductor() == 3);
    CHECK(z6n == z6);

    CHECK(Cyclotomic::compare(Cyclotomic(1), Cyclotomic(2)) < 0);
    CHECK(Cyclotomic::compare(z6, Cyclotomic(0) - z3 * z3) == 0);
}

TEST_CASE("cyclotomic field axioms under randomized testing") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        unsigned m = std::uniform_int_distribution<unsigned>(1, 12)(rng);
        Cyclotomic a = rand_cyclo(rng, m), b = rand_cyclo(rng, m), c = rand_cyclo(rng, m);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        if (!a.is_zero()) CHECK(a * a.inverse() == Cyclotomic(1));
    }
}

TEST_CASE("cyclotomic galois action and power-trick valuation") {
    Cyclotomic z5 = Cyclotomic::zeta(5);
    CHECK(z5.galois(2) == z5 * z5);

    Cyclotomic x = Cyclotomic(Rational(4, 3)) * Cyclotomic::zeta(8, 3);
    auto v = x.padic_val_if_defined(2);
    REQUIRE(v.has_value());
    CHECK(*v == Rational(2));
    auto v3 = x.padic_val_if_defined(3);
    REQUIRE(v3.has_value());
    CHECK(*v3 == Rational(-1));

    // 1 + zeta_3 has no rational power in small range? (1+z3) = -z3^2, a monomial: defined
    Cyclotomic y = Cyclotomic(1) + Cyclotomic::zeta(3);
    auto vy = y.padic_val_if_defined(3);
    REQUIRE(vy.has_value());
    CHECK(*vy == Rational(0));

    // 1 + zeta_5 is not monomial times rational; valuation stays undefined
    Cyclotomic z = Cyclotomic(1) + Cyclotomic::zeta(5);
    CHECK(!z.padic_val_if_defined(5).has_value());
}

TEST_CASE("q-power monomials: canonical form, arithmetic, parity diagnostic") {
    QPower h = QPower::q_to(9, Rational(1, 2));
    CHECK(h.frac_exponent() == Rational(1, 2));
    CHECK((h * h).frac_exponent() == 0);
    CHECK((h * h).unit() == Cyclotomic(9));

    QPower a(9, Cyclotomic(2), Rational(-3, 2));
    CHECK(a.frac_exponent() == Rational(1, 2));
    CHECK(a.unit() == Cyclotomic(Rational(2, 81)));

    CHECK(a * a.inverse() == QPower::one(9));
    CHECK_THROWS_AS(h.to_cyclotomic(), std::domain_error);
    CHECK((h * h).to_cyclotomic() == Cyclotomic(9));
}

TEST_CASE("q-power valuation arithmetic") {
    // a = 2 * q^{-3/2} with q = 9: val_3(a) = 0 + (-3/2)*2 = -3
    QPower a(9, Cyclotomic(2), Rational(-3, 2));
    auto v = a.padic_val(3, Rational(2));
    REQUIRE(v.has_value());
    CHECK(*v == Rational(-3));
}

TEST_CASE("embedding polynomials and shifts") {
    auto e1 = EmbeddingSet::standard(1);
    auto T = EmbeddingPoly::from_roots(e1, {{Cyclotomic(0)}});
    CHECK(poly_shift(T, {Cyclotomic(0)}) == T);

    auto Tm1 = EmbeddingPoly::from_roots(e1, {{Cyclotomic(1)}});
    auto Tm3 = EmbeddingPoly::from_roots(e1, {{Cyclotomic(3)}});
    CHECK(poly_shift(Tm1, {Cyclotomic(2)}) == Tm3);

    // (T)(T-1) shifted by -1 is (T+1)(T): expand and compare coefficients
    auto S = EmbeddingPoly::from_roots(e1, {{Cyclotomic(0), Cyclotomic(1)}});
    auto expected = EmbeddingPoly::from_roots(e1, {{Cyclotomic(-1), Cyclotomic(0)}});
    CHECK(poly_shift(S, {Cyclotomic(-1)}) == expected);

    CHECK_THROWS_AS(poly_shift(S, {Cyclotomic(1), Cyclotomic(2)}), std::invalid_argument);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        auto e2 = EmbeddingSet::standard(2);
        std::vector<std::vector<Cyclotomic>> roots(2);
        for (auto& rs : roots)
            for (int k = 0; k < 3; ++k) rs.push_back(rand_cyclo(rng, 4));
        auto S2 = EmbeddingPoly::from_roots(e2, roots);
        std::vector<Cyclotomic> c{rand_cyclo(rng, 4), rand_cyclo(rng, 4)};
        std::vector<Cyclotomic> mc{Cyclotomic(0) - c[0], Cyclotomic(0) - c[1]};
        CHECK(poly_shift(poly_shift(S2, c), mc) == S2);
    }
}

TEST_CASE("matrix kernel, inverse, charpoly, minpoly over exact fields") {
    using M = Matrix<Rational>;
    M a = M::from_rows({{1, 2}, {3, 4}});
    CHECK(a.det() == Rational(-2));
    CHECK(a * a.inverse() == M::identity(2));

    M sing = M::from_rows({{1, 2}, {2, 4}});
    CHECK(sing.rank() == 1);
    M ker = sing.kernel();
    CHECK(ker.cols() == 1);
    CHECK((sing * ker).is_zero());

    auto cp = a.charpoly();
    // T^2 - 5T - 2
    CHECK(cp == Poly<Rational>(std::vector<Rational>{-2, -5, 1}));

    M j = M::from_rows({{1, 1}, {0, 1}});
    CHECK(j.minpoly() == Poly<Rational>(std::vector<Rational>{1, -2, 1}));
    CHECK(M::identity(3).minpoly().degree() == 1);
    CHECK(!poly_squarefree(j.minpoly()));
    CHECK(poly_squarefree(a.minpoly()));

    using MC = Matrix<Cyclotomic>;
    MC b(2, 2);
    b(0, 0) = Cyclotomic::zeta(3);
    b(1, 1) = Cyclotomic::zeta(3).pow(2);
    CHECK(b.trace() == Cyclotomic(-1));
    CHECK(b.det() == Cyclotomic(1));
}
