#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "phk/characters.hpp"

using namespace phk;

namespace {

EmbeddingSet e1 = EmbeddingSet::standard(1);
EmbeddingSet e2 = EmbeddingSet::standard(2);

DeRhamCharacter alg_char(const EmbeddingSet& e, std::vector<Int> w, Int q = 3) {
    DeRhamCharacter d = DeRhamCharacter::trivial(e, q);
    d.alg_weights = std::move(w);
    return d;
}

DeRhamCharacter unram_char(const EmbeddingSet& e, const QPower& v) {
    DeRhamCharacter d = DeRhamCharacter::trivial(e, v.q());
    d.smooth.pi_value = v;
    return d;
}

SenPolynomial sen_from(const EmbeddingSet& e, std::vector<std::vector<int>> roots) {
    SenPolynomial s;
    s.embeddings = e;
    for (auto& rs : roots) {
        std::vector<Cyclotomic> row;
        for (int r : rs) row.push_back(Cyclotomic(r));
        s.roots.push_back(row);
    }
    return s;
}

} // namespace

TEST_CASE("wt: algebraic weights, smooth contributes zero") {
    CHECK(wt(DeRhamCharacter::trivial(e1, 3)) == std::vector<Int>{0});
    CHECK(wt(unram_char(e1, QPower(Int(3), Cyclotomic(5)))) == std::vector<Int>{0});
    CHECK(wt(alg_char(e1, {2})) == std::vector<Int>{2});
}

TEST_CASE("character group operations") {
    DeRhamCharacter d = alg_char(e1, {2});
    d.smooth.pi_value = QPower(Int(3), Cyclotomic(7));
    CHECK(charops::mul(d, charops::inv(d)).is_trivial());

    DeRhamCharacter a = alg_char(e1, {1}), b = alg_char(e1, {4});
    CHECK(wt(charops::mul(a, b)) == std::vector<Int>{5});

    // restrict(unramified delta(pi)=alpha, e=2): value at pi^2 is alpha^2
    DeRhamCharacter u = unram_char(e1, QPower(Int(3), Cyclotomic(5)));
    DeRhamCharacter r = charops::restrict_to_norm(u, 2);
    CHECK(r.norm_index == 2);
    CHECK(r.smooth.pi_value == QPower(Int(3), Cyclotomic(25)));
}

TEST_CASE("sen polynomial of quasi-deRham modules") {
    // rank 1, weight 0, wt(delta) = w: the polynomial T - w
    auto s = sen_of_quasi_deRham(e1, {{Int(0)}}, alg_char(e1, {4}));
    CHECK(s == sen_from(e1, {{4}}));

    // rank 2, weights (0,1), wt(delta) = 3: roots {3, 2}
    auto s2 = sen_of_quasi_deRham(e1, {{Int(0), Int(1)}}, alg_char(e1, {3}));
    CHECK(s2 == sen_from(e1, {{3, 2}}));
    // as a polynomial: (T-3)(T-2)
    auto p = s2.as_poly();
    CHECK(p.at(0) == Poly<Cyclotomic>(std::vector<Cyclotomic>{Cyclotomic(6), Cyclotomic(-5), Cyclotomic(1)}));

    // rank 2, weights (0,0), trivial delta: T^2
    auto s3 = sen_of_quasi_deRham(e1, {{Int(0), Int(0)}}, DeRhamCharacter::trivial(e1, 3));
    CHECK(s3.as_poly().at(0) == Poly<Cyclotomic>(std::vector<Cyclotomic>{Cyclotomic(0), Cyclotomic(0), Cyclotomic(1)}));
}

TEST_CASE("sen multiplicativity and twist shift") {
    auto t = sen_from(e1, {{0}});
    auto tm1 = sen_from(e1, {{1}});
    auto prod = sen_multiply(t, tm1);
    // T(T-1) = T^2 - T
    CHECK(prod.as_poly().at(0) ==
          Poly<Cyclotomic>(std::vector<Cyclotomic>{Cyclotomic(0), Cyclotomic(-1), Cyclotomic(1)}));
    CHECK(sen_multiply(t, SenPolynomial::one(e1)) == t);

    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        std::vector<std::vector<int>> ra(1), rb(1);
        for (int k = 0; k < 3; ++k) {
            ra[0].push_back(static_cast<int>(rng() % 7) - 3);
            rb[0].push_back(static_cast<int>(rng() % 7) - 3);
        }
        auto a = sen_from(e1, ra), b = sen_from(e1, rb);
        CHECK(sen_multiply(a, b) == sen_multiply(b, a));
    }

    // shifts
    auto s = sen_from(e1, {{2}});
    CHECK(sen_twist_shift(s, DeRhamCharacter::trivial(e1, 3)) == s);
    CHECK(sen_twist_shift(s, alg_char(e1, {3})) == sen_from(e1, {{5}}));
    auto roundtrip = sen_twist_shift(sen_twist_shift(s, alg_char(e1, {3})), alg_char(e1, {-3}));
    CHECK(roundtrip == s);

    // twist compatibility: shift(sen(M, 1), delta) = sen(M, delta)
    std::vector<std::vector<Int>> w{{Int(-1), Int(2)}};
    auto lhs = sen_twist_shift(sen_of_quasi_deRham(e1, w, DeRhamCharacter::trivial(e1, 3)),
                               alg_char(e1, {5}));
    CHECK(lhs == sen_of_quasi_deRham(e1, w, alg_char(e1, {5})));
}

TEST_CASE("sen partial order") {
    auto s = sen_from(e1, {{0, 1}});
    CHECK(sen_partial_order(s, s) == SenOrder::equal);
    CHECK(sen_partial_order(sen_from(e1, {{2, 1}}), s) == SenOrder::less_or_equal);
    CHECK(sen_partial_order(sen_from(e1, {{-1, 1}}), s) == SenOrder::incomparable);
    CHECK_THROWS_AS(sen_partial_order(sen_from(e1, {{1}}), s), std::invalid_argument);

    // axioms on random triples: reflexive, antisymmetric, transitive
    std::mt19937_64 rng(11);
    auto rand_sen = [&](std::size_t deg) {
        std::vector<std::vector<int>> r(1);
        for (std::size_t k = 0; k < deg; ++k) r[0].push_back(static_cast<int>(rng() % 5) - 2);
        return sen_from(e1, r);
    };
    for (int i = 0; i < 200; ++i) {
        auto a = rand_sen(3), b = rand_sen(3), c = rand_sen(3);
        CHECK(sen_partial_order(a, a) == SenOrder::equal);
        auto ab = sen_partial_order(a, b), ba = sen_partial_order(b, a);
        if (ab == SenOrder::less_or_equal && ba == SenOrder::less_or_equal)
            FAIL_CHECK("antisymmetry violated");
        auto bc = sen_partial_order(b, c);
        if (ab != SenOrder::incomparable && bc != SenOrder::incomparable) {
            // a <= b and b <= c; then a <= c
            CHECK(sen_partial_order(a, c) != SenOrder::incomparable);
        }
    }
}

TEST_CASE("submodule sen comparison") {
    auto s = sen_from(e1, {{0, 2}});
    auto v1 = submodule_sen_compare(s, s, true);
    CHECK(v1.equal);
    CHECK(v1.consistent);

    // D' = t D: all weights shifted by one, strictly less
    auto shifted = sen_from(e1, {{1, 3}});
    auto v2 = submodule_sen_compare(shifted, s, false);
    CHECK(v2.order == SenOrder::less_or_equal);
    CHECK(!v2.equal);
    CHECK(v2.consistent);

    auto v3 = submodule_sen_compare(sen_from(e1, {{-1, 2}}), s, false);
    CHECK(!v3.consistent);

    // paraboline case: compare graded products
    auto g1 = sen_from(e1, {{0}});
    auto g2 = sen_from(e1, {{3}});
    auto amb = sen_multiply(g1, g2);
    auto sub = sen_multiply(sen_from(e1, {{1}}), sen_from(e1, {{3}}));
    auto v4 = submodule_sen_compare(sub, amb, false);
    CHECK(v4.order == SenOrder::less_or_equal);
    CHECK(!v4.equal);
}

TEST_CASE("regular pair predicate") {
    // equal weights: gaps are all zero
    std::vector<std::vector<Int>> gaps{{Int(0), Int(0)}};

    // delta trivial = delta_{-0}: non-regular
    CHECK(!is_regular_pair(DeRhamCharacter::trivial(e1, 3), gaps));

    // delta = |z| delta_1: non-regular (second family with k = 0)
    DeRhamCharacter z1 = charops::mul(norm_abs_character(e1, 3), alg_char(e1, {1}));
    CHECK(!is_regular_pair(z1, gaps));

    // unramified delta(pi) = 2, weight 0: regular
    CHECK(is_regular_pair(unram_char(e1, QPower(Int(3), Cyclotomic(2))), gaps));

    // nontrivial gaps admit more algebraic exclusions
    std::vector<std::vector<Int>> gaps2{{Int(2)}};
    CHECK(!is_regular_pair(alg_char(e1, {-1}), gaps2)); // k = 1 <= 2
    CHECK(is_regular_pair(alg_char(e1, {-3}), gaps2));  // k = 3 > 2

    // wt is a group homomorphism (additivity on random pairs)
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        DeRhamCharacter a = alg_char(e2, {Int(rng() % 9) - 4, Int(rng() % 9) - 4});
        DeRhamCharacter b = alg_char(e2, {Int(rng() % 9) - 4, Int(rng() % 9) - 4});
        auto w = wt(charops::mul(a, b));
        CHECK(w[0] == wt(a)[0] + wt(b)[0]);
        CHECK(w[1] == wt(a)[1] + wt(b)[1]);
    }
}
