#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fm_utils.hpp"
#include "phk/filtered_module.hpp"

using namespace phk;

namespace {

FilteredModule rank1(Int p, Int alpha_num, Int weight) {
    auto g = FiniteGroup::cyclic(1, p);
    CMatrix phi(1, 1), n(1, 1);
    phi(0, 0) = Cyclotomic(Rational(alpha_num));
    Filtration f;
    f.weights = {weight};
    f.flag = CMatrix::identity(1);
    return FilteredModule{WDRep::unramified(g, phi, n), EmbeddingSet::standard(1), {f}, 1, 1, p};
}

FilteredModule rank2_diag(Int p, Rational a, Rational b, std::vector<Int> weights,
                          const CMatrix& flag) {
    auto g = FiniteGroup::cyclic(1, p);
    CMatrix phi(2, 2), n(2, 2);
    phi(0, 0) = Cyclotomic(a);
    phi(1, 1) = Cyclotomic(b);
    Filtration f;
    f.weights = std::move(weights);
    f.flag = flag;
    return FilteredModule{WDRep::unramified(g, phi, n), EmbeddingSet::standard(1), {f}, 1, 1, p};
}

} // namespace

TEST_CASE("embedding idempotents from the Vandermonde system") {
    // degree 1: the single idempotent is 1
    auto one = embedding_decompose(EmbeddingSet::standard(1), {Cyclotomic(1)});
    CHECK(one.coeffs.size() == 1);
    CHECK(one.coeffs[0][0] == Cyclotomic(1));

    // quadratic case eta_1(x) = i, eta_2(x) = -i
    Cyclotomic i = Cyclotomic::zeta(4);
    auto quad = embedding_decompose(EmbeddingSet::standard(2), {i, Cyclotomic(0) - i});
    // e_eta evaluated at both embeddings: 1 at its own, 0 at the other; and
    // e^2 = e pointwise
    for (std::size_t t = 0; t < 2; ++t) {
        for (std::size_t j = 0; j < 2; ++j) {
            Cyclotomic x = quad.primitive_values[j];
            Cyclotomic val = quad.coeffs[t][0] + quad.coeffs[t][1] * x;
            CHECK(val == (t == j ? Cyclotomic(1) : Cyclotomic(0)));
            CHECK(val * val == val);
        }
    }
    // degenerate primitive element
    CHECK_THROWS_AS(embedding_decompose(EmbeddingSet::standard(2), {i, i}), std::invalid_argument);

    // det(B^T B) = prod_{eta != eta'} (eta(x) - eta'(x)) up to the sign
    // (-1)^{r(r-1)/2} from pairing the factors, and is nonzero
    std::vector<Cyclotomic> vals{Cyclotomic(1), Cyclotomic(3), i};
    Cyclotomic det = embedding_gram_det(vals);
    Cyclotomic prod(1);
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            if (a != b) prod = prod * (vals[a] - vals[b]);
    CHECK(det == Cyclotomic(-1) * prod); // r = 3: sign (-1)^3
    CHECK(!det.is_zero());
}

TEST_CASE("hodge and newton numbers") {
    CHECK(hodge_number(rank1(2, 3, Int(1))) == Rational(1));
    CHECK(hodge_number(rank1(2, 3, Int(0))) == Rational(0));

    // rank-2, two embeddings, weights (0,1) and (2,3): (0+1+2+3)/2 = 3
    {
        auto g = FiniteGroup::cyclic(1, 4);
        CMatrix phi = CMatrix::identity(2);
        Filtration f1{{Int(0), Int(1)}, CMatrix::identity(2)};
        Filtration f2{{Int(2), Int(3)}, CMatrix::identity(2)};
        FilteredModule m{WDRep::unramified(g, phi, CMatrix(2, 2)), EmbeddingSet::standard(2),
                         {f1, f2}, 2, 2, 2};
        CHECK(hodge_number(m) == Rational(3));
    }

    // rank-1 over Q_p with Frobenius eigenvalue p: t_N = 1
    CHECK(newton_number(rank1(2, 2, Int(1))) == Rational(1));
    // rank-2 diag(1, p^2): t_N = 2
    CHECK(newton_number(rank2_diag(3, Rational(1), Rational(9), {Int(0), Int(0)},
                                   CMatrix::identity(2))) == Rational(2));
    // [K_0:Q_p] = 2 with det valuation 3: t_N = 3/2
    {
        auto g = FiniteGroup::cyclic(1, 9);
        CMatrix phi(1, 1), n(1, 1);
        phi(0, 0) = Cyclotomic(27);
        Filtration f{{Int(0)}, CMatrix::identity(1)};
        FilteredModule m{WDRep::unramified(g, phi, n), EmbeddingSet::standard(2), {f, f}, 2, 2, 3};
        CHECK(newton_number(m) == Rational(3, 2));
    }

    // undefined valuation: determinant 1 + zeta_5
    {
        auto g = FiniteGroup::cyclic(1, 5);
        CMatrix phi(1, 1), n(1, 1);
        phi(0, 0) = Cyclotomic(1) + Cyclotomic::zeta(5);
        Filtration f{{Int(0)}, CMatrix::identity(1)};
        FilteredModule m{WDRep::unramified(g, phi, n), EmbeddingSet::standard(1), {f}, 1, 1, 5};
        CHECK_THROWS_AS(newton_number(m), std::domain_error);
    }
}

TEST_CASE("weak admissibility at rank one and two") {
    // rank-1, weight 1, Phi = p: admissible (1 = 1)
    CHECK(is_weakly_admissible(rank1(2, 2, Int(1))).admissible);
    // rank-1, weight 2, Phi = p: 2 > 1 fails
    auto bad = is_weakly_admissible(rank1(2, 2, Int(2)));
    CHECK(!bad.admissible);

    // rank-2, Phi = diag(1, p), weights (0, 1), flag so that the slope-0
    // Phi-stable line has induced weight <= 0: admissible
    CMatrix flag = CMatrix::identity(2); // line e_0 (slope 0) carries weight 0
    auto m = rank2_diag(2, Rational(1), Rational(2), {Int(0), Int(1)}, flag);
    auto wa = is_weakly_admissible(m);
    CHECK(wa.admissible);

    // same module but the flag puts weight 1 on the slope-0 line: fails
    CMatrix swapped(2, 2);
    swapped(0, 1) = Cyclotomic(1);
    swapped(1, 0) = Cyclotomic(1);
    auto m2 = rank2_diag(2, Rational(1), Rational(2), {Int(0), Int(1)}, swapped);
    auto wa2 = is_weakly_admissible(m2);
    CHECK(!wa2.admissible);
    REQUIRE(wa2.violator.has_value());
    CHECK(wa2.violator->cols() == 1);
}

TEST_CASE("twisting by deRham characters") {
    auto m = rank1(2, 3, Int(0));
    auto e1 = EmbeddingSet::standard(1);

    DeRhamCharacter triv = DeRhamCharacter::trivial(e1, 2);
    auto same = twist_by_character(m, triv);
    CHECK(same.filtration[0].weights == m.filtration[0].weights);
    CHECK(same.wd.frobenius == m.wd.frobenius);

    // rank-1 weight 0 twisted by delta_alg of weight k: weight -k
    DeRhamCharacter dk = DeRhamCharacter::trivial(e1, 2);
    dk.alg_weights = {Int(3)};
    auto tw = twist_by_character(m, dk);
    CHECK(tw.filtration[0].weights == std::vector<Int>{Int(-3)});

    // double twist by delta and delta^{-1} returns M
    DeRhamCharacter d = dk;
    d.smooth.pi_value = QPower(Int(2), Cyclotomic(5));
    auto back = twist_by_character(twist_by_character(m, d), charops::inv(d));
    CHECK(back.filtration[0].weights == m.filtration[0].weights);
    CHECK(back.wd.frobenius == m.wd.frobenius);

    // M(delta_1 delta_2) = M(delta_1) (x) M(delta_2) at rank one
    DeRhamCharacter d2 = DeRhamCharacter::trivial(e1, 2);
    d2.alg_weights = {Int(-1)};
    d2.smooth.pi_value = QPower(Int(2), Cyclotomic(3));
    auto lhs = twist_by_character(m, charops::mul(d, d2));
    auto rhs = twist_by_character(twist_by_character(m, d), d2);
    CHECK(lhs.filtration[0].weights == rhs.filtration[0].weights);
    CHECK(lhs.wd.frobenius == rhs.wd.frobenius);

    // ramified smooth part without an inertia table is rejected
    DeRhamCharacter ram = DeRhamCharacter::trivial(e1, 2);
    ram.smooth.conductor = 1;
    ram.smooth.unit_table = {Cyclotomic(-1)};
    CHECK_THROWS_AS(twist_by_character(m, ram), std::domain_error);
}

TEST_CASE("non-critical chains by induced weights") {
    // trivial chain 0 c M
    auto m = rank2_diag(2, Rational(1), Rational(4), {Int(0), Int(3)}, CMatrix::identity(2));
    FiltrationChain full{m, {CMatrix::identity(2)}};
    CHECK(is_noncritical(full));

    // rank-2 weights (0,3): the sub-line e_0 carries induced weight 0
    CMatrix line(2, 1);
    line(0, 0) = Cyclotomic(1);
    FiltrationChain good{m, {line}};
    CHECK(is_noncritical(good));

    // sub-line carrying induced weight 3 is critical
    CMatrix line2(2, 1);
    line2(1, 0) = Cyclotomic(1);
    FiltrationChain badchain{m, {line2}};
    CHECK(!is_noncritical(badchain));
}

TEST_CASE("non-criticality criterion inequality") {
    // Q_p, n = 2, l = 2, weights (0,3), val_1 = 2: (3-0)+0 > 2 -> true
    CHECK(noncritical_criterion({{Int(0), Int(3)}}, {Rational(2), Rational(1)}, {1, 1}, 1));
    // weights (0,1), val_1 = 2: 1+0 > 2 fails
    CHECK(!noncritical_criterion({{Int(0), Int(1)}}, {Rational(2), Rational(-1)}, {1, 1}, 1));
    // l = 1: vacuously true
    CHECK(noncritical_criterion({{Int(0), Int(1)}}, {Rational(1)}, {2}, 1));
}

TEST_CASE("hodge-newton additivity over canonical chains") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        auto inst = testutil::random_filtered(rng, 1 + rng() % 2, 2 + rng() % 3);
        const auto& m = inst.module;
        // t_H additivity: t_H(M) = sum over graded pieces with induced filtrations
        Rational th_sum(0), tn_sum(0);
        std::size_t prev_dim = 0;
        std::vector<Int> prev_weights_sum;
        Rational prev_th(0), prev_tn(0);
        for (const auto& s : inst.canonical_chain.steps) {
            Rational th = sub_hodge_number(m, s), tn = sub_newton_number(m, s);
            th_sum += th - prev_th;
            tn_sum += tn - prev_tn;
            prev_th = th;
            prev_tn = tn;
            prev_dim = s.cols();
        }
        CHECK(th_sum == sub_hodge_number(m, inst.canonical_chain.steps.back()));
        CHECK(tn_sum == sub_newton_number(m, inst.canonical_chain.steps.back()));
        CHECK(hodge_number(m) == newton_number(m)); // arranged by the generator
    }
}

TEST_CASE("criterion + weak admissibility imply non-criticality of the canonical chain") {
    std::mt19937_64 rng(101);
    int positive = 0;
    for (int trial = 0; trial < 120; ++trial) {
        auto inst = testutil::random_filtered(rng, 1 + rng() % 2, 2 + rng() % 3);
        bool crit = noncritical_criterion(inst.module.weight_table(), inst.block_det_vals,
                                          inst.partition, inst.module.ramification());
        if (!crit) continue;
        auto wa = is_weakly_admissible(inst.module, 5);
        if (!wa.admissible) continue;
        ++positive;
        CHECK(is_noncritical(inst.canonical_chain));
    }
    CHECK(positive > 0);
}

TEST_CASE("order-preserving-map oracle confirms the poset argument") {
    // all order-preserving maps {1..m} -> {1..n}
    auto omega_maps = [](std::size_t m, std::size_t n) {
        std::vector<std::vector<std::size_t>> maps;
        std::vector<std::size_t> cur(m);
        auto rec = [&](auto&& self, std::size_t pos, std::size_t next) -> void {
            if (pos == m) {
                maps.push_back(cur);
                return;
            }
            for (std::size_t v = next; v < n; ++v) {
                cur[pos] = v;
                self(self, pos + 1, v + 1);
            }
        };
        rec(rec, 0, 0);
        return maps;
    };
    {
        auto maps = omega_maps(2, 4);
        CHECK(maps.size() == 6);
        // the identity is the unique minimal element
        for (const auto& w : maps)
            for (std::size_t i = 0; i < w.size(); ++i) CHECK(w[i] >= i);
    }

    std::mt19937_64 rng(202);
    int checked = 0;
    for (int trial = 0; trial < 120 && checked < 25; ++trial) {
        auto inst = testutil::random_filtered(rng, 1, 3 + rng() % 2);
        bool crit = noncritical_criterion(inst.module.weight_table(), inst.block_det_vals,
                                          inst.partition, inst.module.ramification());
        if (!crit) continue;
        ++checked;
        const auto& w = inst.module.weight_table();
        std::size_t n = inst.module.rank();
        std::vector<std::size_t> s{0};
        for (auto x : inst.partition) s.push_back(s.back() + x);
        Rational val_acc(0);
        for (std::size_t i = 1; i + 1 <= inst.partition.size(); ++i) {
            val_acc += inst.block_det_vals[i - 1];
            Rational tn = val_acc; // deg_K0 = deg_K, once per embedding below
            // every non-identity omega overshoots the Newton bound
            for (const auto& omega : omega_maps(s[i], n)) {
                bool is_id = true;
                for (std::size_t j = 0; j < omega.size(); ++j)
                    if (omega[j] != j) is_id = false;
                if (is_id) continue;
                Rational hodge(0);
                for (std::size_t e = 0; e < w.size(); ++e)
                    for (std::size_t j = 0; j < s[i]; ++j)
                        hodge += Rational(w[e][omega[j]]);
                // other embeddings take at least the identity weights
                Rational bound = Rational(static_cast<long>(inst.module.ramification())) * tn *
                                 Rational(static_cast<long>(w.size()));
                // per-embedding statement: sum over embeddings with one
                // non-identity map already exceeds [K:Qp] t_N(M_i)
                CHECK(hodge > Rational(static_cast<long>(inst.module.deg_K)) * tn /
                                  Rational(static_cast<long>(inst.module.deg_K0)));
                (void)bound;
            }
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("fwd correspondence round trip") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 40; ++trial) {
        auto inst = testutil::random_filtered(rng, 1 + rng() % 2, 3);
        auto [filts, wd] = fwd_project(inst.module);
        auto again = fwd_correspond(inst.module.embeddings, filts, wd, inst.module.deg_K,
                                    inst.module.deg_K0, inst.module.prime);
        CHECK(again.weight_table() == inst.module.weight_table());
        auto iso = wd_isomorphism(again.wd, inst.module.wd);
        REQUIRE(iso.has_value());
    }

    // weights all zero with the trivial flag: trivial filtration against any WD part
    auto g = FiniteGroup::cyclic(1, 2);
    CMatrix phi = CMatrix::identity(2);
    Filtration f{{Int(0), Int(0)}, CMatrix::identity(2)};
    auto m = fwd_correspond(EmbeddingSet::standard(1), {f}, WDRep::unramified(g, phi, CMatrix(2, 2)),
                            1, 1, 2);
    CHECK(hodge_number(m) == Rational(0));

    // rank-1 pairing: weight (-k) with unramified Phi = alpha is the module of
    // the character with algebraic weight k and smooth value alpha
    auto m1 = rank1(2, 5, Int(0));
    DeRhamCharacter d = DeRhamCharacter::trivial(EmbeddingSet::standard(1), 2);
    d.alg_weights = {Int(4)};
    d.smooth.pi_value = QPower(Int(2), Cyclotomic(5));
    auto md = twist_by_character(rank1(2, 1, Int(0)), d);
    CHECK(md.filtration[0].weights == std::vector<Int>{Int(-4)});
    CHECK(md.wd.frobenius(0, 0) == Cyclotomic(5));
}
