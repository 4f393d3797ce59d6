#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "radon/prep.hpp"
#include "radon/surface.hpp"

using namespace radon;

namespace {

JetSeries scalar_jet(int nt, int nx, int lt, int lx) { return JetSeries(nt, nx, 1, lt, lx); }

void add_term(JetSeries& f, const MultiIndex& a, const MultiIndex& m, const Rat& c) {
    PolyVec p = f.coeff(a);
    p.comp[0].add_term(m, c);
    f.set_coeff(a, p);
}

}  // namespace

TEST_CASE("order weights") {
    // lambda = (1, 3/7) separates (1,0) and (0,1)
    OrderWeights w{{Rat(1), rat(3, 7)}};
    CHECK(w.injective_on({MultiIndex{1, 0}, MultiIndex{0, 1}}));

    // lambda = (1, 1) collides
    OrderWeights bad{{Rat(1), Rat(1)}};
    CHECK(!bad.injective_on({MultiIndex{1, 0}, MultiIndex{0, 1}}));

    // the draw re-tries until injective
    auto domain = enumerate_multiindices(2, 4);
    OrderWeights drawn = draw_order_weights(domain, 123);
    CHECK(drawn.injective_on(domain));
    OrderWeights drawn2 = draw_order_weights(domain, 123);
    CHECK(drawn.lambda == drawn2.lambda);  // deterministic under seed

    // single variable is always injective
    OrderWeights single = draw_order_weights(enumerate_multiindices(1, 5), 7);
    CHECK(single.lambda.size() == 1);

    // default weights are injective over their declared box
    OrderWeights def = default_order_weights(4, 8);
    CHECK(def.injective_on(enumerate_multiindices(4, 8)));
}

TEST_CASE("galligo division: univariate powers") {
    // M = <x^2> in one x-variable, f = 1 + x + x^2 + x^3 -> r = 1 + x
    OrderWeights w = default_order_weights(1, 8);  // pure x problem: nt = 0
    JetSeries f = scalar_jet(0, 1, 0, 3);
    MultiIndex a0{};  // no t-variables
    for (int k = 0; k <= 3; ++k) add_term(f, a0, MultiIndex{k}, 1);
    JetSeries g = scalar_jet(0, 1, 0, 3);
    add_term(g, a0, MultiIndex{2}, 1);

    DivisionResult res = galligo_divide(f, {g}, w);
    JetSeries expect = scalar_jet(0, 1, 0, 3);
    add_term(expect, a0, MultiIndex{0}, 1);
    add_term(expect, a0, MultiIndex{1}, 1);
    CHECK(res.remainder == expect);

    // members reduce to zero
    JetSeries member = scalar_jet(0, 1, 0, 3);
    add_term(member, a0, MultiIndex{2}, rat(5));
    add_term(member, a0, MultiIndex{3}, rat(-7));
    CHECK(galligo_divide(member, {g}, w).remainder.is_zero());

    // idempotence
    CHECK(galligo_divide(res.remainder, {g}, w).remainder == res.remainder);
}

TEST_CASE("galligo division: x congruent to y mod (x - y)") {
    // order weights (1, 9/8): L(x) < L(y), so x leads in x - y
    OrderWeights w{{Rat(1), rat(9, 8)}};
    JetSeries f = scalar_jet(0, 2, 0, 3);
    add_term(f, MultiIndex{}, MultiIndex{1, 0}, 1);
    JetSeries g = scalar_jet(0, 2, 0, 3);
    add_term(g, MultiIndex{}, MultiIndex{1, 0}, 1);
    add_term(g, MultiIndex{}, MultiIndex{0, 1}, -1);

    DivisionResult res = galligo_divide(f, {g}, w);
    JetSeries expect = scalar_jet(0, 2, 0, 3);
    add_term(expect, MultiIndex{}, MultiIndex{0, 1}, 1);
    CHECK(res.remainder == expect);

    // E_L(M) consists of keys with x-degree >= 1
    for (const auto& k : res.module_el) CHECK(k.xexp[0] >= 1);

    // the combination replays: f - sum c_k g_k = r exactly
    JetSeries recon = res.remainder;
    for (std::size_t k = 0; k < res.coeffs.size(); ++k) recon = recon + res.coeffs[k].mul(g);
    CHECK(recon == f);
}

TEST_CASE("galligo division randomized properties") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> ngen(1, 3);
    const int nt = 1, nx = 2, lt = 4, lx = 3;
    auto texps = enumerate_multiindices(nt, lt);
    auto xexps = enumerate_multiindices(nx, lx);
    std::uniform_int_distribution<std::size_t> pick_t(0, texps.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_x(0, xexps.size() - 1);

    OrderWeights w = default_order_weights(nt + nx, lt + lx);

    for (int trial = 0; trial < 25; ++trial) {
        std::vector<JetSeries> gens;
        int m = ngen(rng);
        for (int k = 0; k < m; ++k) {
            JetSeries g = scalar_jet(nt, nx, lt, lx);
            for (int terms = 0; terms < 3; ++terms)
                add_term(g, texps[pick_t(rng)], xexps[pick_x(rng)], coef(rng));
            gens.push_back(std::move(g));
        }
        JetSeries f = scalar_jet(nt, nx, lt, lx);
        for (int terms = 0; terms < 4; ++terms)
            add_term(f, texps[pick_t(rng)], xexps[pick_x(rng)], coef(rng));

        DivisionResult res = galligo_divide(f, gens, w);

        // remainder support disjoint from E_L(M)
        GradedSpace space(nt, nx, 1, lt, lx, w);
        NewtonData nd = newton_diagram(res.remainder, space);
        for (const auto& k : nd.q)
            for (const auto& el : res.module_el) CHECK(!(k == el));

        // idempotence
        CHECK(galligo_divide(res.remainder, gens, w).remainder == res.remainder);

        // membership: f - r = sum c_k g_k exactly
        JetSeries recon = res.remainder;
        for (std::size_t k = 0; k < gens.size(); ++k)
            recon = recon + res.coeffs[k].mul(gens[k]);
        CHECK(recon == f);
    }
}

TEST_CASE("taylor preparation: t(1+x) + t^2") {
    JetSeries f = scalar_jet(1, 1, 2, 2);
    add_term(f, MultiIndex{1}, MultiIndex{0}, 1);
    add_term(f, MultiIndex{1}, MultiIndex{1}, 1);
    add_term(f, MultiIndex{2}, MultiIndex{0}, 1);

    PrepResult res = taylor_prepare(f);
    REQUIRE(res.terms.size() == 2);
    CHECK(res.terms[0].alpha == MultiIndex{1});
    CHECK(res.terms[1].alpha == MultiIndex{2});
    // both coefficients are the constant 1
    for (const auto& term : res.terms) {
        JetSeries one = scalar_jet(1, 1, 2, 2);
        add_term(one, MultiIndex{0}, MultiIndex{0}, 1);
        CHECK(term.c == one);
    }
    CHECK(res.reconstruct(1, 1, 1, 2, 2) == f);
}

TEST_CASE("taylor preparation: single monomial") {
    // f = t^alpha g(x): one generator, c = 1
    JetSeries f = scalar_jet(2, 1, 3, 3);
    add_term(f, MultiIndex{1, 2}, MultiIndex{0}, 3);
    add_term(f, MultiIndex{1, 2}, MultiIndex{1}, -2);
    PrepResult res = taylor_prepare(f);
    REQUIRE(res.terms.size() == 1);
    CHECK(res.terms[0].alpha == MultiIndex{1, 2});
    JetSeries one = scalar_jet(2, 1, 3, 3);
    add_term(one, MultiIndex{0, 0}, MultiIndex{0}, 1);
    CHECK(res.terms[0].c == one);
    CHECK(res.reconstruct(2, 1, 1, 3, 3) == f);
}

TEST_CASE("taylor preparation of W for x - s t") {
    JetSeries g = JetSeries::identity_map(2, 1, 3, 3);
    PolyVec mone(1, 1);
    mone.comp[0] = Poly::constant(1, -1);
    g.add_coeff(MultiIndex{1, 1}, mone);
    Surface s = Surface::from_series(g, DilationSpec::coordinatewise(2),
                                     TruncationPolicy{3, 3, 1e-9});
    WField w = gamma_to_w(s);
    PrepResult res = taylor_prepare(w.W);
    REQUIRE(res.terms.size() == 1);
    CHECK(res.terms[0].alpha == MultiIndex{1, 1});
    CHECK(res.terms[0].f_alpha == mone.scaled(2));  // the field -2 dx
    JetSeries one = JetSeries(2, 1, 1, 3, 3);
    PolyVec onec(1, 1);
    onec.comp[0] = Poly::constant(1, 1);
    one.set_coeff(MultiIndex{0, 0}, onec);
    CHECK(res.terms[0].c == one);
}

namespace {
/// Kronecker normalization: (1/alpha_j!) d_t^{alpha_j} (t^{alpha_k} c_k)|_{t=0} = delta_jk,
/// read off as the t^{alpha_j} Taylor coefficient of t^{alpha_k} c_k.
void check_kronecker(const PrepResult& res, int nt, int nx, int lt, int lx) {
    for (std::size_t k = 0; k < res.terms.size(); ++k) {
        JetSeries shifted = res.terms[k].c.t_mul(res.terms[k].alpha);
        for (std::size_t j = 0; j < res.terms.size(); ++j) {
            PolyVec coef = shifted.coeff(res.terms[j].alpha);
            Poly expect = Poly::constant(nx, j == k ? 1 : 0);
            CHECK(coef.comp[0] == expect);
        }
    }
    (void)nt;
    (void)lt;
    (void)lx;
}
}  // namespace

TEST_CASE("preparation normalization and reconstruction on random jets") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> coef(-3, 3);
    const int nt = 2, nx = 2, lt = 3, lx = 3;
    auto texps = enumerate_multiindices(nt, lt);
    auto xexps = enumerate_multiindices(nx, lx);
    std::uniform_int_distribution<std::size_t> pick_t(0, texps.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_x(0, xexps.size() - 1);
    for (int trial = 0; trial < 15; ++trial) {
        JetSeries f = scalar_jet(nt, nx, lt, lx);
        for (int terms = 0; terms < 5; ++terms) {
            MultiIndex a = texps[pick_t(rng)];
            if (a.is_zero()) continue;
            add_term(f, a, xexps[pick_x(rng)], coef(rng));
        }
        if (f.is_zero()) continue;
        PrepResult res = taylor_prepare(f);
        check_kronecker(res, nt, nx, lt, lx);
        CHECK(res.reconstruct(nt, nx, 1, lt, lx) == f);
    }
}

TEST_CASE("finite_generate") {
    // S = {(x^k dx, (k)) : 1 <= k <= 5} -> F = {(x dx, (1))}
    const int lx = 5;
    std::vector<std::pair<PolyVec, MultiIndex>> s;
    for (int k = 1; k <= 5; ++k) {
        PolyVec v(1, 1);
        v.comp[0] = Poly::monomial(1, MultiIndex{k}, 1);
        s.emplace_back(v, MultiIndex{k});
    }
    GenerateResult res = finite_generate(s, lx);
    REQUIRE(res.kept.size() == 1);
    CHECK(s[static_cast<std::size_t>(res.kept[0])].second == MultiIndex{1});

    // certificates replay and respect d <= e
    for (const auto& cert : res.certs) {
        const auto& [g, e] = s[static_cast<std::size_t>(cert.element)];
        PolyVec acc(1, 1);
        for (const auto& [gen, c] : cert.combo) {
            CHECK(s[static_cast<std::size_t>(gen)].second.leq(e));
            acc.comp[0] = acc.comp[0] + c.mul_exact(s[static_cast<std::size_t>(gen)].first.comp[0]);
        }
        CHECK(acc == g);
    }

    // independent set stays itself
    std::vector<std::pair<PolyVec, MultiIndex>> ind;
    PolyVec d1(2, 2), d2(2, 2);
    d1.comp[0] = Poly::constant(2, 1);
    d2.comp[1] = Poly::constant(2, 1);
    ind.emplace_back(d1, MultiIndex{1, 0});
    ind.emplace_back(d2, MultiIndex{0, 1});
    CHECK(finite_generate(ind, 3).kept.size() == 2);

    // S = {(dx, (1)), (x dx, (2))} -> F = {(dx, (1))}
    std::vector<std::pair<PolyVec, MultiIndex>> pair;
    PolyVec dx(1, 1), xdx(1, 1);
    dx.comp[0] = Poly::constant(1, 1);
    xdx.comp[0] = Poly::variable(1, 0);
    pair.emplace_back(dx, MultiIndex{1});
    pair.emplace_back(xdx, MultiIndex{2});
    GenerateResult res2 = finite_generate(pair, 3);
    REQUIRE(res2.kept.size() == 1);
    CHECK(pair[static_cast<std::size_t>(res2.kept[0])].second == MultiIndex{1});
}
