#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "radon/jet.hpp"
#include "radon/multiindex.hpp"
#include "radon/poly.hpp"

using namespace radon;

TEST_CASE("deg is the weighted sum of exponents") {
    DilationSpec e(2, 2, {MultiIndex{1, 0}, MultiIndex{0, 1}});
    CHECK(deg(MultiIndex{1, 1}, e) == MultiIndex{1, 1});
    CHECK(deg(MultiIndex{0, 0}, e) == MultiIndex{0, 0});

    DilationSpec e3(3, 2, {MultiIndex{1, 0}, MultiIndex{0, 1}, MultiIndex{1, 1}});
    CHECK(deg(MultiIndex{2, 0, 1}, e3) == MultiIndex{3, 1});

    CHECK_THROWS(deg(MultiIndex{1}, e));
}

TEST_CASE("deg additivity on random indices") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> d(0, 3);
    DilationSpec e(3, 2, {MultiIndex{1, 0}, MultiIndex{0, 2}, MultiIndex{1, 1}});
    for (int trial = 0; trial < 200; ++trial) {
        MultiIndex a{d(rng), d(rng), d(rng)}, b{d(rng), d(rng), d(rng)};
        CHECK(deg(a + b, e) == deg(a, e) + deg(b, e));
    }
}

TEST_CASE("classify_power") {
    DilationSpec e(2, 2, {MultiIndex{1, 0}, MultiIndex{0, 1}});
    CHECK(classify_power(MultiIndex{1, 1}, e).cls == PowerClass::NonPure);
    CHECK(classify_power(MultiIndex{2, 0}, e).cls == PowerClass::Pure);
    CHECK(classify_power(MultiIndex{2, 0}, e).component == 0);
    CHECK(classify_power(MultiIndex{0, 0}, e).cls == PowerClass::Zero);

    DilationSpec one = DilationSpec::isotropic(3);
    CHECK(classify_power(MultiIndex{1, 2, 0}, one).cls == PowerClass::Pure);
}

TEST_CASE("poly arithmetic and evaluation") {
    Poly x = Poly::variable(2, 0), y = Poly::variable(2, 1);
    Poly p = x.mul_exact(x) + y.scaled(rat(3, 2));
    CHECK(p.eval({rat(2), rat(4)}) == rat(10));
    CHECK(p.derivative(0) == x.scaled(2));

    bool sat = false;
    Poly q = p.mul(p, 2, &sat);
    CHECK(sat);  // x^4 dropped
    CHECK(q.coeff(MultiIndex{0, 2}) == rat(9, 4));

    Poly sub = p.subst_exact({y, x});
    CHECK(sub == y.mul_exact(y) + x.scaled(rat(3, 2)));
}

TEST_CASE("jet arithmetic identities") {
    // a + 0 = a
    PolyVec one(1, 1);
    one.comp[0] = Poly::constant(1, 1);
    JetSeries a = JetSeries::term(1, MultiIndex{1}, one, 3, 3);
    JetSeries zero = JetSeries::zero(1, 1, 1, 3, 3);
    CHECK(a + zero == a);

    // t * t at lt = 1 truncates away
    JetSeries t1 = JetSeries::term(1, MultiIndex{1}, one, 1, 3);
    CHECK(t1.mul(t1).is_zero());

    // (1+t)(1-t) = 1 - t^2 at lt = 2
    JetSeries c = JetSeries::term(1, MultiIndex{0}, one, 2, 3);
    JetSeries tp = JetSeries::term(1, MultiIndex{1}, one, 2, 3);
    JetSeries prod = (c + tp).mul(c - tp);
    JetSeries expect = c - JetSeries::term(1, MultiIndex{2}, one, 2, 3);
    CHECK(prod == expect);
}

TEST_CASE("map inversion: x + t") {
    // gamma(x) = x + t
    JetSeries g = JetSeries::identity_map(1, 1, 3, 3);
    PolyVec one(1, 1);
    one.comp[0] = Poly::constant(1, 1);
    g.add_coeff(MultiIndex{1}, one);
    JetSeries inv = g.invert_map();
    JetSeries expect = JetSeries::identity_map(1, 1, 3, 3);
    expect.add_coeff(MultiIndex{1}, one.scaled(-1));
    CHECK(inv == expect);
}

TEST_CASE("map inversion: x + t x^2 to order t^2") {
    JetSeries g = JetSeries::identity_map(1, 1, 2, 4);
    PolyVec x2(1, 1);
    x2.comp[0] = Poly::monomial(1, MultiIndex{2}, 1);
    g.add_coeff(MultiIndex{1}, x2);
    JetSeries inv = g.invert_map();
    // inverse = x - t x^2 + 2 t^2 x^3 (mod t^3)
    CHECK(inv.coeff(MultiIndex{1}).comp[0] == Poly::monomial(1, MultiIndex{2}, -1));
    CHECK(inv.coeff(MultiIndex{2}).comp[0] == Poly::monomial(1, MultiIndex{3}, 2));
    // round trip
    CHECK(g.compose_x(inv) == JetSeries::identity_map(1, 1, 2, 4));
    CHECK(inv.compose_x(g) == JetSeries::identity_map(1, 1, 2, 4));
}

TEST_CASE("identity inverts to identity") {
    JetSeries id = JetSeries::identity_map(2, 2, 3, 3);
    CHECK(id.invert_map() == id);
}

namespace {
JetSeries random_map(std::mt19937_64& rng, int nt, int nx, int lt, int lx) {
    std::uniform_int_distribution<int> coef(-2, 2);
    JetSeries g = JetSeries::identity_map(nt, nx, lt, lx);
    auto alphas = enumerate_multiindices(static_cast<std::size_t>(nt), lt);
    auto xmons = enumerate_multiindices(static_cast<std::size_t>(nx), lx);
    std::uniform_int_distribution<std::size_t> pick_a(0, alphas.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_m(0, xmons.size() - 1);
    for (int k = 0; k < 5; ++k) {
        MultiIndex a = alphas[pick_a(rng)];
        if (a.is_zero()) continue;
        PolyVec p(nx, nx);
        p.comp[static_cast<std::size_t>(k) % nx].add_term(xmons[pick_m(rng)], coef(rng));
        g.add_coeff(a, p);
    }
    return g;
}
}  // namespace

TEST_CASE("inversion round trip and composition associativity on random maps") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        JetSeries g = random_map(rng, 2, 2, 3, 3);
        JetSeries inv = g.invert_map();
        CHECK(inv.invert_map() == g);
        JetSeries h = random_map(rng, 2, 2, 3, 3);
        JetSeries k = random_map(rng, 2, 2, 3, 3);
        // (g o h) o k == g o (h o k) modulo truncation
        CHECK(g.compose_x(h).compose_x(k) == g.compose_x(h.compose_x(k)));
    }
}

TEST_CASE("flow exponential of a constant field is a shift") {
    PolyVec c(1, 1);
    c.comp[0] = Poly::constant(1, 1);
    JetSeries v = JetSeries::term(1, MultiIndex{1}, c, 3, 3);
    JetSeries g = flow_exp(v);
    JetSeries expect = JetSeries::identity_map(1, 1, 3, 3);
    expect.add_coeff(MultiIndex{1}, c);
    CHECK(g == expect);
    CHECK(flow_log(g) == v);
}
