#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "radon/lie.hpp"
#include "radon/linalg.hpp"

using namespace radon;

namespace {

PolyVec basis_field(int n, int i) {
    PolyVec v(n, n);
    v.comp[static_cast<std::size_t>(i)] = Poly::constant(n, 1);
    return v;
}

PolyVec field_x1_d2_3() {
    // d2 + x1 d3 on R^3
    PolyVec v(3, 3);
    v.comp[1] = Poly::constant(3, 1);
    v.comp[2] = Poly::variable(3, 0);
    return v;
}

PolyVec random_field(std::mt19937_64& rng, int n, int lx) {
    std::uniform_int_distribution<int> coef(-2, 2);
    auto mons = enumerate_multiindices(static_cast<std::size_t>(n), lx);
    std::uniform_int_distribution<std::size_t> pick(0, mons.size() - 1);
    PolyVec v(n, n);
    for (int k = 0; k < 4; ++k)
        v.comp[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, n - 1)(rng))]
            .add_term(mons[pick(rng)], coef(rng));
    return v;
}

}  // namespace

TEST_CASE("bracket basics") {
    // [d1, x1 d2] = d2
    PolyVec d1 = basis_field(2, 0);
    PolyVec x1d2(2, 2);
    x1d2.comp[1] = Poly::variable(2, 0);
    CHECK(lie_bracket_fields(d1, x1d2, 3) == basis_field(2, 1));

    // [X, X] = 0
    CHECK(lie_bracket_fields(x1d2, x1d2, 3).is_zero());

    // constant fields commute
    CHECK(lie_bracket_fields(basis_field(2, 0), basis_field(2, 1), 3).is_zero());

    // degrees add
    WeightedField a(d1, MultiIndex{1, 0});
    WeightedField b(x1d2, MultiIndex{0, 1});
    CHECK(lie_bracket(a, b, 3).d == MultiIndex{1, 1});
}

TEST_CASE("bracket antisymmetry and Jacobi identity on random fields") {
    std::mt19937_64 rng(5);
    const int lx = 6;  // large enough that nothing truncates for these degrees
    for (int trial = 0; trial < 25; ++trial) {
        PolyVec a = random_field(rng, 3, 2);
        PolyVec b = random_field(rng, 3, 2);
        PolyVec c = random_field(rng, 3, 2);
        CHECK(lie_bracket_fields(a, b, lx) + lie_bracket_fields(b, a, lx) == PolyVec(3, 3));
        PolyVec jac = lie_bracket_fields(a, lie_bracket_fields(b, c, lx), lx) +
                      lie_bracket_fields(b, lie_bracket_fields(c, a, lx), lx) +
                      lie_bracket_fields(c, lie_bracket_fields(a, b, lx), lx);
        CHECK(jac == PolyVec(3, 3));
    }
}

TEST_CASE("bch through order 4") {
    // commuting inputs: a + b
    PolyVec d1 = basis_field(3, 0), d2 = basis_field(3, 1);
    JetSeries z = bch_log_fields(d1, d2, 3, 3);
    CHECK(z.coeff(MultiIndex{1, 0}) == d1);
    CHECK(z.coeff(MultiIndex{0, 1}) == d2);
    CHECK(z.coeff(MultiIndex{1, 1}).is_zero());

    // a = d1, b = d2 + x1 d3: single cross term (1/2) d3
    JetSeries h = bch_log_fields(d1, field_x1_d2_3(), 4, 3);
    CHECK(h.coeff(MultiIndex{1, 0}) == d1);
    CHECK(h.coeff(MultiIndex{0, 1}) == field_x1_d2_3());
    CHECK(h.coeff(MultiIndex{1, 1}) == basis_field(3, 2).scaled(rat(1, 2)));
    CHECK(h.coeff(MultiIndex{2, 1}).is_zero());
    CHECK(h.coeff(MultiIndex{1, 2}).is_zero());

    // order 1 is a + b
    JetSeries o1 = bch_log_fields(d1, field_x1_d2_3(), 1, 3);
    CHECK(o1.coeff(MultiIndex{1, 1}).is_zero());

    CHECK_THROWS(bch_log_fields(d1, d2, 5, 3));
}

TEST_CASE("bch agrees with the flow composition") {
    // flow of bch(a, b) equals applying flow of a, then flow of b
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        PolyVec a = random_field(rng, 2, 2);
        PolyVec b = random_field(rng, 2, 2);
        // lx is past every degree either route can reach: the comparison is exact
        int lt = 4, lx = 30;
        JetSeries ja = JetSeries::term(2, MultiIndex{1, 0}, a, lt, lx);
        JetSeries jb = JetSeries::term(2, MultiIndex{0, 1}, b, lt, lx);
        JetSeries z = bch_log(ja, jb, 4);
        JetSeries lhs = flow_exp(z);
        JetSeries rhs = flow_exp(jb).compose_x(flow_exp(ja));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("closure of the Heisenberg pair") {
    std::vector<WeightedField> s;
    s.emplace_back(basis_field(3, 0), MultiIndex{1, 0});
    s.emplace_back(field_x1_d2_3(), MultiIndex{0, 1});
    ClosureSet c = lie_closure(s, 3, ClosureFlavor::Full, 3);
    // adds (d3, (1,1)) and its negative; nothing deeper
    auto slice = c.degree_slice(MultiIndex{1, 1});
    CHECK(!slice.empty());
    bool found = false;
    for (int i : slice)
        if (c.elems[static_cast<std::size_t>(i)].wf.X == basis_field(3, 2)) found = true;
    CHECK(found);
    for (const auto& e : c.elems) CHECK(e.wf.d.order() <= 3);
    // no elements beyond degree (1,1) survive
    CHECK(c.degree_slice(MultiIndex{2, 1}).empty());
    CHECK(c.degree_slice(MultiIndex{1, 2}).empty());

    // singleton set closes to itself
    ClosureSet single = lie_closure({s[0]}, 3, ClosureFlavor::Full, 3);
    CHECK(single.elems.size() == 1);
}

TEST_CASE("closure degree additivity via provenance") {
    std::vector<WeightedField> s;
    s.emplace_back(basis_field(3, 0), MultiIndex{1, 0});
    s.emplace_back(field_x1_d2_3(), MultiIndex{0, 1});
    ClosureSet c = lie_closure(s, 4, ClosureFlavor::Full, 3);
    for (const auto& e : c.elems) {
        if (e.parent_a < 0) continue;
        CHECK(e.wf.d == c.elems[static_cast<std::size_t>(e.parent_a)].wf.d +
                            c.elems[static_cast<std::size_t>(e.parent_b)].wf.d);
    }
}

TEST_CASE("span at degree") {
    std::vector<WeightedField> s;
    s.emplace_back(basis_field(3, 0), MultiIndex{1, 0});
    s.emplace_back(field_x1_d2_3(), MultiIndex{0, 1});
    ClosureSet c = lie_closure(s, 3, ClosureFlavor::Full, 3);

    SpanBasis at0 = span_at_degree_point(c, MultiIndex{1, 1}, {Rat(0), Rat(0), Rat(0)});
    CHECK(at0.rank == 1);

    SpanBasis d10 = span_at_degree_point(c, MultiIndex{1, 0}, {Rat(0), Rat(0), Rat(0)});
    CHECK(d10.rank == 1);

    CHECK(span_at_degree_symbolic(c, MultiIndex{3, 0}, 3).rank == 0);
}

TEST_CASE("jacobi span property: L slices lie in the span of L0 slices") {
    std::mt19937_64 rng(29);
    auto monomials = enumerate_multiindices(3, 3);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<WeightedField> s;
        s.emplace_back(random_field(rng, 3, 1), MultiIndex{1, 0});
        s.emplace_back(random_field(rng, 3, 1), MultiIndex{0, 1});
        s.emplace_back(random_field(rng, 3, 1), MultiIndex{1, 1});
        ClosureSet full = lie_closure(s, 4, ClosureFlavor::Full, 3);
        ClosureSet left = lie_closure(s, 4, ClosureFlavor::LeftNormed, 3);
        for (const auto& d0 : enumerate_multiindices(2, 4)) {
            if (d0.is_zero()) continue;
            auto sa = full.degree_slice(d0);
            if (sa.empty()) continue;
            std::vector<std::vector<Rat>> lvecs;
            for (int i : left.degree_slice(d0))
                lvecs.push_back(
                    field_coeff_vector(left.elems[static_cast<std::size_t>(i)].wf.X, monomials));
            for (int i : sa) {
                auto v =
                    field_coeff_vector(full.elems[static_cast<std::size_t>(i)].wf.X, monomials);
                CHECK(in_span(lvecs, v));
            }
        }
    }
}

TEST_CASE("hoermander check") {
    // {d1, x1 d2} spans R^2 at 0 through one bracket
    std::vector<WeightedField> s;
    PolyVec x1d2(2, 2);
    x1d2.comp[1] = Poly::variable(2, 0);
    s.emplace_back(basis_field(2, 0), MultiIndex{1});
    s.emplace_back(x1d2, MultiIndex{1});
    HoermanderResult h = hoermander_check(s, {Rat(0), Rat(0)}, 2, 3);
    CHECK(h.rank == 2);
    CHECK(h.spans);

    // coordinate frame
    std::vector<WeightedField> frame;
    frame.emplace_back(basis_field(2, 0), MultiIndex{1});
    frame.emplace_back(basis_field(2, 1), MultiIndex{1});
    CHECK(hoermander_check(frame, {Rat(0), Rat(0)}, 1, 3).spans);

    // x1 d1 in R^1 vanishes at 0 along with all brackets
    PolyVec xd(1, 1);
    xd.comp[0] = Poly::variable(1, 0);
    std::vector<WeightedField> degenerate;
    degenerate.emplace_back(xd, MultiIndex{1});
    HoermanderResult hd = hoermander_check(degenerate, {Rat(0)}, 3, 3);
    CHECK(hd.rank == 0);
    CHECK(!hd.spans);
}
