#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "radon/geometry.hpp"
#include "radon/surface.hpp"

using namespace radon;

namespace {

PolyVec const_field(int n, int i) {
    PolyVec v(n, n);
    v.comp[static_cast<std::size_t>(i)] = Poly::constant(n, 1);
    return v;
}

}  // namespace

TEST_CASE("euclidean ball sampling fills the disc") {
    std::vector<WeightedField> fields;
    fields.emplace_back(const_field(2, 0), MultiIndex{1});
    fields.emplace_back(const_field(2, 1), MultiIndex{1});
    BallSampleParams params;
    params.paths = 800;
    params.seed = 3;
    const double delta0 = 0.5;
    BallSample s = cc_ball_sample(fields, {0.0, 0.0}, {delta0}, params);
    CHECK(s.escaped == 0);
    CHECK(s.extents[0] == doctest::Approx(delta0).epsilon(0.05));
    CHECK(s.extents[1] == doctest::Approx(delta0).epsilon(0.05));
    // never beyond the radius
    for (const auto& p : s.points)
        CHECK(std::hypot(p[0], p[1]) <= delta0 * 1.0 + 1e-9);
}

TEST_CASE("delta = 0 collapses the ball to the center") {
    std::vector<WeightedField> fields;
    fields.emplace_back(const_field(2, 0), MultiIndex{1});
    BallSampleParams params;
    params.paths = 32;
    BallSample s = cc_ball_sample(fields, {0.25, -0.5}, {0.0}, params);
    for (const auto& p : s.points) {
        CHECK(p[0] == doctest::Approx(0.25));
        CHECK(p[1] == doctest::Approx(-0.5));
    }
    CHECK(s.extents[0] == doctest::Approx(0.0));
}

TEST_CASE("grushin ball: second axis scales like delta^2") {
    std::vector<WeightedField> fields;
    PolyVec x1d2(2, 2);
    x1d2.comp[1] = Poly::variable(2, 0);
    fields.emplace_back(const_field(2, 0), MultiIndex{1});
    fields.emplace_back(x1d2, MultiIndex{1});
    BallSampleParams params;
    params.paths = 1500;
    params.seed = 5;

    std::vector<double> logd, logext;
    for (int k = 0; k <= 4; ++k) {
        double delta = std::pow(2.0, -k);
        BallSample s = cc_ball_sample(fields, {0.0, 0.0}, {delta}, params);
        logd.push_back(std::log2(delta));
        logext.push_back(std::log2(s.extents[1]));
    }
    // least-squares slope
    double n = static_cast<double>(logd.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < logd.size(); ++i) {
        sx += logd[i];
        sy += logext[i];
        sxx += logd[i] * logd[i];
        sxy += logd[i] * logext[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope > 1.8);
    CHECK(slope < 2.2);
}

TEST_CASE("ball extents are monotone in delta") {
    std::vector<WeightedField> fields;
    PolyVec x1d2(2, 2);
    x1d2.comp[1] = Poly::variable(2, 0);
    fields.emplace_back(const_field(2, 0), MultiIndex{1, 0});
    fields.emplace_back(x1d2, MultiIndex{0, 1});
    BallSampleParams params;
    params.paths = 600;
    params.seed = 9;
    double prev0 = -1, prev1 = -1;
    for (double d : {0.25, 0.5, 1.0}) {
        BallSample s = cc_ball_sample(fields, {0.0, 0.0}, {d, d}, params);
        // 10% statistical tolerance
        CHECK(s.extents[0] >= prev0 * 0.9);
        CHECK(s.extents[1] >= prev1 * 0.9);
        prev0 = s.extents[0];
        prev1 = s.extents[1];
    }
}

TEST_CASE("control: exact certificate x1^2 d2 from the grushin pair") {
    PolyVec x1d2(2, 2);
    x1d2.comp[1] = Poly::variable(2, 0);
    PolyVec x12d2(2, 2);
    x12d2.comp[1] = Poly::monomial(2, MultiIndex{2, 0}, 1);
    std::vector<WeightedField> s;
    s.emplace_back(const_field(2, 0), MultiIndex{1, 0});
    s.emplace_back(x1d2, MultiIndex{0, 1});

    WeightedField target(x12d2, MultiIndex{1, 2});
    ControlCertificate cert = control_check(target, s);
    CHECK(cert.status == Status::Proved);
    CHECK(certificate_replays(target, s, cert));
    // the certificate uses x1 * (x1 d2), degree (0,1) <= (1,2)
    REQUIRE(cert.coeffs.size() == 1);
    CHECK(cert.coeffs[0].generator == 1);
    CHECK(cert.coeffs[0].c == Poly::variable(2, 0));
}

TEST_CASE("control: refutation where candidates vanish") {
    // target (dx, (1,1)) against {(x dx, (1,1))}: at x = 0 the candidate
    // vanishes and the target does not
    PolyVec dx(1, 1), xdx(1, 1);
    dx.comp[0] = Poly::constant(1, 1);
    xdx.comp[0] = Poly::variable(1, 0);
    std::vector<WeightedField> s;
    s.emplace_back(xdx, MultiIndex{1, 1});
    WeightedField target(dx, MultiIndex{1, 1});

    ControlCertificate cert = control_check(target, s);
    CHECK(cert.status == Status::Refuted);
    REQUIRE(cert.witness.has_value());
    CHECK(witness_infeasible_exact(target, s, cert.witness->delta, cert.witness->x));
    CHECK(cert.witness->aug_rank == cert.witness->span_rank + 1);
}

TEST_CASE("control: self control is trivially proved") {
    PolyVec x1d2(2, 2);
    x1d2.comp[1] = Poly::variable(2, 0);
    std::vector<WeightedField> s;
    s.emplace_back(x1d2, MultiIndex{1, 1});
    WeightedField target(x1d2, MultiIndex{1, 1});
    ControlCertificate cert = control_check(target, s);
    CHECK(cert.status == Status::Proved);
    REQUIRE(cert.coeffs.size() == 1);
    CHECK(cert.coeffs[0].c == Poly::constant(2, 1));
    CHECK(certificate_replays(target, s, cert));
}

TEST_CASE("control consistency and refutation soundness on random instances") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> coef(-2, 2);
    auto mons = enumerate_multiindices(2, 2);
    std::uniform_int_distribution<std::size_t> pick(0, mons.size() - 1);
    std::uniform_int_distribution<int> dcomp(0, 2);

    auto random_field = [&](int n) {
        PolyVec v(n, n);
        for (int k = 0; k < 3; ++k)
            v.comp[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, n - 1)(rng))]
                .add_term(mons[pick(rng)], coef(rng));
        return v;
    };

    for (int trial = 0; trial < 30; ++trial) {
        std::vector<WeightedField> s;
        int q = 1 + trial % 3;
        for (int j = 0; j < q; ++j)
            s.emplace_back(random_field(2), MultiIndex{1 + dcomp(rng) % 2, dcomp(rng)});
        WeightedField target(random_field(2), MultiIndex{dcomp(rng), 1 + dcomp(rng) % 2});

        ControlCertificate cert = control_check(target, s);
        if (cert.status == Status::Proved) {
            CHECK(certificate_replays(target, s, cert));
        } else if (cert.status == Status::Refuted) {
            REQUIRE(cert.witness.has_value());
            CHECK(witness_infeasible_exact(target, s, cert.witness->delta, cert.witness->x));
        }
        // never both: a proved certificate replay and a refutation witness are
        // mutually exclusive by construction; re-run to check determinism
        ControlCertificate again = control_check(target, s);
        CHECK(again.status == cert.status);
    }
}

TEST_CASE("control of a W field via the preparation route") {
    // gamma = x + t: W = t dx controlled by {(dx, (1))}
    JetSeries g = JetSeries::identity_map(1, 1, 3, 3);
    PolyVec one(1, 1);
    one.comp[0] = Poly::constant(1, 1);
    g.add_coeff(MultiIndex{1}, one);
    Surface s = Surface::from_series(g, DilationSpec::isotropic(1), TruncationPolicy{3, 3, 1e-9});
    WField w = gamma_to_w(s);

    std::vector<WeightedField> gens;
    gens.emplace_back(one, MultiIndex{1});
    WControlResult res = control_check_w(w.W, s.dil, gens);
    CHECK(res.cert.status == Status::Proved);

    // against {(x dx, (1))} the Taylor coefficient dx is refuted pointwise
    PolyVec xdx(1, 1);
    xdx.comp[0] = Poly::variable(1, 0);
    std::vector<WeightedField> bad;
    bad.emplace_back(xdx, MultiIndex{1});
    WControlResult res2 = control_check_w(w.W, s.dil, bad);
    CHECK(res2.cert.status == Status::Refuted);
}
