#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "radon/kernels.hpp"

using namespace radon;

namespace {

GridSpec grid1d(double a, int res) { return GridSpec{{GridAxis{-a, a, res}}}; }
GridSpec grid2d(double a, int res) {
    return GridSpec{{GridAxis{-a, a, res}, GridAxis{-a, a, res}}};
}

}  // namespace

TEST_CASE("bump family cancellation patterns") {
    BumpParams params;
    params.a = 0.5;
    DilationSpec e = DilationSpec::coordinatewise(2);
    BumpFamily fam = make_bump_family(params, 1, e);

    // j = 0: no cancellation required, bump is the plain even profile
    const BumpMember& m0 = fam.member(MultiIndex{0, 0});
    CHECK(m0.odd_vars.empty());
    CHECK(fam.eval_member(MultiIndex{0, 0}, {0.1, -0.2}) ==
          fam.eval_member(MultiIndex{0, 0}, {-0.1, 0.2}));

    // j = (1,0): odd in t1 only
    const BumpMember& m10 = fam.member(MultiIndex{1, 0});
    CHECK(m10.odd_vars == std::vector<int>{0});

    // cancellation integrals vanish (odd symmetry is exact)
    CHECK(max_cancellation_residual(fam) < 1e-10);

    // norms were measured through order 4
    CHECK(fam.checked_norm_orders == std::vector<int>{0, 1, 2, 3, 4});
    CHECK(fam.uniform_bound > 0.0);
}

TEST_CASE("generic asymmetric profile is projected to cancellation") {
    BumpParams params;
    params.a = 0.5;
    params.asymmetric = true;
    params.ref_res = 256;
    BumpFamily fam = make_bump_family(params, 1, DilationSpec::isotropic(1));
    // j = (1): projection must drive the integral below 1e-10
    CHECK(max_cancellation_residual(fam) < 1e-10);
    // j = (0): no constraint, and the asymmetric mass is genuinely nonzero
    std::vector<double> t{0.0};
    double probe = fam.block_integral(MultiIndex{0}, {0}, t);
    CHECK(std::fabs(probe) > 1e-3);
}

TEST_CASE("synth: J = 0 is a single smooth bump") {
    BumpParams params;
    params.a = 0.5;
    BumpFamily fam = make_bump_family(params, 0, DilationSpec::isotropic(1));
    GridKernel k = synth_kernel(fam, 0, grid1d(0.5, 256));
    const BumpMember& m = fam.member(MultiIndex{0});
    for (std::size_t i = 0; i < k.values.v.size(); i += 37) {
        std::vector<double> t = k.values.spec.node(i);
        CHECK(k.values.v[i] == doctest::Approx(m.eval(params, t)).epsilon(1e-12));
    }
}

TEST_CASE("synth rejects under-resolved grids") {
    BumpParams params;
    params.a = 0.5;
    BumpFamily fam = make_bump_family(params, 6, DilationSpec::isotropic(1));
    CHECK_THROWS(synth_kernel(fam, 6, grid1d(0.5, 128)));
    CHECK_NOTHROW(synth_kernel(fam, 4, grid1d(0.5, 1024)));
}

TEST_CASE("integral preservation under dilation") {
    BumpParams params;
    params.a = 0.5;
    BumpFamily fam = make_bump_family(params, 4, DilationSpec::isotropic(1));
    // quadrature of the dilated member equals that of the undilated one
    const int q = 4096;
    double h = 2.0 * params.a / q;
    for (int j = 0; j <= 4; ++j) {
        double base = 0.0, dil = 0.0;
        for (int i = 0; i < q; ++i) {
            std::vector<double> t{-params.a + (i + 0.5) * h};
            base += fam.eval_member(MultiIndex{j}, t) * h;
            dil += fam.eval_dilated(MultiIndex{j}, t) * h;
        }
        CHECK(dil == doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("cz kernel: |t K_J(t)| stable in J") {
    BumpParams params;
    params.a = 0.5;
    BumpFamily fam = make_bump_family(params, 8, DilationSpec::isotropic(1));
    GridSpec g = grid1d(0.5, 4096);
    double prev = -1.0;
    for (int J : {6, 7, 8}) {
        GridKernel k = synth_kernel(fam, J, g);
        auto bounds = validate_product_bounds(k, 0);
        double c = bounds.at(MultiIndex{0});
        CHECK(c > 0.0);
        if (prev > 0.0) CHECK(std::fabs(c - prev) / prev < 0.10);
        prev = c;
    }
}

TEST_CASE("two-parameter tensor kernel is the product of the one-parameter sums") {
    BumpParams params;
    params.a = 0.5;
    const int J = 4;
    BumpFamily fam2 = make_bump_family(params, J, DilationSpec::coordinatewise(2));
    BumpFamily fam1 = make_bump_family(params, J, DilationSpec::isotropic(1));

    GridKernel k2 = synth_kernel(fam2, J, grid2d(0.5, 512));
    GridKernel k1 = synth_kernel(fam1, J, grid1d(0.5, 512));

    // K_J(s, t) = K_J(s) K_J(t) on the grid
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < 512; i += 7) {
        for (int j = 0; j < 512; j += 7) {
            double lhs = k2.values.v[k2.values.spec.flat({i, j})];
            double rhs = k1.values.v[static_cast<std::size_t>(i)] *
                         k1.values.v[static_cast<std::size_t>(j)];
            worst = std::max(worst, std::fabs(lhs - rhs));
            scale = std::max(scale, std::fabs(lhs));
        }
    }
    CHECK(worst <= 1e-8 * scale);

    // product-bound constant close to the product of the 1-parameter constants
    auto b2 = validate_product_bounds(k2, 0);
    auto b1 = validate_product_bounds(k1, 0);
    double c2 = b2.at(MultiIndex{0, 0});
    double c1 = b1.at(MultiIndex{0});
    CHECK(c2 == doctest::Approx(c1 * c1).epsilon(0.20));
}

TEST_CASE("validate_product_bounds on the zero kernel") {
    BumpParams params;
    params.a = 0.5;
    BumpFamily fam = make_bump_family(params, 2, DilationSpec::isotropic(1));
    GridKernel k = synth_kernel(fam, 2, grid1d(0.5, 512));
    std::fill(k.values.v.begin(), k.values.v.end(), 0.0);
    auto bounds = validate_product_bounds(k, 1);
    for (const auto& [alpha, c] : bounds) CHECK(c == 0.0);
}

TEST_CASE("dilation covariance: halving the grid shifts j by one") {
    BumpParams params;
    params.a = 0.5;
    const int J = 3, R = 256;
    BumpFamily fam = make_bump_family(params, J + 1, DilationSpec::isotropic(1));

    GridKernel half = synth_kernel(fam, J, grid1d(0.25, R));
    GridKernel full = synth_kernel(fam, J + 1, grid1d(0.5, 2 * R));

    // 2 K_J(t/2) = K_{J+1}(t) - sigma^{(2^0)}(t) where the samples align
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < R; ++i) {
        double t = full.values.spec.axes[0].node(i + R / 2);
        double lhs = 2.0 * half.values.v[static_cast<std::size_t>(i)];
        double rhs = full.values.v[static_cast<std::size_t>(i + R / 2)] -
                     fam.eval_dilated(MultiIndex{0}, {t});
        worst = std::max(worst, std::fabs(lhs - rhs));
        scale = std::max(scale, std::fabs(lhs));
    }
    CHECK(worst <= 1e-12 * std::max(scale, 1.0));
}

TEST_CASE("kernel dump round trip") {
    BumpParams params;
    params.a = 0.5;
    BumpFamily fam = make_bump_family(params, 2, DilationSpec::coordinatewise(2));
    GridKernel k = synth_kernel(fam, 2, grid2d(0.5, 128));

    std::stringstream ss;
    write_grid_dump(ss, kernel_to_dump(k));
    GridDump dump = read_grid_dump(ss);
    GridKernel back = kernel_from_dump(dump, &fam);

    CHECK(back.dil.N == k.dil.N);
    CHECK(back.dil.nu == k.dil.nu);
    CHECK(back.dil.e == k.dil.e);
    CHECK(back.J == k.J);
    CHECK(back.values.spec == k.values.spec);
    REQUIRE(back.values.v.size() == k.values.v.size());
    for (std::size_t i = 0; i < k.values.v.size(); i += 101)
        CHECK(back.values.v[i] == doctest::Approx(k.values.v[i]).epsilon(1e-15));
}
