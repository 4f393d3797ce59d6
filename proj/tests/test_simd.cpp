#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "radon/simd.hpp"

using namespace radon;

// the dispatched backend must match the scalar reference on every kernel;
// reductions may reassociate, so compare to a tight relative tolerance

TEST_CASE("dispatched kernels agree with the scalar reference") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    INFO("active backend: ", simd::active_backend());
    for (std::size_t n : {std::size_t(1), std::size_t(3), std::size_t(4), std::size_t(17),
                          std::size_t(256), std::size_t(1001)}) {
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = u(rng);
            b[i] = u(rng);
        }

        double d0 = simd::ref::dot(a.data(), b.data(), n);
        double d1 = simd::dot(a.data(), b.data(), n);
        CHECK(d1 == doctest::Approx(d0).epsilon(1e-12));

        double s0 = simd::ref::sum(a.data(), n);
        double s1 = simd::sum(a.data(), n);
        CHECK(s1 == doctest::Approx(s0).epsilon(1e-12));

        CHECK(simd::sup_abs(a.data(), n) == simd::ref::sup_abs(a.data(), n));

        std::vector<double> y0 = a, y1 = a;
        simd::ref::axpy(y0.data(), 2.5, b.data(), n);
        simd::axpy(y1.data(), 2.5, b.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y0[i]).epsilon(1e-14));

        std::vector<double> z0 = a, z1 = a;
        simd::ref::scale(z0.data(), -0.75, n);
        simd::scale(z1.data(), -0.75, n);
        for (std::size_t i = 0; i < n; ++i) CHECK(z1[i] == z0[i]);

        std::vector<double> m0 = a, m1 = a;
        simd::ref::ewise_max(m0.data(), b.data(), n);
        simd::ewise_max(m1.data(), b.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(m1[i] == m0[i]);
    }
}

TEST_CASE("edge cases") {
    CHECK(simd::sum(nullptr, 0) == 0.0);
    CHECK(simd::sup_abs(nullptr, 0) == 0.0);
    double x = 3.0;
    CHECK(simd::dot(&x, &x, 1) == 9.0);
}
