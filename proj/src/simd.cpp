#include "radon/simd.hpp"

#include <cmath>

namespace radon::simd {

namespace ref {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double* y, double a, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(double* x, double a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double sum(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double sup_abs(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
    return m;
}

void ewise_max(double* dst, const double* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = std::max(dst[i], src[i]);
}

}  // namespace ref

struct Backend {
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double*, double, const double*, std::size_t);
    void (*scale)(double*, double, std::size_t);
    double (*sum)(const double*, std::size_t);
    double (*sup_abs)(const double*, std::size_t);
    void (*ewise_max)(double*, const double*, std::size_t);
    const char* name;
};

#if defined(__x86_64__)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double* y, double a, const double* x, std::size_t n);
void scale(double* x, double a, std::size_t n);
double sum(const double* x, std::size_t n);
double sup_abs(const double* x, std::size_t n);
void ewise_max(double* dst, const double* src, std::size_t n);
}  // namespace avx2
#endif
#if defined(__aarch64__)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double* y, double a, const double* x, std::size_t n);
void scale(double* x, double a, std::size_t n);
double sum(const double* x, std::size_t n);
double sup_abs(const double* x, std::size_t n);
void ewise_max(double* dst, const double* src, std::size_t n);
}  // namespace neon
#endif

namespace {

Backend pick_backend() {
#if defined(__x86_64__)
    if (__builtin_cpu_supports("avx2"))
        return {avx2::dot, avx2::axpy, avx2::scale, avx2::sum, avx2::sup_abs, avx2::ewise_max,
                "avx2"};
#endif
#if defined(__aarch64__)
    return {neon::dot, neon::axpy, neon::scale, neon::sum, neon::sup_abs, neon::ewise_max,
            "neon"};
#endif
    return {ref::dot, ref::axpy, ref::scale, ref::sum, ref::sup_abs, ref::ewise_max, "scalar"};
}

const Backend& backend() {
    static const Backend b = pick_backend();
    return b;
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) { return backend().dot(a, b, n); }
void axpy(double* y, double a, const double* x, std::size_t n) { backend().axpy(y, a, x, n); }
void scale(double* x, double a, std::size_t n) { backend().scale(x, a, n); }
double sum(const double* x, std::size_t n) { return backend().sum(x, n); }
double sup_abs(const double* x, std::size_t n) { return backend().sup_abs(x, n); }
void ewise_max(double* dst, const double* src, std::size_t n) { backend().ewise_max(dst, src, n); }
const char* active_backend() { return backend().name; }

}  // namespace radon::simd
