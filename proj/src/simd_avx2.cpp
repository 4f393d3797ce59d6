// AVX2 variants; this translation unit is compiled with -mavx2 and entered
// only after the runtime cpuid check in simd.cpp.
#if defined(__x86_64__)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace radon::simd::avx2 {

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    double s = lane[0] + lane[1] + lane[2] + lane[3];
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double* y, double a, const double* x, std::size_t n) {
    __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale(double* x, double a, std::size_t n) {
    __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
    for (; i < n; ++i) x[i] *= a;
}

double sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    double s = lane[0] + lane[1] + lane[2] + lane[3];
    for (; i < n; ++i) s += x[i];
    return s;
}

double sup_abs(const double* x, std::size_t n) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_max_pd(acc, _mm256_and_pd(_mm256_loadu_pd(x + i), mask));
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    double m = lane[0];
    for (int k = 1; k < 4; ++k) m = lane[k] > m ? lane[k] : m;
    for (; i < n; ++i) {
        double v = std::fabs(x[i]);
        if (v > m) m = v;
    }
    return m;
}

void ewise_max(double* dst, const double* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(dst + i, _mm256_max_pd(_mm256_loadu_pd(dst + i), _mm256_loadu_pd(src + i)));
    for (; i < n; ++i) dst[i] = dst[i] > src[i] ? dst[i] : src[i];
}

}  // namespace radon::simd::avx2

#endif  // __x86_64__
