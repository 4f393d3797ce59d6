// NEON variants for arm64.
#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>
#include <cstddef>

namespace radon::simd::neon {

double dot(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
    double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double* y, double a, const double* x, std::size_t n) {
    float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale(double* x, double a, std::size_t n) {
    float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(vld1q_f64(x + i), va));
    for (; i < n; ++i) x[i] *= a;
}

double sum(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
    double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; i < n; ++i) s += x[i];
    return s;
}

double sup_abs(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vmaxq_f64(acc, vabsq_f64(vld1q_f64(x + i)));
    double m = std::max(vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1));
    for (; i < n; ++i) m = std::max(m, std::fabs(x[i]));
    return m;
}

void ewise_max(double* dst, const double* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(dst + i, vmaxq_f64(vld1q_f64(dst + i), vld1q_f64(src + i)));
    for (; i < n; ++i) dst[i] = std::max(dst[i], src[i]);
}

}  // namespace radon::simd::neon

#endif  // __aarch64__
