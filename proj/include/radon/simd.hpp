#pragma once

#include <cstddef>

namespace radon::simd {

/// Double-precision kernels behind the numeric modules. Implementations are
/// selected once at startup: AVX2 on x86-64 when the CPU supports it, NEON on
/// arm64, scalar otherwise. The scalar reference lives in simd::ref and the
/// dispatched variants are equivalence-tested against it.

double dot(const double* a, const double* b, std::size_t n);
void axpy(double* y, double a, const double* x, std::size_t n);
void scale(double* x, double a, std::size_t n);
double sum(const double* x, std::size_t n);
double sup_abs(const double* x, std::size_t n);
void ewise_max(double* dst, const double* src, std::size_t n);

inline double l2_norm_sq(const double* x, std::size_t n) { return dot(x, x, n); }

const char* active_backend();

namespace ref {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double* y, double a, const double* x, std::size_t n);
void scale(double* x, double a, std::size_t n);
double sum(const double* x, std::size_t n);
double sup_abs(const double* x, std::size_t n);
void ewise_max(double* dst, const double* src, std::size_t n);
}  // namespace ref

}  // namespace radon::simd
