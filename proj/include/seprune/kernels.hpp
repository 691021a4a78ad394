#pragma once

#include <cstddef>

// Dense float kernels used by the distance, kernel-machine and network code.
// Scalar reference implementations always exist; on x86 an AVX2/FMA variant
// is selected at process start when the CPU supports it. All variants
// accumulate in double so the scalar and vector paths agree to rounding noise.

namespace seprune::kernels {

struct Ops {
    // sum_i a[i]*b[i]
    double (*dot_f32)(const float* a, const float* b, std::size_t n);
    // sum_i (a[i]-b[i])^2
    double (*l2sqr_f32)(const float* a, const float* b, std::size_t n);
    // sum_i a[i]*b[i], double inputs
    double (*dot_f64)(const double* a, const double* b, std::size_t n);
    // y[i] += alpha * x[i]
    void (*axpy_f64)(double alpha, const double* x, double* y, std::size_t n);
    // acc[i] += x[i], widening accumulate used by centroid sums
    void (*accumulate_f32)(double* acc, const float* x, std::size_t n);
};

// Reference (scalar) table.
const Ops& scalar_ops();

// Dispatched table: AVX2 when available and not disabled, scalar otherwise.
// Honors SEPRUNE_SIMD=scalar in the environment.
const Ops& ops();

// Name of the active variant: "avx2" or "scalar".
const char* active_isa();

// Force the scalar table from code (tests); pass false to restore dispatch.
void force_scalar(bool on);

inline double dot(const float* a, const float* b, std::size_t n) {
    return ops().dot_f32(a, b, n);
}
inline double l2sqr(const float* a, const float* b, std::size_t n) {
    return ops().l2sqr_f32(a, b, n);
}
inline double dot(const double* a, const double* b, std::size_t n) {
    return ops().dot_f64(a, b, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
    ops().axpy_f64(alpha, x, y, n);
}
inline void accumulate(double* acc, const float* x, std::size_t n) {
    ops().accumulate_f32(acc, x, n);
}

// Squared distance between a float row and a double centroid; used by the
// clustering code, scalar only (the mixed-type loop vectorizes poorly).
double l2sqr_mixed(const float* a, const double* b, std::size_t n);

}  // namespace seprune::kernels
