#include "seprune/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace seprune::kernels {

namespace {

double dot_f32_scalar(const float* a, const float* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    return acc;
}

double l2sqr_f32_scalar(const float* a, const float* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        acc += diff * diff;
    }
    return acc;
}

double dot_f64_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy_f64_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void accumulate_f32_scalar(double* acc, const float* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] += static_cast<double>(x[i]);
}

constexpr Ops kScalarOps{
    dot_f32_scalar, l2sqr_f32_scalar, dot_f64_scalar, axpy_f64_scalar,
    accumulate_f32_scalar,
};

bool g_force_scalar = false;

bool simd_disabled_by_env() {
    const char* v = std::getenv("SEPRUNE_SIMD");
    return v != nullptr && std::strcmp(v, "scalar") == 0;
}

}  // namespace

#if defined(__x86_64__) || defined(_M_X64)
extern const Ops kAvx2Ops;  // kernels_avx2.cpp

static const Ops* detect() {
    if (simd_disabled_by_env()) return &kScalarOps;
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return &kAvx2Ops;
    return &kScalarOps;
}
#else
static const Ops* detect() {
    (void)simd_disabled_by_env;
    return &kScalarOps;
}
#endif

const Ops& scalar_ops() { return kScalarOps; }

const Ops& ops() {
    static const Ops* dispatched = detect();
    return g_force_scalar ? kScalarOps : *dispatched;
}

const char* active_isa() {
    return &ops() == &kScalarOps ? "scalar" : "avx2";
}

void force_scalar(bool on) { g_force_scalar = on; }

double l2sqr_mixed(const float* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double diff = static_cast<double>(a[i]) - b[i];
        acc += diff * diff;
    }
    return acc;
}

}  // namespace seprune::kernels
