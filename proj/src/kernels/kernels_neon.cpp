// NEON variants for AArch64, where Advanced SIMD is part of the baseline ISA.

#include "kernels_impl.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace toxconv::kernels {

#if defined(__aarch64__)

namespace neon {

static double sum(const double* x, std::size_t n) {
    float64x2_t a0 = vdupq_n_f64(0.0);
    float64x2_t a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 = vaddq_f64(a0, vld1q_f64(x + i));
        a1 = vaddq_f64(a1, vld1q_f64(x + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(a0, a1));
    for (; i < n; ++i) s += x[i];
    return s;
}

static double dot(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

static double sum_sq_dev(const double* x, std::size_t n, double mean) {
    const float64x2_t m = vdupq_n_f64(mean);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(x + i), m);
        acc = vfmaq_f64(acc, d, d);
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double d = x[i] - mean;
        s += d * d;
    }
    return s;
}

static double l1_dist(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
    return s;
}

static void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t a = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vaddq_f64(vmulq_f64(a, vld1q_f64(x + i)), vld1q_f64(y + i)));
    for (; i < n; ++i) y[i] = alpha * x[i] + y[i];
}

static void scale(double alpha, double* x, std::size_t n) {
    const float64x2_t a = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(a, vld1q_f64(x + i)));
    for (; i < n; ++i) x[i] *= alpha;
}

static void sub(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    for (; i < n; ++i) out[i] = a[i] - b[i];
}

static std::size_t count_greater(const double* x, std::size_t n, double threshold) {
    const float64x2_t t = vdupq_n_f64(threshold);
    uint64x2_t acc = vdupq_n_u64(0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vsubq_u64(acc, vcgtq_f64(vld1q_f64(x + i), t));
    std::size_t c = vgetq_lane_u64(acc, 0) + vgetq_lane_u64(acc, 1);
    for (; i < n; ++i) c += x[i] > threshold ? 1 : 0;
    return c;
}

static void spmv(const std::uint32_t* row_ptr, const std::uint32_t* col, const double* val,
                 std::size_t rows, const double* x, double* y) {
    for (std::size_t r = 0; r < rows; ++r) {
        std::uint32_t k = row_ptr[r];
        const std::uint32_t end = row_ptr[r + 1];
        float64x2_t acc = vdupq_n_f64(0.0);
        for (; k + 2 <= end; k += 2) {
            const double g[2] = {x[col[k]], x[col[k + 1]]};
            acc = vfmaq_f64(acc, vld1q_f64(val + k), vld1q_f64(g));
        }
        double s = vaddvq_f64(acc);
        for (; k < end; ++k) s += val[k] * x[col[k]];
        y[r] = s;
    }
}

}  // namespace neon

const KernelTable* neon_table_if_compiled() {
    static const KernelTable table{
        "neon",        neon::sum,   neon::dot, neon::sum_sq_dev,    neon::l1_dist,
        neon::axpy,    neon::scale, neon::sub, neon::count_greater, neon::spmv,
    };
    return &table;
}

#else

const KernelTable* neon_table_if_compiled() { return nullptr; }

#endif

}  // namespace toxconv::kernels
