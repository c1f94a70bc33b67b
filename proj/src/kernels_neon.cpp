#include "aronsson/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace aronsson::kern {

namespace {

void window_max_v(const double* src, double* out, std::size_t n, int w) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t acc = vld1q_f64(src + static_cast<long>(i) - w);
        for (int s = -w + 1; s <= w; ++s)
            acc = vmaxq_f64(vld1q_f64(src + static_cast<long>(i) + s), acc);
        vst1q_f64(out + i, acc);
    }
    for (; i < n; ++i) {
        double m = src[static_cast<long>(i) - w];
        for (int s = -w + 1; s <= w; ++s) {
            double v = src[static_cast<long>(i) + s];
            if (v > m) m = v;
        }
        out[i] = m;
    }
}

void window_min_v(const double* src, double* out, std::size_t n, int w) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t acc = vld1q_f64(src + static_cast<long>(i) - w);
        for (int s = -w + 1; s <= w; ++s)
            acc = vminq_f64(vld1q_f64(src + static_cast<long>(i) + s), acc);
        vst1q_f64(out + i, acc);
    }
    for (; i < n; ++i) {
        double m = src[static_cast<long>(i) - w];
        for (int s = -w + 1; s <= w; ++s) {
            double v = src[static_cast<long>(i) + s];
            if (v < m) m = v;
        }
        out[i] = m;
    }
}

void join_max_v(double* dst, const double* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(dst + i, vmaxq_f64(vld1q_f64(src + i), vld1q_f64(dst + i)));
    for (; i < n; ++i)
        if (src[i] > dst[i]) dst[i] = src[i];
}

void join_min_v(double* dst, const double* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(dst + i, vminq_f64(vld1q_f64(src + i), vld1q_f64(dst + i)));
    for (; i < n; ++i)
        if (src[i] < dst[i]) dst[i] = src[i];
}

void avg_shift_v(const double* a, const double* b, double shift, double* out, std::size_t n) {
    const float64x2_t half = vdupq_n_f64(0.5);
    const float64x2_t sh = vdupq_n_f64(shift);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t s = vaddq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        vst1q_f64(out + i, vsubq_f64(vmulq_f64(half, s), sh));
    }
    for (; i < n; ++i) out[i] = 0.5 * (a[i] + b[i]) - shift;
}

void pow_scaled_v(const double* src, double inv_scale, long p, double* out, std::size_t n) {
    const float64x2_t inv = vdupq_n_f64(inv_scale);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t base = vmulq_f64(vld1q_f64(src + i), inv);
        float64x2_t acc = vdupq_n_f64(1.0);
        long e = p;
        while (e) {
            if (e & 1) acc = vmulq_f64(acc, base);
            e >>= 1;
            if (e) base = vmulq_f64(base, base);
        }
        vst1q_f64(out + i, acc);
    }
    for (; i < n; ++i) {
        double base = src[i] * inv_scale;
        double acc = 1.0;
        long e = p;
        while (e) {
            if (e & 1) acc *= base;
            e >>= 1;
            if (e) base *= base;
        }
        out[i] = acc;
    }
}

double dot_v(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double sum_v(const double* a, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(a + i));
    double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; i < n; ++i) s += a[i];
    return s;
}

}  // namespace

const KernelTable& neon_table() {
    static const KernelTable t{"neon",      window_max_v, window_min_v, join_max_v, join_min_v,
                               avg_shift_v, pow_scaled_v, dot_v,        sum_v};
    return t;
}

}  // namespace aronsson::kern

#endif  // aarch64
