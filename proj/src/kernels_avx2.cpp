#include "aronsson/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace aronsson::kern {

namespace {

#define AVX2_FN __attribute__((target("avx2")))

// Operand order mirrors the scalar reference (`if (v > m) m = v`): maxpd(v, m)
// keeps m on ties, so results are bit-identical for non-NaN data.

AVX2_FN void window_max_v(const double* src, double* out, std::size_t n, int w) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_loadu_pd(src + static_cast<long>(i) - w);
        for (int s = -w + 1; s <= w; ++s)
            acc = _mm256_max_pd(_mm256_loadu_pd(src + static_cast<long>(i) + s), acc);
        _mm256_storeu_pd(out + i, acc);
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

AVX2_FN void window_min_v(const double* src, double* out, std::size_t n, int w) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_loadu_pd(src + static_cast<long>(i) - w);
        for (int s = -w + 1; s <= w; ++s)
            acc = _mm256_min_pd(_mm256_loadu_pd(src + static_cast<long>(i) + s), acc);
        _mm256_storeu_pd(out + i, acc);
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

AVX2_FN void join_max_v(double* dst, const double* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(dst + i, _mm256_max_pd(_mm256_loadu_pd(src + i), _mm256_loadu_pd(dst + i)));
    for (; i < n; ++i)
        if (src[i] > dst[i]) dst[i] = src[i];
}

AVX2_FN void join_min_v(double* dst, const double* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(dst + i, _mm256_min_pd(_mm256_loadu_pd(src + i), _mm256_loadu_pd(dst + i)));
    for (; i < n; ++i)
        if (src[i] < dst[i]) dst[i] = src[i];
}

AVX2_FN void avg_shift_v(const double* a, const double* b, double shift, double* out,
                         std::size_t n) {
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d sh = _mm256_set1_pd(shift);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d s = _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_mul_pd(half, s), sh));
    }
    for (; i < n; ++i) out[i] = 0.5 * (a[i] + b[i]) - shift;
}

AVX2_FN void pow_scaled_v(const double* src, double inv_scale, long p, double* out,
                          std::size_t n) {
    const __m256d inv = _mm256_set1_pd(inv_scale);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d base = _mm256_mul_pd(_mm256_loadu_pd(src + i), inv);
        __m256d acc = _mm256_set1_pd(1.0);
        long e = p;
        while (e) {
            if (e & 1) acc = _mm256_mul_pd(acc, base);
            e >>= 1;
            if (e) base = _mm256_mul_pd(base, base);
        }
        _mm256_storeu_pd(out + i, acc);
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

AVX2_FN double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

AVX2_FN double dot_v(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

AVX2_FN double sum_v(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i];
    return s;
}

}  // namespace

bool avx2_supported() { return __builtin_cpu_supports("avx2"); }

const KernelTable& avx2_table() {
    static const KernelTable t{"avx2",      window_max_v, window_min_v, join_max_v, join_min_v,
                               avg_shift_v, pow_scaled_v, dot_v,        sum_v};
    return t;
}

}  // namespace aronsson::kern

#endif  // x86_64
