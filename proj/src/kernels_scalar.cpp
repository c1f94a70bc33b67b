#include "aronsson/kernels.hpp"

namespace aronsson::kern {

namespace {

void window_max_s(const double* src, double* out, std::size_t n, int w) {
    for (std::size_t i = 0; i < n; ++i) {
        double m = src[static_cast<long>(i) - w];
        for (int s = -w + 1; s <= w; ++s) {
            double v = src[static_cast<long>(i) + s];
            if (v > m) m = v;
        }
        out[i] = m;
    }
}

void window_min_s(const double* src, double* out, std::size_t n, int w) {
    for (std::size_t i = 0; i < n; ++i) {
        double m = src[static_cast<long>(i) - w];
        for (int s = -w + 1; s <= w; ++s) {
            double v = src[static_cast<long>(i) + s];
            if (v < m) m = v;
        }
        out[i] = m;
    }
}

void join_max_s(double* dst, const double* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (src[i] > dst[i]) dst[i] = src[i];
}

void join_min_s(double* dst, const double* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (src[i] < dst[i]) dst[i] = src[i];
}

void avg_shift_s(const double* a, const double* b, double shift, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = 0.5 * (a[i] + b[i]) - shift;
}

void pow_scaled_s(const double* src, double inv_scale, long p, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
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

double dot_s(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double sum_s(const double* a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i];
    return s;
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable t{"scalar",   window_max_s, window_min_s, join_max_s, join_min_s,
                               avg_shift_s, pow_scaled_s, dot_s,        sum_s};
    return t;
}

}  // namespace aronsson::kern
