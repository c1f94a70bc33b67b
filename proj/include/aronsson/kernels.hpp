#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace aronsson::kern {

/// Hot inner loops of the solvers, provided as a scalar reference
/// implementation plus SIMD variants selected at runtime. All variants are
/// equivalence-tested against the scalar reference: window/join/avg/pow
/// kernels match bit-for-bit (identical per-element operation sequence),
/// sum/dot reductions match to rounding.
struct KernelTable {
    const char* name;

    /// out[i] = max(src[i-w .. i+w]); the caller guarantees src is readable
    /// on [-w, n+w).
    void (*window_max)(const double* src, double* out, std::size_t n, int w);
    void (*window_min)(const double* src, double* out, std::size_t n, int w);

    /// dst[i] = max/min(dst[i], src[i])
    void (*join_max)(double* dst, const double* src, std::size_t n);
    void (*join_min)(double* dst, const double* src, std::size_t n);

    /// out[i] = 0.5*(a[i]+b[i]) - shift
    void (*avg_shift)(const double* a, const double* b, double shift, double* out, std::size_t n);

    /// out[i] = (src[i]*inv_scale)^p for integer p >= 0 (binary exponentiation)
    void (*pow_scaled)(const double* src, double inv_scale, long p, double* out, std::size_t n);

    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*sum)(const double* a, std::size_t n);
};

const KernelTable& scalar_table();

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_supported();
const KernelTable& avx2_table();
#endif
#if defined(__aarch64__)
const KernelTable& neon_table();
#endif

/// Every table usable on this machine (scalar first).
std::vector<const KernelTable*> supported_tables();

/// The runtime-selected table: best supported ISA, overridable with
/// set_kernel_override or the ARONSSON_KERNELS environment variable
/// ("auto" | "scalar" | "avx2" | "neon").
const KernelTable& active_table();
void set_kernel_override(const std::string& name);

}  // namespace aronsson::kern
