#include "aronsson/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace aronsson::kern {

namespace {

std::string& override_name() {
    static std::string name = "auto";
    return name;
}

const KernelTable* pick(const std::string& want) {
    if (want == "scalar") return &scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
    if (want == "avx2") {
        if (!avx2_supported()) throw std::runtime_error("AVX2 kernels requested but unsupported");
        return &avx2_table();
    }
#endif
#if defined(__aarch64__)
    if (want == "neon") return &neon_table();
#endif
    if (want == "auto") {
#if defined(__x86_64__) || defined(_M_X64)
        if (avx2_supported()) return &avx2_table();
#endif
#if defined(__aarch64__)
        return &neon_table();
#endif
        return &scalar_table();
    }
    throw std::runtime_error("unknown kernel set '" + want + "'");
}

}  // namespace

std::vector<const KernelTable*> supported_tables() {
    std::vector<const KernelTable*> out{&scalar_table()};
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_supported()) out.push_back(&avx2_table());
#endif
#if defined(__aarch64__)
    out.push_back(&neon_table());
#endif
    return out;
}

void set_kernel_override(const std::string& name) {
    pick(name);  // validate
    override_name() = name;
}

const KernelTable& active_table() {
    std::string want = override_name();
    if (want == "auto") {
        if (const char* env = std::getenv("ARONSSON_KERNELS")) want = env;
    }
    return *pick(want);
}

}  // namespace aronsson::kern
