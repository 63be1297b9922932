#include <cstdlib>
#include <string_view>

#include "kschemo/kernels/kernels.hpp"

namespace kschemo::kernels {

#if defined(KSCHEMO_WITH_AVX2)
const KernelSet& avx2_kernel_table();
#endif

const KernelSet* avx2_kernels() {
#if defined(KSCHEMO_WITH_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &avx2_kernel_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelSet& default_kernels() {
    static const KernelSet& chosen = [] () -> const KernelSet& {
        const char* env = std::getenv("KSCHEMO_KERNELS");
        if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
        if (const KernelSet* vec = avx2_kernels()) return *vec;
        return scalar_kernels();
    }();
    return chosen;
}

}  // namespace kschemo::kernels
