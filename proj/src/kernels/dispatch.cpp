#include "powmix/kernels/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace powmix::kernels {

extern const Ops kScalarOps;
extern const Ops kFmaOps;
#ifdef POWMIX_HAVE_AVX2
extern const Ops kAvx2Ops;
#endif

namespace {

bool fma_supported() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("fma");
#else
    return true; // fused multiply-add is baseline outside x86
#endif
}

bool avx2_supported() {
#ifdef POWMIX_HAVE_AVX2
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Ops* lookup(const std::string& n) {
    if (n == "scalar") return &kScalarOps;
    if (n == "fma" && fma_supported()) return &kFmaOps;
#ifdef POWMIX_HAVE_AVX2
    if (n == "avx2" && avx2_supported()) return &kAvx2Ops;
#endif
    return nullptr;
}

} // namespace

const Ops* by_name(const std::string& n) { return lookup(n); }

std::vector<std::string> available() {
    std::vector<std::string> out{"scalar"};
    if (fma_supported()) out.push_back("fma");
    if (avx2_supported()) out.push_back("avx2");
    return out;
}

const Ops& active() {
    const char* env = std::getenv("POWMIX_KERNELS");
    std::string want = env ? env : "auto";
    if (want != "auto") {
        const Ops* ops = lookup(want);
        if (!ops) throw std::runtime_error("kernel backend not available: " + want);
        return *ops;
    }
    if (avx2_supported()) {
#ifdef POWMIX_HAVE_AVX2
        return kAvx2Ops;
#endif
    }
    if (fma_supported()) return kFmaOps;
    return kScalarOps;
}

} // namespace powmix::kernels
