#include "rootb/kernels.hpp"

namespace rootb::kern {

const Kernels& active() {
#if defined(ROOTB_HAVE_AVX2_TU)
    static const Kernels& chosen = cpu_has_avx2() ? avx2() : scalar();
#elif defined(ROOTB_HAVE_NEON_TU)
    static const Kernels& chosen = neon();
#else
    static const Kernels& chosen = scalar();
#endif
    return chosen;
}

} // namespace rootb::kern
