// Runtime selection of the packet-cycle kernel.

#include "coopamc/kernels/cycle_kernel.hpp"

namespace coopamc::kernels {

namespace {

struct Selection {
    CycleKernelFn fn;
    std::string name;
};

Selection pick() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2")) {
        return {&run_cycles_avx2, "avx2"};
    }
#endif
    return {&run_cycles_scalar, "scalar"};
}

const Selection& selection() {
    static const Selection s = pick();
    return s;
}

}  // namespace

CycleKernelFn select_cycle_kernel() { return selection().fn; }

const std::string& cycle_kernel_name() { return selection().name; }

}  // namespace coopamc::kernels
