#include "kernels_impl.hpp"

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <string>

namespace toxconv::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

std::atomic<const KernelTable*> g_active{nullptr};
std::mutex g_mutex;

const KernelTable* by_name(std::string_view name) {
    if (name == "scalar") return &scalar_table();
    if (name == "avx2") return avx2_table();
    if (name == "neon") return neon_table();
    if (name == "auto" || name.empty()) {
        if (auto* t = avx2_table()) return t;
        if (auto* t = neon_table()) return t;
        return &scalar_table();
    }
    return nullptr;
}

const KernelTable* resolve_default() {
    const char* env = std::getenv("TOXCONV_SIMD");
    if (env != nullptr) {
        if (auto* t = by_name(env)) return t;
    }
    return by_name("auto");
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{
        "scalar",      scalar::sum,   scalar::dot, scalar::sum_sq_dev,    scalar::l1_dist,
        scalar::axpy,  scalar::scale, scalar::sub, scalar::count_greater, scalar::spmv,
    };
    return table;
}

const KernelTable* avx2_table() {
    static const bool supported = cpu_has_avx2();
    return supported ? avx2_table_if_compiled() : nullptr;
}

const KernelTable* neon_table() { return neon_table_if_compiled(); }

std::vector<const KernelTable*> available_tables() {
    std::vector<const KernelTable*> out{&scalar_table()};
    if (auto* t = avx2_table()) out.push_back(t);
    if (auto* t = neon_table()) out.push_back(t);
    return out;
}

const KernelTable& active() {
    const KernelTable* t = g_active.load(std::memory_order_acquire);
    if (t != nullptr) return *t;
    std::lock_guard lock(g_mutex);
    t = g_active.load(std::memory_order_relaxed);
    if (t == nullptr) {
        t = resolve_default();
        g_active.store(t, std::memory_order_release);
    }
    return *t;
}

bool select(std::string_view name) {
    const KernelTable* t = by_name(name);
    if (t == nullptr) return false;
    std::lock_guard lock(g_mutex);
    g_active.store(t, std::memory_order_release);
    return true;
}

}  // namespace toxconv::kernels
