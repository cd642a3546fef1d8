#pragma once

// Dense arithmetic kernels used by the statistics, spectral and boosting code.
//
// Every kernel has a portable scalar reference implementation plus optional
// SIMD variants (AVX2 on x86-64, NEON on AArch64). The variant is picked once
// at first use from the host CPU; `TOXCONV_SIMD=scalar|avx2|neon|auto` in the
// environment overrides the choice. Elementwise kernels are bit-identical
// across variants; reductions agree to rounding.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace toxconv::kernels {

// Compressed sparse row matrix view. row_ptr has rows + 1 entries.
struct CsrView {
    std::span<const std::uint32_t> row_ptr;
    std::span<const std::uint32_t> col;
    std::span<const double> val;
    std::size_t rows() const { return row_ptr.empty() ? 0 : row_ptr.size() - 1; }
};

struct KernelTable {
    std::string_view name;
    double (*sum)(const double* x, std::size_t n);
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*sum_sq_dev)(const double* x, std::size_t n, double mean);
    double (*l1_dist)(const double* a, const double* b, std::size_t n);
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    void (*scale)(double alpha, double* x, std::size_t n);
    void (*sub)(const double* a, const double* b, double* out, std::size_t n);
    std::size_t (*count_greater)(const double* x, std::size_t n, double threshold);
    void (*spmv)(const std::uint32_t* row_ptr, const std::uint32_t* col, const double* val,
                 std::size_t rows, const double* x, double* y);
};

const KernelTable& scalar_table();
// nullptr when the variant is not compiled in or not supported by this CPU.
const KernelTable* avx2_table();
const KernelTable* neon_table();

// Every variant usable on this host, scalar first.
std::vector<const KernelTable*> available_tables();

// The dispatched table. Resolved once; thread-safe.
const KernelTable& active();

// Force a variant by name ("scalar", "avx2", "neon", "auto"). Returns false
// when the requested variant is unavailable; the active table is unchanged.
bool select(std::string_view name);

inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}

inline double sum_sq_dev(std::span<const double> x, double mean) {
    return active().sum_sq_dev(x.data(), x.size(), mean);
}

inline double l1_dist(std::span<const double> a, std::span<const double> b) {
    return active().l1_dist(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), x.size());
}

inline void scale(double alpha, std::span<double> x) { active().scale(alpha, x.data(), x.size()); }

inline void sub(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    active().sub(a.data(), b.data(), out.data(), a.size());
}

inline std::size_t count_greater(std::span<const double> x, double threshold) {
    return active().count_greater(x.data(), x.size(), threshold);
}

inline void spmv(const CsrView& m, std::span<const double> x, std::span<double> y) {
    active().spmv(m.row_ptr.data(), m.col.data(), m.val.data(), m.rows(), x.data(), y.data());
}

}  // namespace toxconv::kernels
