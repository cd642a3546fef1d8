#pragma once

#include "toxconv/kernels.hpp"

namespace toxconv::kernels {

namespace scalar {
double sum(const double* x, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double sum_sq_dev(const double* x, std::size_t n, double mean);
double l1_dist(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
void sub(const double* a, const double* b, double* out, std::size_t n);
std::size_t count_greater(const double* x, std::size_t n, double threshold);
void spmv(const std::uint32_t* row_ptr, const std::uint32_t* col, const double* val,
          std::size_t rows, const double* x, double* y);
}  // namespace scalar

// Each returns nullptr when the variant was not compiled for this target.
const KernelTable* avx2_table_if_compiled();
const KernelTable* neon_table_if_compiled();

}  // namespace toxconv::kernels
