#pragma once

// Data-parallel inner loops shared by the quadrature and the variational
// backend. Each kernel has a scalar reference implementation and an AVX2
// variant; the variant is picked once at runtime from CPUID and can be
// pinned with the LIOUVILLE_SIMD environment variable (scalar|avx2) or
// set_isa() in tests.

#include <cstddef>
#include <span>
#include <string_view>

namespace liouville::kernels {

enum class Isa { Scalar, Avx2 };

Isa active_isa();
bool avx2_available();
// Pins the implementation; requesting Avx2 on a CPU without it throws.
void set_isa(Isa isa);
std::string_view to_string(Isa isa);

// sum_i a_i * b_i
double dot(std::span<const double> a, std::span<const double> b);

// out_i = w_i * exp(x_i); returns sum_i out_i.
double exp_weighted(std::span<const double> w, std::span<const double> x, std::span<double> out);

// Graph Laplacian of a path with edge conductances k (size n-1):
//   y_i = k_{i-1} (x_i - x_{i-1}) + k_i (x_i - x_{i+1})
void laplacian_apply(std::span<const double> k, std::span<const double> x, std::span<double> y);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double exp_weighted(const double* w, const double* x, double* out, std::size_t n);
void laplacian_apply(const double* k, const double* x, double* y, std::size_t n);
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double exp_weighted(const double* w, const double* x, double* out, std::size_t n);
void laplacian_apply(const double* k, const double* x, double* y, std::size_t n);
// Vector exp on 4 lanes, exposed for the equivalence tests.
void exp4(const double* x, double* out);
}  // namespace avx2

}  // namespace liouville::kernels
