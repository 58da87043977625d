#include <cmath>

#include "liouville/kernels.hpp"

namespace liouville::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double exp_weighted(const double* w, const double* x, double* out, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = w[i] * std::exp(x[i]);
    acc += out[i];
  }
  return acc;
}

void laplacian_apply(const double* k, const double* x, double* y, std::size_t n) {
  if (n == 0) return;
  if (n == 1) {
    y[0] = 0.0;
    return;
  }
  y[0] = k[0] * (x[0] - x[1]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    y[i] = k[i - 1] * (x[i] - x[i - 1]) + k[i] * (x[i] - x[i + 1]);
  }
  y[n - 1] = k[n - 2] * (x[n - 1] - x[n - 2]);
}

}  // namespace liouville::kernels::scalar
