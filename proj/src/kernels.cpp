#include "liouville/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "liouville/error.hpp"

namespace liouville::kernels {

namespace {

Isa detect() {
  if (const char* env = std::getenv("LIOUVILLE_SIMD")) {
    const std::string v(env);
    if (v == "scalar" || v == "off") return Isa::Scalar;
  }
  return avx2_available() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

void check_sizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw Error(std::string(what) + ": size mismatch");
}

}  // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (isa == Isa::Avx2 && !avx2_available()) throw Error("AVX2 requested but not supported");
  current().store(isa, std::memory_order_relaxed);
}

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

double dot(std::span<const double> a, std::span<const double> b) {
  check_sizes(a.size(), b.size(), "dot");
  return active_isa() == Isa::Avx2 ? avx2::dot(a.data(), b.data(), a.size())
                                   : scalar::dot(a.data(), b.data(), a.size());
}

double exp_weighted(std::span<const double> w, std::span<const double> x, std::span<double> out) {
  check_sizes(w.size(), x.size(), "exp_weighted");
  check_sizes(w.size(), out.size(), "exp_weighted");
  return active_isa() == Isa::Avx2 ? avx2::exp_weighted(w.data(), x.data(), out.data(), w.size())
                                   : scalar::exp_weighted(w.data(), x.data(), out.data(), w.size());
}

void laplacian_apply(std::span<const double> k, std::span<const double> x, std::span<double> y) {
  check_sizes(x.size(), y.size(), "laplacian_apply");
  if (!x.empty()) check_sizes(k.size() + 1, x.size(), "laplacian_apply");
  if (active_isa() == Isa::Avx2) {
    avx2::laplacian_apply(k.data(), x.data(), y.data(), x.size());
  } else {
    scalar::laplacian_apply(k.data(), x.data(), y.data(), x.size());
  }
}

}  // namespace liouville::kernels
