#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "liouville/kernels.hpp"

using namespace liouville::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("vector exp matches std::exp") {
  if (!avx2_available()) return;
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 2000; ++rep) {
    const std::vector<double> x = random_vector(rng, 4, -700.0, 700.0);
    double out[4];
    avx2::exp4(x.data(), out);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(out[k] / std::exp(x[k]) - 1.0) < 1e-14);
  }
  const double edge[4] = {-800.0, 0.0, -1e-300, 1e-12};
  double out[4];
  avx2::exp4(edge, out);
  CHECK(out[0] == 0.0);
  CHECK(out[1] == 1.0);
  CHECK(out[2] == 1.0);
  CHECK(out[3] == doctest::Approx(1.0 + 1e-12).epsilon(1e-15));
}

TEST_CASE("scalar and AVX2 kernels agree") {
  if (!avx2_available()) return;
  std::mt19937_64 rng(11);
  for (std::size_t n : {0ul, 1ul, 3ul, 4ul, 5ul, 17ul, 1000ul, 4099ul}) {
    const std::vector<double> a = random_vector(rng, n, -3.0, 3.0);
    const std::vector<double> b = random_vector(rng, n, -3.0, 3.0);
    const std::vector<double> w = random_vector(rng, n, 0.0, 2.0);
    const std::vector<double> x = random_vector(rng, n, -50.0, 50.0);

    const double ds = scalar::dot(a.data(), b.data(), n);
    const double dv = avx2::dot(a.data(), b.data(), n);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale += std::abs(a[i] * b[i]);
    CHECK(std::abs(ds - dv) <= 1e-14 * (scale + 1.0));

    std::vector<double> os(n), ov(n);
    const double ss = scalar::exp_weighted(w.data(), x.data(), os.data(), n);
    const double sv = avx2::exp_weighted(w.data(), x.data(), ov.data(), n);
    CHECK(std::abs(ss - sv) <= 1e-13 * ss);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(os[i] - ov[i]) <= 1e-14 * os[i]);

    if (n >= 2) {
      const std::vector<double> k = random_vector(rng, n - 1, 0.1, 5.0);
      std::vector<double> ys(n), yv(n);
      scalar::laplacian_apply(k.data(), a.data(), ys.data(), n);
      avx2::laplacian_apply(k.data(), a.data(), yv.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ys[i] - yv[i]) <= 1e-13 * (std::abs(ys[i]) + 1.0));
    }
  }
}

TEST_CASE("dispatch follows the pinned implementation") {
  std::vector<double> a{1, 2, 3, 4, 5}, b{5, 4, 3, 2, 1};
  set_isa(Isa::Scalar);
  CHECK(active_isa() == Isa::Scalar);
  CHECK(dot(a, b) == 35.0);
  if (avx2_available()) {
    set_isa(Isa::Avx2);
    CHECK(active_isa() == Isa::Avx2);
    CHECK(dot(a, b) == 35.0);
  } else {
    CHECK_THROWS(set_isa(Isa::Avx2));
  }
}

TEST_CASE("laplacian of a constant vanishes") {
  const std::vector<double> k{1.0, 2.0, 3.0};
  const std::vector<double> x(4, 2.5);
  std::vector<double> y(4);
  laplacian_apply(k, x, y);
  for (double v : y) CHECK(v == 0.0);
}
