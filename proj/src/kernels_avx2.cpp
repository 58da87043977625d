#include "liouville/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define LIOUVILLE_X86 1
#else
#define LIOUVILLE_X86 0
#endif

#include <cmath>

namespace liouville::kernels::avx2 {

#if LIOUVILLE_X86

#define AVX2_FN __attribute__((target("avx2,fma")))

namespace {

AVX2_FN inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// 2^k for integral k in [-1022, 1023] stored as doubles.
AVX2_FN inline __m256d pow2i(__m256d k) {
  const __m256d magic = _mm256_set1_pd(4503599627370496.0 + 1023.0);  // 2^52 + bias
  const __m256i bits = _mm256_castpd_si256(_mm256_add_pd(k, magic));
  return _mm256_castsi256_pd(_mm256_slli_epi64(bits, 52));
}

// Cody-Waite reduction x = k ln2 + r, |r| <= ln2/2, then a degree-13 Taylor
// polynomial; the scale 2^k is split in two factors so subnormal results
// are produced instead of flushed.
AVX2_FN inline __m256d exp_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  const __m256d hi_cut = _mm256_set1_pd(709.782712893384);
  const __m256d lo_cut = _mm256_set1_pd(-745.1332191019412);

  const __m256d xc = _mm256_max_pd(_mm256_min_pd(x, hi_cut), lo_cut);
  const __m256d k =
      _mm256_round_pd(_mm256_mul_pd(xc, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, ln2_hi, xc);
  r = _mm256_fnmadd_pd(k, ln2_lo, r);

  static constexpr double c[] = {
      1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
      1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
      1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        0.5,
      1.0,                1.0};
  __m256d p = _mm256_set1_pd(c[0]);
  for (int i = 1; i < 14; ++i) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(c[i]));

  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d k1 = _mm256_round_pd(_mm256_mul_pd(k, half), _MM_FROUND_TO_ZERO | _MM_FROUND_NO_EXC);
  const __m256d k2 = _mm256_sub_pd(k, k1);
  __m256d y = _mm256_mul_pd(_mm256_mul_pd(p, pow2i(k1)), pow2i(k2));

  const __m256d inf = _mm256_set1_pd(HUGE_VAL);
  y = _mm256_blendv_pd(y, inf, _mm256_cmp_pd(x, hi_cut, _CMP_GT_OQ));
  y = _mm256_blendv_pd(y, _mm256_setzero_pd(), _mm256_cmp_pd(x, lo_cut, _CMP_LT_OQ));
  y = _mm256_blendv_pd(y, x, _mm256_cmp_pd(x, x, _CMP_UNORD_Q));
  return y;
}

}  // namespace

AVX2_FN double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

AVX2_FN void exp4(const double* x, double* out) {
  _mm256_storeu_pd(out, exp_pd(_mm256_loadu_pd(x)));
}

AVX2_FN double exp_weighted(const double* w, const double* x, double* out, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_mul_pd(_mm256_loadu_pd(w + i), exp_pd(_mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(out + i, v);
    acc = _mm256_add_pd(acc, v);
  }
  double total = hsum(acc);
  if (i < n) {
    double xs[4] = {0.0, 0.0, 0.0, 0.0};
    double ys[4];
    for (std::size_t j = i; j < n; ++j) xs[j - i] = x[j];
    _mm256_storeu_pd(ys, exp_pd(_mm256_loadu_pd(xs)));
    for (std::size_t j = i; j < n; ++j) {
      out[j] = w[j] * ys[j - i];
      total += out[j];
    }
  }
  return total;
}

AVX2_FN void laplacian_apply(const double* k, const double* x, double* y, std::size_t n) {
  if (n < 2) {
    if (n == 1) y[0] = 0.0;
    return;
  }
  y[0] = k[0] * (x[0] - x[1]);
  std::size_t i = 1;
  for (; i + 4 < n; i += 4) {
    const __m256d xm = _mm256_loadu_pd(x + i - 1);
    const __m256d xc = _mm256_loadu_pd(x + i);
    const __m256d xp = _mm256_loadu_pd(x + i + 1);
    const __m256d kl = _mm256_loadu_pd(k + i - 1);
    const __m256d kr = _mm256_loadu_pd(k + i);
    const __m256d v = _mm256_fmadd_pd(kl, _mm256_sub_pd(xc, xm), _mm256_mul_pd(kr, _mm256_sub_pd(xc, xp)));
    _mm256_storeu_pd(y + i, v);
  }
  for (; i + 1 < n; ++i) y[i] = k[i - 1] * (x[i] - x[i - 1]) + k[i] * (x[i] - x[i + 1]);
  y[n - 1] = k[n - 2] * (x[n - 1] - x[n - 2]);
}

#else  // non-x86 builds fall back to the reference loops

double dot(const double* a, const double* b, std::size_t n) { return scalar::dot(a, b, n); }
double exp_weighted(const double* w, const double* x, double* out, std::size_t n) {
  return scalar::exp_weighted(w, x, out, n);
}
void laplacian_apply(const double* k, const double* x, double* y, std::size_t n) {
  scalar::laplacian_apply(k, x, y, n);
}
void exp4(const double* x, double* out) {
  for (int i = 0; i < 4; ++i) out[i] = std::exp(x[i]);
}

#endif

}  // namespace liouville::kernels::avx2
