// Compiled with -mavx2 (see src/CMakeLists.txt). Only reached through the
// dispatcher after a CPUID check. No FMA: results must match the scalar path
// bit for bit.

#include "rydnoise/simd/kernels.hpp"

#include <immintrin.h>

#include <cstddef>
#include <cstdint>

namespace rydnoise::simd::avx2 {

namespace {
constexpr int W = batch_width;
static_assert(W == 4, "AVX2 kernels assume four double lanes");

inline double* row_ptr(double* a, int r, int c, int n) {
  return a + (static_cast<std::size_t>(r) * n + c) * W;
}

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

inline double hsum_pairs(__m256d v) {
  alignas(32) double lanes[W];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}
}  // namespace

LaneFlags solve_batch(std::span<double> a_span, std::span<double> b_span, int n,
                      double pivot_tol) {
  double* a = a_span.data();
  double* b = b_span.data();

  __m256d scale = _mm256_setzero_pd();
  for (int i = 0; i < n * n; ++i) {
    const __m256d v = abs_pd(_mm256_loadu_pd(a + static_cast<std::size_t>(i) * W));
    scale = _mm256_blendv_pd(scale, v, _mm256_cmp_pd(v, scale, _CMP_GT_OQ));
  }
  const __m256d threshold = _mm256_mul_pd(_mm256_set1_pd(pivot_tol), scale);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d singular = _mm256_setzero_pd();

  for (int k = 0; k < n; ++k) {
    __m256d best = abs_pd(_mm256_loadu_pd(row_ptr(a, k, k, n)));
    __m256d piv = _mm256_set1_pd(static_cast<double>(k));
    for (int r = k + 1; r < n; ++r) {
      const __m256d v = abs_pd(_mm256_loadu_pd(row_ptr(a, r, k, n)));
      const __m256d gt = _mm256_cmp_pd(v, best, _CMP_GT_OQ);
      best = _mm256_blendv_pd(best, v, gt);
      piv = _mm256_blendv_pd(piv, _mm256_set1_pd(static_cast<double>(r)), gt);
    }

    // Lanes may pick different pivot rows; swap each distinct one under a mask.
    alignas(32) double piv_lanes[W];
    _mm256_store_pd(piv_lanes, piv);
    int done[W];
    int ndone = 0;
    for (int l = 0; l < W; ++l) {
      const int r = static_cast<int>(piv_lanes[l]);
      if (r == k) continue;
      bool seen = false;
      for (int j = 0; j < ndone; ++j) seen = seen || done[j] == r;
      if (seen) continue;
      done[ndone++] = r;
      const __m256d mask = _mm256_cmp_pd(piv, _mm256_set1_pd(static_cast<double>(r)), _CMP_EQ_OQ);
      for (int c = k; c < n; ++c) {
        double* pk = row_ptr(a, k, c, n);
        double* pr = row_ptr(a, r, c, n);
        const __m256d vk = _mm256_loadu_pd(pk);
        const __m256d vr = _mm256_loadu_pd(pr);
        _mm256_storeu_pd(pk, _mm256_blendv_pd(vk, vr, mask));
        _mm256_storeu_pd(pr, _mm256_blendv_pd(vr, vk, mask));
      }
      double* bk = b + static_cast<std::size_t>(k) * W;
      double* br = b + static_cast<std::size_t>(r) * W;
      const __m256d vk = _mm256_loadu_pd(bk);
      const __m256d vr = _mm256_loadu_pd(br);
      _mm256_storeu_pd(bk, _mm256_blendv_pd(vk, vr, mask));
      _mm256_storeu_pd(br, _mm256_blendv_pd(vr, vk, mask));
    }

    const __m256d bad = _mm256_cmp_pd(best, threshold, _CMP_NGT_UQ);
    singular = _mm256_or_pd(singular, bad);
    __m256d pivot = _mm256_blendv_pd(_mm256_loadu_pd(row_ptr(a, k, k, n)), one, bad);
    _mm256_storeu_pd(row_ptr(a, k, k, n), pivot);

    const __m256d bk = _mm256_loadu_pd(b + static_cast<std::size_t>(k) * W);
    for (int r = k + 1; r < n; ++r) {
      const __m256d f = _mm256_div_pd(_mm256_loadu_pd(row_ptr(a, r, k, n)), pivot);
      for (int c = k + 1; c < n; ++c) {
        double* prc = row_ptr(a, r, c, n);
        const __m256d akc = _mm256_loadu_pd(row_ptr(a, k, c, n));
        _mm256_storeu_pd(prc, _mm256_sub_pd(_mm256_loadu_pd(prc), _mm256_mul_pd(f, akc)));
      }
      double* br = b + static_cast<std::size_t>(r) * W;
      _mm256_storeu_pd(br, _mm256_sub_pd(_mm256_loadu_pd(br), _mm256_mul_pd(f, bk)));
    }
  }

  for (int k = n - 1; k >= 0; --k) {
    __m256d s = _mm256_loadu_pd(b + static_cast<std::size_t>(k) * W);
    for (int c = k + 1; c < n; ++c) {
      const __m256d xc = _mm256_loadu_pd(b + static_cast<std::size_t>(c) * W);
      s = _mm256_sub_pd(s, _mm256_mul_pd(_mm256_loadu_pd(row_ptr(a, k, c, n)), xc));
    }
    _mm256_storeu_pd(b + static_cast<std::size_t>(k) * W,
                     _mm256_div_pd(s, _mm256_loadu_pd(row_ptr(a, k, k, n))));
  }

  LaneFlags flags{};
  const int bits = _mm256_movemask_pd(singular);
  for (int l = 0; l < W; ++l) flags[l] = (bits >> l) & 1;
  return flags;
}

double weighted_product_sum(std::span<const double> w, std::span<const double> x,
                            std::span<const double> y) {
  const std::size_t n = w.size();
  const std::size_t body = n - n % W;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += W) {
    const __m256d wx = _mm256_mul_pd(_mm256_loadu_pd(w.data() + i), _mm256_loadu_pd(x.data() + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(wx, _mm256_loadu_pd(y.data() + i)));
  }
  double total = hsum_pairs(acc);
  for (std::size_t i = body; i < n; ++i) total = total + (w[i] * x[i]) * y[i];
  return total;
}

double pole_quadrature_sum(std::span<const double> w, std::span<const double> nu, double pole) {
  const std::size_t n = w.size();
  const std::size_t body = n - n % W;
  const __m256d p = _mm256_set1_pd(pole);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += W) {
    const __m256d v = _mm256_loadu_pd(nu.data() + i);
    const __m256d den = _mm256_mul_pd(_mm256_mul_pd(v, v), _mm256_add_pd(v, p));
    acc = _mm256_add_pd(acc, _mm256_div_pd(_mm256_loadu_pd(w.data() + i), den));
  }
  double total = hsum_pairs(acc);
  for (std::size_t i = body; i < n; ++i) {
    const double v = nu[i];
    total = total + w[i] / ((v * v) * (v + pole));
  }
  return total;
}

}  // namespace rydnoise::simd::avx2
