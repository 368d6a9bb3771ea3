#include "rydnoise/simd/kernels.hpp"

#include <cmath>
#include <cstddef>

namespace rydnoise::simd::scalar {

namespace {
constexpr int W = batch_width;
inline std::size_t at(int r, int c, int n, int lane) {
  return (static_cast<std::size_t>(r) * n + c) * W + lane;
}
}  // namespace

LaneFlags solve_batch(std::span<double> a, std::span<double> b, int n, double pivot_tol) {
  LaneFlags singular{};
  for (int lane = 0; lane < W; ++lane) {
    double scale = 0.0;
    for (int i = 0; i < n * n; ++i) {
      const double v = std::fabs(a[static_cast<std::size_t>(i) * W + lane]);
      if (v > scale) scale = v;
    }
    const double threshold = pivot_tol * scale;

    for (int k = 0; k < n; ++k) {
      int piv = k;
      double best = std::fabs(a[at(k, k, n, lane)]);
      for (int r = k + 1; r < n; ++r) {
        const double v = std::fabs(a[at(r, k, n, lane)]);
        if (v > best) {
          best = v;
          piv = r;
        }
      }
      if (piv != k) {
        for (int c = k; c < n; ++c) std::swap(a[at(k, c, n, lane)], a[at(piv, c, n, lane)]);
        std::swap(b[static_cast<std::size_t>(k) * W + lane],
                  b[static_cast<std::size_t>(piv) * W + lane]);
      }
      if (!(best > threshold)) {
        singular[lane] = 1;
        a[at(k, k, n, lane)] = 1.0;
      }
      const double pivot = a[at(k, k, n, lane)];
      const double bk = b[static_cast<std::size_t>(k) * W + lane];
      for (int r = k + 1; r < n; ++r) {
        const double f = a[at(r, k, n, lane)] / pivot;
        for (int c = k + 1; c < n; ++c) {
          a[at(r, c, n, lane)] = a[at(r, c, n, lane)] - f * a[at(k, c, n, lane)];
        }
        double& br = b[static_cast<std::size_t>(r) * W + lane];
        br = br - f * bk;
      }
    }

    for (int k = n - 1; k >= 0; --k) {
      double s = b[static_cast<std::size_t>(k) * W + lane];
      for (int c = k + 1; c < n; ++c) {
        s = s - a[at(k, c, n, lane)] * b[static_cast<std::size_t>(c) * W + lane];
      }
      b[static_cast<std::size_t>(k) * W + lane] = s / a[at(k, k, n, lane)];
    }
  }
  return singular;
}

// The reductions keep four interleaved partial sums and combine them as
// (s0 + s1) + (s2 + s3) before adding the tail, mirroring the vector lanes.

double weighted_product_sum(std::span<const double> w, std::span<const double> x,
                            std::span<const double> y) {
  const std::size_t n = w.size();
  const std::size_t body = n - n % W;
  double acc[W] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < body; i += W) {
    for (int l = 0; l < W; ++l) acc[l] = acc[l] + (w[i + l] * x[i + l]) * y[i + l];
  }
  double total = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (std::size_t i = body; i < n; ++i) total = total + (w[i] * x[i]) * y[i];
  return total;
}

double pole_quadrature_sum(std::span<const double> w, std::span<const double> nu, double pole) {
  const std::size_t n = w.size();
  const std::size_t body = n - n % W;
  double acc[W] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < body; i += W) {
    for (int l = 0; l < W; ++l) {
      const double v = nu[i + l];
      acc[l] = acc[l] + w[i + l] / ((v * v) * (v + pole));
    }
  }
  double total = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (std::size_t i = body; i < n; ++i) {
    const double v = nu[i];
    total = total + w[i] / ((v * v) * (v + pole));
  }
  return total;
}

}  // namespace rydnoise::simd::scalar
