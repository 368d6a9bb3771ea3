#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "rydnoise/simd/kernels.hpp"

namespace rydnoise::simd {

namespace {

Isa initial_isa() noexcept {
  const Isa best = detected_isa();
  if (const char* env = std::getenv("RYDNOISE_ISA")) {
    const std::string want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && best == Isa::avx2) return Isa::avx2;
  }
  return best;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

Isa detected_isa() noexcept {
#if defined(RYDNOISE_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
  return Isa::scalar;
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2) {
    throw std::invalid_argument("AVX2 kernels are not supported on this CPU");
  }
  current().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

LaneFlags solve_batch(std::span<double> a, std::span<double> b, int n, double pivot_tol) {
#ifdef RYDNOISE_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::avx2) return avx2::solve_batch(a, b, n, pivot_tol);
#endif
  return scalar::solve_batch(a, b, n, pivot_tol);
}

double weighted_product_sum(std::span<const double> w, std::span<const double> x,
                            std::span<const double> y) {
#ifdef RYDNOISE_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::avx2) return avx2::weighted_product_sum(w, x, y);
#endif
  return scalar::weighted_product_sum(w, x, y);
}

double pole_quadrature_sum(std::span<const double> w, std::span<const double> nu, double pole) {
#ifdef RYDNOISE_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::avx2) return avx2::pole_quadrature_sum(w, nu, pole);
#endif
  return scalar::pole_quadrature_sum(w, nu, pole);
}

}  // namespace rydnoise::simd
