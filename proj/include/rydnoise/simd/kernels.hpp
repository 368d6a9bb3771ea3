#pragma once

// Data-parallel inner loops with a scalar reference implementation and an AVX2
// variant picked at runtime. Both variants perform the same floating-point
// operations in the same order, so their results are bit-identical; the
// equivalence tests rely on that.
//
// Batched routines use a structure-of-arrays layout with `batch_width` lanes:
// element (r, c) of lane l lives at a[(r * n + c) * batch_width + l].

#include <array>
#include <span>
#include <string_view>

namespace rydnoise::simd {

enum class Isa { scalar, avx2 };

inline constexpr int batch_width = 4;

// Best ISA supported by this CPU and build.
Isa detected_isa() noexcept;

// ISA used by the dispatching entry points. Initialized from detected_isa(),
// overridable with the RYDNOISE_ISA environment variable ("scalar" / "avx2").
Isa active_isa() noexcept;

// Throws std::invalid_argument if `isa` is not supported on this machine.
void set_active_isa(Isa isa);

std::string_view isa_name(Isa isa) noexcept;

using LaneFlags = std::array<int, batch_width>;

// Solves batch_width independent n x n systems A x = b by Gaussian elimination
// with partial pivoting. `a` (n*n*batch_width) is destroyed; `b` (n*batch_width)
// is overwritten with the solutions. A lane whose pivot magnitude falls below
// pivot_tol * max|A| is flagged in the return value; its solution is garbage.
LaneFlags solve_batch(std::span<double> a, std::span<double> b, int n, double pivot_tol);

// sum_i w[i] * x[i] * y[i]
double weighted_product_sum(std::span<const double> w, std::span<const double> x,
                            std::span<const double> y);

// sum_i w[i] / (nu[i]^2 * (nu[i] + pole))
double pole_quadrature_sum(std::span<const double> w, std::span<const double> nu, double pole);

namespace scalar {
LaneFlags solve_batch(std::span<double> a, std::span<double> b, int n, double pivot_tol);
double weighted_product_sum(std::span<const double> w, std::span<const double> x,
                            std::span<const double> y);
double pole_quadrature_sum(std::span<const double> w, std::span<const double> nu, double pole);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define RYDNOISE_HAVE_AVX2_KERNELS 1
namespace avx2 {
LaneFlags solve_batch(std::span<double> a, std::span<double> b, int n, double pivot_tol);
double weighted_product_sum(std::span<const double> w, std::span<const double> x,
                            std::span<const double> y);
double pole_quadrature_sum(std::span<const double> w, std::span<const double> nu, double pole);
}  // namespace avx2
#endif

}  // namespace rydnoise::simd
