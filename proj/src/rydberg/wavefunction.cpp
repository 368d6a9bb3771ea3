#include "rydnoise/rydberg/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rydnoise/error.hpp"
#include "rydnoise/simd/kernels.hpp"

namespace rydnoise::rydberg {

RadialWavefunction::RadialWavefunction(double step, long first_index, std::vector<double> w)
    : step_(step), first_(first_index), w_(std::move(w)) {}

double RadialWavefunction::u_at(double r_a0) const {
  if (r_a0 <= 0.0) return 0.0;
  const double xr = std::sqrt(r_a0);
  const double kf = xr / step_;
  const long k0 = static_cast<long>(std::floor(kf));
  if (k0 < first_ || k0 + 1 > last_index()) return 0.0;
  const double t = kf - static_cast<double>(k0);
  const double wv = (1.0 - t) * w(k0) + t * w(k0 + 1);
  return std::sqrt(xr) * wv;
}

namespace {

// Trapezoid weights times 2 x^p over lattice indices [k0, k1].
std::vector<double> moment_weights(double h, long k0, long k1, int power) {
  std::vector<double> wt(static_cast<std::size_t>(k1 - k0 + 1));
  for (long k = k0; k <= k1; ++k) {
    const double x = h * static_cast<double>(k);
    double trap = h;
    if (k == k0 || k == k1) trap = 0.5 * h;
    wt[static_cast<std::size_t>(k - k0)] = 2.0 * std::pow(x, power) * trap;
  }
  return wt;
}

}  // namespace

RadialWavefunction solve_coulomb_radial(double n_eff, int l, double inner_radius_a0,
                                        const RadialGrid& grid) {
  if (!(n_eff > 0.0) || l < 0) throw std::invalid_argument("invalid radial quantum numbers");
  if (!(grid.step > 0.0)) throw std::invalid_argument("radial grid step must be positive");
  const double h = grid.step;
  const double ll = static_cast<double>(l) * (l + 1);
  const double disc = std::max(0.0, 1.0 - ll / (n_eff * n_eff));
  const double r_outer_tp = n_eff * n_eff * (1.0 + std::sqrt(disc));
  const double r_inner_tp = n_eff * n_eff * (1.0 - std::sqrt(disc));
  const double r_out = grid.outer_turning_factor * r_outer_tp + grid.outer_decay_lengths * n_eff;

  const long k_out = static_cast<long>(std::ceil(std::sqrt(r_out) / h));
  const long k_in = std::max(1L, static_cast<long>(std::ceil(std::sqrt(inner_radius_a0) / h)));
  if (k_out - k_in < 4) throw NumericalError("radial grid too coarse for this state");

  const double centrifugal = (2.0 * l + 0.5) * (2.0 * l + 1.5);
  const double inv_n2 = 1.0 / (n_eff * n_eff);
  auto g = [&](long k) {
    const double x = h * static_cast<double>(k);
    const double x2 = x * x;
    return centrifugal / x2 - 8.0 + 4.0 * x2 * inv_n2;
  };
  const double h2_12 = h * h / 12.0;

  const std::size_t count = static_cast<std::size_t>(k_out - k_in + 1);
  std::vector<double> w(count, 0.0);
  auto at = [&](long k) -> double& { return w[static_cast<std::size_t>(k - k_in)]; };

  at(k_out) = 1e-30;
  at(k_out - 1) = 1e-30 * std::exp(h * std::sqrt(std::max(g(k_out), 0.0)));
  double f_next = 1.0 - h2_12 * g(k_out);
  double f_cur = 1.0 - h2_12 * g(k_out - 1);
  for (long k = k_out - 1; k > k_in; --k) {
    const double f_prev = 1.0 - h2_12 * g(k - 1);
    at(k - 1) = ((12.0 - 10.0 * f_cur) * at(k) - f_next * at(k + 1)) / f_prev;
    if (std::fabs(at(k - 1)) > 1e200) {
      for (long j = k - 1; j <= k_out; ++j) at(j) *= 1e-200;
    }
    f_next = f_cur;
    f_cur = f_prev;
  }

  // Inside the inner turning point the inward solution picks up the irregular
  // (growing toward r = 0) component; cut at the minimum of |u| there.
  if (l > 0) {
    const long k_tp = std::min(k_out, static_cast<long>(std::floor(std::sqrt(r_inner_tp) / h)));
    if (k_tp > k_in) {
      long k_min = k_tp;
      double u_min = std::fabs(std::sqrt(h * k_tp) * at(k_tp));
      for (long k = k_tp - 1; k >= k_in; --k) {
        const double u = std::fabs(std::sqrt(h * static_cast<double>(k)) * at(k));
        if (u < u_min) {
          u_min = u;
          k_min = k;
        }
      }
      for (long k = k_in; k < k_min; ++k) at(k) = 0.0;
    }
  }

  const auto wt = moment_weights(h, k_in, k_out, 2);
  const double norm = simd::weighted_product_sum(wt, w, w);
  if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalError("radial normalization failed");
  const double scale = 1.0 / std::sqrt(norm);
  for (double& v : w) v *= scale;
  return RadialWavefunction(h, k_in, std::move(w));
}

double radial_r_integral(const RadialWavefunction& a, const RadialWavefunction& b) {
  if (a.step() != b.step()) throw std::invalid_argument("wavefunctions use different grids");
  const long k0 = std::max(a.first_index(), b.first_index());
  const long k1 = std::min(a.last_index(), b.last_index());
  if (k1 <= k0) return 0.0;
  const auto wt = moment_weights(a.step(), k0, k1, 4);
  const auto span_of = [&](const RadialWavefunction& f) {
    return std::span<const double>(f.samples()).subspan(static_cast<std::size_t>(k0 - f.first_index()),
                                                        static_cast<std::size_t>(k1 - k0 + 1));
  };
  return simd::weighted_product_sum(wt, span_of(a), span_of(b));
}

double radial_norm(const RadialWavefunction& a) {
  const auto wt = moment_weights(a.step(), a.first_index(), a.last_index(), 2);
  return simd::weighted_product_sum(wt, a.samples(), a.samples());
}

}  // namespace rydnoise::rydberg
