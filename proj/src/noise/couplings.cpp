#include "rydnoise/noise/couplings.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "numeric_util.hpp"
#include "rydnoise/constants.hpp"
#include "rydnoise/error.hpp"
#include "rydnoise/simd/kernels.hpp"

namespace rydnoise::noise {

namespace c = constants;
using rydberg::Perturber;

namespace {

// Accumulates nodes and signed weights so the rational part of the integrand,
// 1 / (nu^2 (nu + a)), is evaluated in one vectorized pass.
class PoleAccumulator {
 public:
  PoleAccumulator(const SpectralIntensity& intensity, double a, const PoleQuadrature& q)
      : intensity_(intensity), a_(a), q_(q), rule_(detail::gauss_legendre(q.points_per_panel)) {}

  // integral over u in [d_lo, d_hi] of F(a + side u) / u du, taken as
  // side * integral F(a + side e^t) dt. Breaks at psd samples.
  void log_side(int side, double d_lo, double d_hi, const std::vector<double>& samples) {
    if (!(d_hi > d_lo)) return;
    std::vector<double> breaks{std::log(d_lo), std::log(d_hi)};
    for (double f : samples) {
      const double d = side * (f - a_);
      if (d > d_lo && d < d_hi) breaks.push_back(std::log(d));
    }
    std::sort(breaks.begin(), breaks.end());
    for (std::size_t k = 1; k < breaks.size(); ++k) {
      const double t0 = breaks[k - 1];
      const double t1 = breaks[k];
      if (!(t1 > t0)) continue;
      const int panels = std::max(1, static_cast<int>(std::ceil((t1 - t0) / q_.max_log_panel_width)));
      const double width = (t1 - t0) / panels;
      for (int p = 0; p < panels; ++p) {
        const double lo = t0 + p * width;
        for (std::size_t g = 0; g < rule_.nodes.size(); ++g) {
          const double t = lo + 0.5 * width * (rule_.nodes[g] + 1.0);
          const double nu = a_ + side * std::exp(t);
          push(nu, side * 0.5 * width * rule_.weights[g] * intensity_(nu));
        }
      }
    }
  }

  // integral over u in [0, eps] of (F(a + u) - F(a - u)) / u du.
  void symmetric_window(double eps, const std::vector<double>& samples) {
    if (!(eps > 0.0)) return;
    std::vector<double> breaks{0.0, eps};
    for (double f : samples) {
      const double d = std::fabs(f - a_);
      if (d > 0.0 && d < eps) breaks.push_back(d);
    }
    std::sort(breaks.begin(), breaks.end());
    for (std::size_t k = 1; k < breaks.size(); ++k) {
      const double u0 = breaks[k - 1];
      const double u1 = breaks[k];
      if (!(u1 > u0)) continue;
      const double width = (u1 - u0) / q_.inner_panels;
      for (int p = 0; p < q_.inner_panels; ++p) {
        const double lo = u0 + p * width;
        for (std::size_t g = 0; g < rule_.nodes.size(); ++g) {
          const double u = lo + 0.5 * width * (rule_.nodes[g] + 1.0);
          const double w = 0.5 * width * rule_.weights[g] / u;
          push(a_ + u, w * intensity_(a_ + u));
          push(a_ - u, -w * intensity_(a_ - u));
        }
      }
    }
  }

  double total() const { return simd::pole_quadrature_sum(weights_, nodes_, a_); }

 private:
  void push(double nu, double w) {
    if (w == 0.0) return;
    nodes_.push_back(nu);
    weights_.push_back(w);
  }

  const SpectralIntensity& intensity_;
  double a_;
  const PoleQuadrature& q_;
  detail::GaussLegendreRule rule_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace

double pole_integral(const SpectralIntensity& intensity, double a, const PoleQuadrature& q) {
  if (!(a > 0.0)) throw std::invalid_argument("pole frequency must be positive");
  if (!(q.exclusion_half_width_hz > 0.0) || !(q.max_log_panel_width > 0.0) ||
      q.points_per_panel < 1 || q.inner_panels < 1) {
    throw std::invalid_argument("invalid pole quadrature settings");
  }
  if (intensity.is_zero()) return 0.0;
  const auto& spectrum = intensity.spectrum();
  if ((q.nu_min_hz && *q.nu_min_hz > spectrum.min_frequency()) ||
      (q.nu_max_hz && *q.nu_max_hz < spectrum.max_frequency())) {
    throw ConfigError("shift integration bounds do not cover the noise spectrum");
  }

  PoleAccumulator acc(intensity, a, q);
  for (const auto& seg : spectrum.segments()) {
    const auto& f = seg.frequency_hz;
    const double lo = f.front();
    const double hi = f.back();
    if (a < lo) {
      acc.log_side(+1, lo - a, hi - a, f);
    } else if (a > hi) {
      acc.log_side(-1, a - hi, a - lo, f);
    } else {
      const double dl = a - lo;
      const double dr = hi - a;
      const double inner = std::min(dl, dr);
      if (inner > 0.0) {
        const double eps = std::min(q.exclusion_half_width_hz, inner);
        acc.symmetric_window(eps, f);
        acc.log_side(+1, eps, dr, f);
        acc.log_side(-1, eps, dl, f);
      } else {
        const double eps = std::min(q.exclusion_half_width_hz, std::max(dl, dr));
        if (dr > 0.0) acc.log_side(+1, eps, dr, f);
        if (dl > 0.0) acc.log_side(-1, eps, dl, f);
      }
    }
  }
  return acc.total();
}

double noise_rate(double transition_hz, double dipole_ea0, const SpectralIntensity& intensity) {
  const double i_nu = intensity(std::fabs(transition_hz));
  if (i_nu == 0.0) return 0.0;
  const double d = dipole_ea0 * c::e * c::a0;  // C m
  return d * d * i_nu / (2.0 * c::epsilon0 * c::hbar * c::hbar * c::c);
}

double ac_shift(std::span<const Perturber> partners, const SpectralIntensity& intensity,
                const PoleQuadrature& q) {
  if (intensity.is_zero()) return 0.0;
  detail::CompensatedSum sum;
  for (const auto& p : partners) {
    const double nu = p.frequency_hz;
    if (nu == 0.0 || p.dipole_ea0 == 0.0) continue;
    const double d = p.dipole_ea0 * c::e * c::a0;
    const double prefactor = d * d * nu * nu * nu / (c::h * c::h * c::c * c::epsilon0);
    sum.add(prefactor * pole_integral(intensity, std::fabs(nu), q));
  }
  return sum.value();
}

void NoiseCouplings::validate() const {
  for (double r : {r34, rd3, re4}) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("noise rates must be finite and non-negative");
  }
  if (!std::isfinite(shift3_hz) || !std::isfinite(shift4_hz)) {
    throw ConfigError("noise shifts must be finite");
  }
}

NoiseCouplings lumped_rates(std::span<const Perturber> perturbers3,
                            std::span<const Perturber> perturbers4, double nu34_hz,
                            double dipole34_ea0, const SpectralIntensity& intensity) {
  NoiseCouplings out;
  detail::CompensatedSum d3, e4;
  for (const auto& p : perturbers3) d3.add(noise_rate(p.frequency_hz, p.dipole_ea0, intensity));
  for (const auto& p : perturbers4) e4.add(noise_rate(p.frequency_hz, p.dipole_ea0, intensity));
  out.rd3 = d3.value();
  out.re4 = e4.value();
  out.r34 = noise_rate(nu34_hz, dipole34_ea0, intensity);
  return out;
}

NoiseCouplings compute_couplings(const rydberg::RydbergStructure& structure,
                                 const rydberg::RydbergState& state3,
                                 const rydberg::RydbergState& state4,
                                 const SpectralIntensity& intensity, const CouplingOptions& options) {
  if (intensity.is_zero()) return {};
  const auto& pol = options.polarization;
  const auto p3 = structure.enumerate_perturbers(state3, options.n_window, state4, pol);
  const auto p4 = structure.enumerate_perturbers(state4, options.n_window, state3, pol);
  const double nu34 = structure.transition_frequency(state3, state4);
  const double d34 = options.driven_dipole_ea0 ? *options.driven_dipole_ea0
                                               : structure.dipole_moment(state3, state4, pol).total_ea0;

  NoiseCouplings out = lumped_rates(p3, p4, nu34, d34, intensity);

  auto with_partner = [](std::vector<Perturber> list, Perturber partner) {
    list.push_back(partner);
    return list;
  };
  const auto all3 = with_partner(p3, {state4, nu34, d34});
  const auto all4 = with_partner(p4, {state3, -nu34, d34});
  out.shift3_hz = ac_shift(all3, intensity, options.quadrature);
  out.shift4_hz = ac_shift(all4, intensity, options.quadrature);
  return out;
}

double coherent_rf_shift(const rydberg::RydbergStructure& structure, const rydberg::RydbergState& state,
                         const rydberg::RydbergState& resonant_partner, double rf_hz,
                         double efield_v_per_m, const rydberg::Polarization& polarization,
                         int n_window) {
  if (efield_v_per_m == 0.0) return 0.0;
  detail::CompensatedSum sum;
  for (const auto& p : structure.enumerate_perturbers(state, n_window, resonant_partner, polarization)) {
    const double rabi_hz = p.dipole_ea0 * c::e * c::a0 * efield_v_per_m / c::h;
    const double nu = p.frequency_hz;
    sum.add(0.25 * rabi_hz * rabi_hz * (1.0 / (rf_hz - nu) - 1.0 / (rf_hz + nu)));
  }
  return sum.value();
}

}  // namespace rydnoise::noise
