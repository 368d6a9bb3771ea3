#include "rydnoise/spectroscopy/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "numeric_util.hpp"
#include "parallel.hpp"
#include "rydnoise/error.hpp"
#include "rydnoise/lindblad/steady_state.hpp"
#include "text_util.hpp"

namespace rydnoise::spectroscopy {

namespace c = constants;
using lindblad::cplx;
using lindblad::ScanPoint;
using lindblad::SteadyStateEngine;

namespace {

constexpr double kTorr = 133.322368;  // Pa

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be positive and finite");
}

struct ScanContext {
  const SystemConfig& config;
  SteadyStateEngine engine;
  std::vector<VelocityClass> classes;
  double prefactor;  // 2 N p^2 / (eps0 hbar Omega_p)

  explicit ScanContext(const SystemConfig& cfg)
      : config(cfg),
        engine(cfg.drives, cfg.decays, cfg.doppler()),
        classes(maxwell_classes(cfg.velocity, cfg.cell.temperature_k, cfg.atomic_mass_kg)) {
    const double n = vapor_density(cfg.cell.temperature_k, cfg.cell.isotope_fraction);
    const double p = cfg.probe_dipole_ea0 * c::e * c::a0;
    prefactor = 2.0 * n * p * p / (c::epsilon0 * c::hbar * cfg.drives.probe_rabi);
  }

  cplx chi(double probe_detuning, double coupling_detuning) const {
    std::vector<ScanPoint> points(classes.size());
    for (std::size_t k = 0; k < classes.size(); ++k) {
      points[k] = {probe_detuning, coupling_detuning, classes[k].velocity_m_s};
    }
    std::vector<cplx> rho21(points.size());
    engine.probe_coherence(points, rho21);
    detail::CompensatedSum re, im;
    for (std::size_t k = 0; k < classes.size(); ++k) {
      const cplx rho12 = std::conj(rho21[k]);
      re.add(classes[k].weight * rho12.real());
      im.add(classes[k].weight * rho12.imag());
    }
    return prefactor * cplx(re.value(), im.value());
  }
};

TransmissionSpectrum scan(const SystemConfig& config, ScanAxis axis, std::span<const double> grid) {
  config.validate();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ConfigError("detuning grid must be strictly increasing");
  }
  const ScanContext ctx(config);
  TransmissionSpectrum out;
  out.axis = axis;
  out.detuning.assign(grid.begin(), grid.end());
  out.transmission.resize(grid.size());
  out.alpha.resize(grid.size());
  const double k = c::two_pi / config.cell.probe_wavelength_m;
  detail::parallel_for(grid.size(), config.threads, [&](std::size_t i) {
    const double dp = axis == ScanAxis::probe ? grid[i] : config.drives.probe_detuning;
    const double dc = axis == ScanAxis::coupling ? grid[i] : config.drives.coupling_detuning;
    const double alpha = k * ctx.chi(dp, dc).imag();
    out.alpha[i] = alpha;
    out.transmission[i] = std::exp(-alpha * config.cell.length_m);
  });

  const auto f = detail::format_double;
  auto& m = out.metadata;
  m.emplace_back("scan_axis", scan_axis_name(axis));
  m.emplace_back("probe_rabi_Hz", f(config.drives.probe_rabi / c::two_pi));
  m.emplace_back("coupling_rabi_Hz", f(config.drives.coupling_rabi / c::two_pi));
  m.emplace_back("rf_rabi_Hz", f(config.drives.rf_rabi / c::two_pi));
  m.emplace_back("rf_detuning_Hz", f(config.drives.rf_detuning / c::two_pi));
  m.emplace_back("R34_per_s", f(config.decays.noise.r34));
  m.emplace_back("Rd3_per_s", f(config.decays.noise.rd3));
  m.emplace_back("Re4_per_s", f(config.decays.noise.re4));
  m.emplace_back("shift3_Hz", f(config.decays.noise.shift3_hz));
  m.emplace_back("shift4_Hz", f(config.decays.noise.shift4_hz));
  m.emplace_back("temperature_K", f(config.cell.temperature_k));
  m.emplace_back("density_per_m3", f(vapor_density(config.cell.temperature_k, config.cell.isotope_fraction)));
  m.emplace_back("cell_length_m", f(config.cell.length_m));
  m.emplace_back("velocity_classes", std::to_string(ctx.classes.size()));
  m.emplace_back("velocity_span_u", f(config.velocity.doppler ? config.velocity.span_u : 0.0));
  m.emplace_back("most_probable_speed_m_s",
                 f(most_probable_speed(config.cell.temperature_k, config.atomic_mass_kg)));
  return out;
}

}  // namespace

void CellParameters::validate() const {
  require_positive(length_m, "cell length");
  require_positive(temperature_k, "cell temperature");
  require_positive(probe_wavelength_m, "probe wavelength");
  require_positive(coupling_wavelength_m, "coupling wavelength");
  require_positive(probe.power_w, "probe power");
  require_positive(probe.fwhm_m, "probe FWHM");
  require_positive(coupling.power_w, "coupling power");
  require_positive(coupling.fwhm_m, "coupling FWHM");
  if (!(isotope_fraction > 0.0 && isotope_fraction <= 1.0)) {
    throw ConfigError("isotope fraction must lie in (0, 1]");
  }
}

double rabi_from_beam(double power_w, double fwhm_m, double dipole_ea0) {
  if (power_w < 0.0 || !(fwhm_m > 0.0) || dipole_ea0 < 0.0) {
    throw ConfigError("beam power and dipole must be non-negative and FWHM positive");
  }
  const double w = fwhm_m / std::sqrt(2.0 * std::log(2.0));
  const double intensity = 2.0 * power_w / (c::pi * w * w);
  const double field = std::sqrt(2.0 * intensity / (c::c * c::epsilon0));
  return dipole_ea0 * c::e * c::a0 * field / c::hbar;
}

double rb_vapor_pressure_pa(double temperature_k) {
  constexpr double melting_k = 312.46;
  const bool solid = temperature_k < melting_k;
  const double a = solid ? 4.857 : 4.312;
  const double b = solid ? 4215.0 : 4040.0;
  return kTorr * std::pow(10.0, 2.881 + a - b / temperature_k);
}

double vapor_density(double temperature_k, double isotope_fraction) {
  if (!(temperature_k > 250.0 && temperature_k < 450.0)) {
    throw ConfigError("cell temperature outside the 250 K - 450 K vapor-pressure range");
  }
  if (!(isotope_fraction > 0.0 && isotope_fraction <= 1.0)) {
    throw ConfigError("isotope fraction must lie in (0, 1]");
  }
  return isotope_fraction * rb_vapor_pressure_pa(temperature_k) / (c::kB * temperature_k);
}

void VelocityGrid::validate() const {
  if (!doppler) return;
  if (classes < 3 || classes % 2 == 0) throw ConfigError("velocity classes must be odd and at least 3");
  require_positive(span_u, "velocity span");
}

double most_probable_speed(double temperature_k, double mass_kg) {
  return std::sqrt(2.0 * c::kB * temperature_k / mass_kg);
}

std::vector<VelocityClass> maxwell_classes(const VelocityGrid& grid, double temperature_k, double mass_kg) {
  grid.validate();
  if (!grid.doppler) return {{0.0, 1.0}};
  const double u = most_probable_speed(temperature_k, mass_kg);
  const int half = grid.classes / 2;
  const double dv = grid.span_u * u / half;
  std::vector<VelocityClass> out(static_cast<std::size_t>(grid.classes));
  detail::CompensatedSum total;
  for (int i = 0; i < grid.classes; ++i) {
    const double v = (i - half) * dv;
    const double w = std::exp(-(v / u) * (v / u));
    out[static_cast<std::size_t>(i)] = {v, w};
    total.add(w);
  }
  const double norm = total.value();
  for (auto& cls : out) cls.weight /= norm;
  return out;
}

void SystemConfig::validate() const {
  drives.validate();
  decays.validate();
  cell.validate();
  velocity.validate();
  require_positive(drives.probe_rabi, "probe Rabi frequency");
  require_positive(probe_dipole_ea0, "probe dipole");
  require_positive(atomic_mass_kg, "atomic mass");
}

const char* scan_axis_name(ScanAxis axis) { return axis == ScanAxis::coupling ? "coupling" : "probe"; }

double TransmissionSpectrum::detuning_hz(std::size_t i) const { return detuning[i] / c::two_pi; }

std::complex<double> susceptibility(const SystemConfig& config, double probe_detuning, double coupling_detuning) {
  config.validate();
  return ScanContext(config).chi(probe_detuning, coupling_detuning);
}

TransmissionSpectrum transmission_spectrum(const SystemConfig& config, std::span<const double> grid) {
  return scan(config, ScanAxis::coupling, grid);
}

TransmissionSpectrum probe_scan_spectrum(const SystemConfig& config, std::span<const double> grid) {
  return scan(config, ScanAxis::probe, grid);
}

TransmissionSpectrum checked_spectrum(const SystemConfig& config, ScanAxis axis, std::span<const double> grid,
                                      double tolerance) {
  auto base = scan(config, axis, grid);
  if (!config.velocity.doppler) return base;
  SystemConfig fine = config;
  fine.velocity.classes = 2 * config.velocity.classes - 1;  // keeps every original node
  const auto refined = scan(fine, axis, grid);
  SystemConfig wide = config;
  wide.velocity.span_u = config.velocity.span_u + 1.0;
  wide.velocity.classes = config.velocity.classes + 2 * static_cast<int>(std::ceil(config.velocity.classes / 2 / config.velocity.span_u));
  if (wide.velocity.classes % 2 == 0) ++wide.velocity.classes;
  const auto widened = scan(wide, axis, grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, std::fabs(base.transmission[i] - refined.transmission[i]));
    worst = std::max(worst, std::fabs(base.transmission[i] - widened.transmission[i]));
  }
  if (worst > tolerance) {
    throw VelocityGridError("velocity grid not converged: max transmission change " + detail::format_double(worst),
                            worst);
  }
  base.metadata.emplace_back("velocity_convergence", detail::format_double(worst));
  return base;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points < 2 || !(hi > lo)) throw ConfigError("detuning grid needs at least two points and hi > lo");
  std::vector<double> out(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

}  // namespace rydnoise::spectroscopy
