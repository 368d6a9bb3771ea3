#include "rydnoise/analysis/measurement.hpp"

#include "rydnoise/error.hpp"

namespace rydnoise::analysis {

namespace c = constants;

double rf_rabi(double efield_v_m, double dipole_ea0) { return efield_v_m * dipole_ea0 * c::e * c::a0 / c::hbar; }

double suppression_threshold(const ForwardModel& model) {
  const auto clean = model_spectrum(model, 0.0, {}, 0.0);
  if (clean.peaks.empty()) throw NumericalError("no EIT peak in the no-noise reference spectrum");
  return model.prominence_fraction * clean.peaks.peaks[clean.peaks.tallest()].prominence;
}

ModelSpectrum model_spectrum(const ForwardModel& model, double cw_power_w, const noise::NoiseCouplings& noise,
                             double threshold) {
  ModelSpectrum out;
  out.cw_power_w = cw_power_w;
  out.efield_v_m = noise::farfield_efield(cw_power_w, model.rf_frequency_hz, model.geometry);
  spectroscopy::SystemConfig system = model.system;
  system.drives.rf_rabi = rf_rabi(out.efield_v_m, model.rf_dipole_ea0);
  system.decays.noise = noise;
  if (model.velocity_tolerance) {
    out.spectrum = spectroscopy::checked_spectrum(system, model.axis, model.scan_grid, *model.velocity_tolerance);
  } else if (model.axis == spectroscopy::ScanAxis::probe) {
    out.spectrum = spectroscopy::probe_scan_spectrum(system, model.scan_grid);
  } else {
    out.spectrum = spectroscopy::transmission_spectrum(system, model.scan_grid);
  }
  out.peaks = find_peaks(out.spectrum, threshold);
  return out;
}

OffsetResult zero_rf_offset(const ForwardModel& model, const noise::NoiseCouplings& noise, double threshold) {
  const auto s = model_spectrum(model, 0.0, noise, threshold);
  OffsetResult out;
  out.peaks = s.peaks;
  if (!s.peaks.empty()) out.offset_hz = s.peaks.peaks[s.peaks.tallest()].position_hz;
  return out;
}

std::vector<CsnrPoint> csnr_analysis(const ForwardModel& model, std::span<const double> cw_powers_w,
                                     const noise::NoiseCouplings& noise, double noise_power_w, double threshold) {
  if (!(noise_power_w > 0.0)) throw ConfigError("CSNR analysis needs a positive integrated noise power");
  std::vector<CsnrPoint> out;
  out.reserve(cw_powers_w.size());
  const double d = d_factor(model.axis, model.system.cell.probe_wavelength_m, model.system.cell.coupling_wavelength_m);
  for (const double p : cw_powers_w) {
    CsnrPoint pt;
    pt.cw_power_w = p;
    pt.csnr = p / noise_power_w;
    pt.farfield_v_m = noise::farfield_efield(p, model.rf_frequency_hz, model.geometry);
    const auto clean = model_spectrum(model, p, {}, threshold);
    const auto noisy = model_spectrum(model, p, noise, threshold);
    if (const auto s = at_splitting(clean.peaks)) pt.clean_efield_v_m = infer_efield(*s, model.rf_dipole_ea0, d);
    if (const auto s = at_splitting(noisy.peaks)) pt.noisy_efield_v_m = infer_efield(*s, model.rf_dipole_ea0, d);
    if (pt.clean_efield_v_m && pt.noisy_efield_v_m && *pt.clean_efield_v_m > 0.0) {
      pt.percent_difference = 100.0 * (*pt.noisy_efield_v_m - *pt.clean_efield_v_m) / *pt.clean_efield_v_m;
    }
    out.push_back(pt);
  }
  return out;
}

}  // namespace rydnoise::analysis
