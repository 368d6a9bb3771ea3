#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rydnoise/spectroscopy/spectrum.hpp"

namespace rydnoise::analysis {

struct Peak {
  double position_hz = 0.0;  // detuning / 2 pi
  double height = 0.0;       // interpolated transmission at the maximum
  double prominence = 0.0;   // height above the higher of the two bounding minima
};

// Peaks sorted by position. Empty when every local maximum falls below the
// threshold, which is how a suppressed EIT signal shows up.
struct PeakSet {
  std::vector<Peak> peaks;

  bool empty() const noexcept { return peaks.empty(); }
  std::size_t size() const noexcept { return peaks.size(); }
  // Index of the most prominent peak; requires !empty().
  std::size_t tallest() const;
};

// Local maxima with prominence above `min_prominence`, positions refined by a
// three-point parabola. x must be uniformly spaced and increasing.
PeakSet find_peaks(std::span<const double> x_hz, std::span<const double> y, double min_prominence);
PeakSet find_peaks(const spectroscopy::TransmissionSpectrum& spectrum, double min_prominence);

// Separation of the two most prominent peaks, or nullopt with fewer than two.
std::optional<double> at_splitting(const PeakSet& peaks);

struct FieldEstimate {
  double efield_v_m = 0.0;
  double splitting_hz = 0.0;
  double d_factor = 1.0;
  double dipole_ea0 = 0.0;
};

// |E| = 2 pi hbar D df / p for a measured splitting df (Hz).
double infer_efield(double splitting_hz, double dipole_ea0, double d_factor = 1.0);
FieldEstimate estimate_field(double splitting_hz, double dipole_ea0, double d_factor = 1.0);

// Probe-scan splittings are compressed by the Doppler mismatch.
double d_factor(spectroscopy::ScanAxis axis, double probe_wavelength_m, double coupling_wavelength_m);

}  // namespace rydnoise::analysis
