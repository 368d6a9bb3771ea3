#include "rydnoise/analysis/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rydnoise/error.hpp"

namespace rydnoise::analysis {

std::size_t PeakSet::tallest() const {
  if (peaks.empty()) throw std::logic_error("no peaks");
  std::size_t best = 0;
  for (std::size_t i = 1; i < peaks.size(); ++i) {
    if (peaks[i].prominence > peaks[best].prominence) best = i;
  }
  return best;
}

PeakSet find_peaks(std::span<const double> x, std::span<const double> y, double min_prominence) {
  if (x.size() != y.size()) throw std::invalid_argument("find_peaks: size mismatch");
  if (x.size() < 5) throw ConfigError("find_peaks needs at least 5 samples");
  const std::size_t n = y.size();
  const double step = (x[n - 1] - x[0]) / static_cast<double>(n - 1);

  PeakSet out;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (!(y[k] > y[k - 1] && y[k] >= y[k + 1])) continue;
    // Skip to the end of a flat top; the plateau centre is the peak.
    std::size_t right = k;
    while (right + 1 < n && y[right + 1] == y[k]) ++right;
    if (right + 1 == n) break;
    if (!(y[right + 1] < y[k])) continue;

    double left_min = y[k];
    for (std::size_t i = k; i-- > 0;) {
      if (y[i] > y[k]) break;
      left_min = std::min(left_min, y[i]);
    }
    double right_min = y[k];
    for (std::size_t i = right + 1; i < n; ++i) {
      if (y[i] > y[k]) break;
      right_min = std::min(right_min, y[i]);
    }
    const double prominence = y[k] - std::max(left_min, right_min);
    if (!(prominence > min_prominence)) {
      k = right;
      continue;
    }

    Peak p;
    if (right == k) {
      const double a = y[k - 1], b = y[k], c = y[k + 1];
      const double denom = a - 2.0 * b + c;
      const double off = denom < 0.0 ? 0.5 * (a - c) / denom : 0.0;
      p.position_hz = x[k] + off * step;
      p.height = b - 0.25 * (a - c) * off;
    } else {
      p.position_hz = 0.5 * (x[k] + x[right]);
      p.height = y[k];
    }
    p.prominence = prominence;
    out.peaks.push_back(p);
    k = right;
  }
  return out;
}

PeakSet find_peaks(const spectroscopy::TransmissionSpectrum& spectrum, double min_prominence) {
  std::vector<double> x(spectrum.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = spectrum.detuning_hz(i);
  return find_peaks(x, spectrum.transmission, min_prominence);
}

std::optional<double> at_splitting(const PeakSet& peaks) {
  if (peaks.size() < 2) return std::nullopt;
  std::vector<Peak> sorted = peaks.peaks;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Peak& a, const Peak& b) { return a.prominence > b.prominence; });
  return std::fabs(sorted[0].position_hz - sorted[1].position_hz);
}

double infer_efield(double splitting_hz, double dipole_ea0, double d_factor) {
  if (splitting_hz < 0.0 || !(dipole_ea0 > 0.0) || !(d_factor > 0.0)) {
    throw ConfigError("infer_efield: splitting must be non-negative, dipole and D positive");
  }
  return constants::two_pi * constants::hbar * d_factor * splitting_hz / (dipole_ea0 * constants::e * constants::a0);
}

FieldEstimate estimate_field(double splitting_hz, double dipole_ea0, double d_factor) {
  return {infer_efield(splitting_hz, dipole_ea0, d_factor), splitting_hz, d_factor, dipole_ea0};
}

double d_factor(spectroscopy::ScanAxis axis, double probe_wavelength_m, double coupling_wavelength_m) {
  return axis == spectroscopy::ScanAxis::probe ? probe_wavelength_m / coupling_wavelength_m : 1.0;
}

}  // namespace rydnoise::analysis
