#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rydnoise::noise {

// One contiguous piece of a power spectral density: psd (W/Hz) sampled on a
// strictly increasing frequency grid (Hz), linearly interpolated between samples.
struct SpectrumSegment {
  std::vector<double> frequency_hz;
  std::vector<double> psd_w_per_hz;
};

// Noise power spectral density dP/dnu. A spectrum is a list of non-overlapping
// segments (they may touch at an edge); outside every segment it is exactly zero.
class NoiseSpectrum {
 public:
  NoiseSpectrum() = default;  // identically zero
  NoiseSpectrum(std::vector<double> frequency_hz, std::vector<double> psd_w_per_hz);
  explicit NoiseSpectrum(std::vector<SpectrumSegment> segments);

  const std::vector<SpectrumSegment>& segments() const noexcept { return segments_; }

  // Trapezoid integral of the samples, W.
  double integrated_power() const noexcept { return integrated_power_; }

  // Interpolated psd, W/Hz; zero outside the support.
  double psd(double nu_hz) const;

  bool is_zero() const noexcept { return integrated_power_ == 0.0; }
  double min_frequency() const;  // throws std::logic_error if there are no segments
  double max_frequency() const;

  // Shape-preserving rescaling of every sample.
  NoiseSpectrum scaled(double factor) const;
  // Scales power by 10^(db / 10); attenuation settings are negative dB.
  NoiseSpectrum with_gain_db(double db) const;
  // Rescales so that integrated_power() == power_w.
  NoiseSpectrum normalized_to(double power_w) const;

 private:
  std::vector<SpectrumSegment> segments_;
  double integrated_power_ = 0.0;
};

// Flat psd = power / bandwidth on [center - B/2, center + B/2].
// Throws std::invalid_argument for non-positive bandwidth or negative power.
NoiseSpectrum make_rect_spectrum(double center_hz, double bandwidth_hz, double integrated_power_w);

// Two-column CSV psd. The first non-blank line must be a unit tag,
//   # units: Hz,W_per_Hz     or     # units: GHz,dBm_per_Hz
// Other '#' lines are comments. Values are converted to (Hz, W/Hz). When
// integrated_power_w is given the result is rescaled to that total power.
// Errors are ParseError carrying the 1-based line number.
NoiseSpectrum parse_noise_psd(std::string_view text, const std::string& source = "<string>",
                              std::optional<double> integrated_power_w = std::nullopt);
NoiseSpectrum load_noise_psd(const std::filesystem::path& path,
                             std::optional<double> integrated_power_w = std::nullopt);

double dbm_to_watts(double dbm) noexcept;
double watts_to_dbm(double watts) noexcept;

}  // namespace rydnoise::noise
