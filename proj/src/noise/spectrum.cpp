#include "rydnoise/noise/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rydnoise/error.hpp"
#include "text_util.hpp"

namespace rydnoise::noise {

namespace {

double trapezoid(const SpectrumSegment& s) {
  double sum = 0.0;
  for (std::size_t k = 1; k < s.frequency_hz.size(); ++k) {
    sum += 0.5 * (s.psd_w_per_hz[k] + s.psd_w_per_hz[k - 1]) *
           (s.frequency_hz[k] - s.frequency_hz[k - 1]);
  }
  return sum;
}

void validate(const SpectrumSegment& s) {
  if (s.frequency_hz.size() != s.psd_w_per_hz.size()) {
    throw std::invalid_argument("noise spectrum: grid and psd sizes differ");
  }
  if (s.frequency_hz.size() < 2) throw std::invalid_argument("noise spectrum: need at least 2 samples");
  for (std::size_t k = 0; k < s.frequency_hz.size(); ++k) {
    if (!std::isfinite(s.frequency_hz[k]) || !(s.frequency_hz[k] > 0.0)) {
      throw std::invalid_argument("noise spectrum: frequencies must be positive and finite");
    }
    if (k > 0 && !(s.frequency_hz[k] > s.frequency_hz[k - 1])) {
      throw std::invalid_argument("noise spectrum: frequency grid must be strictly increasing");
    }
    if (!std::isfinite(s.psd_w_per_hz[k]) || s.psd_w_per_hz[k] < 0.0) {
      throw std::invalid_argument("noise spectrum: psd must be finite and non-negative");
    }
  }
}

}  // namespace

NoiseSpectrum::NoiseSpectrum(std::vector<double> frequency_hz, std::vector<double> psd_w_per_hz)
    : NoiseSpectrum(std::vector<SpectrumSegment>{{std::move(frequency_hz), std::move(psd_w_per_hz)}}) {}

NoiseSpectrum::NoiseSpectrum(std::vector<SpectrumSegment> segments) : segments_(std::move(segments)) {
  for (const auto& s : segments_) validate(s);
  std::sort(segments_.begin(), segments_.end(), [](const auto& a, const auto& b) {
    return a.frequency_hz.front() < b.frequency_hz.front();
  });
  for (std::size_t k = 1; k < segments_.size(); ++k) {
    if (segments_[k].frequency_hz.front() < segments_[k - 1].frequency_hz.back()) {
      throw std::invalid_argument("noise spectrum: segments overlap");
    }
  }
  for (const auto& s : segments_) integrated_power_ += trapezoid(s);
}

double NoiseSpectrum::psd(double nu) const {
  for (const auto& s : segments_) {
    const auto& f = s.frequency_hz;
    if (nu < f.front() || nu > f.back()) continue;
    const auto it = std::upper_bound(f.begin(), f.end(), nu);
    if (it == f.end()) return s.psd_w_per_hz.back();
    const auto k = static_cast<std::size_t>(it - f.begin());
    const double t = (nu - f[k - 1]) / (f[k] - f[k - 1]);
    return (1.0 - t) * s.psd_w_per_hz[k - 1] + t * s.psd_w_per_hz[k];
  }
  return 0.0;
}

double NoiseSpectrum::min_frequency() const {
  if (segments_.empty()) throw std::logic_error("empty noise spectrum has no support");
  return segments_.front().frequency_hz.front();
}

double NoiseSpectrum::max_frequency() const {
  if (segments_.empty()) throw std::logic_error("empty noise spectrum has no support");
  return segments_.back().frequency_hz.back();
}

NoiseSpectrum NoiseSpectrum::scaled(double factor) const {
  if (!(factor >= 0.0) || !std::isfinite(factor)) {
    throw std::invalid_argument("noise spectrum scale factor must be finite and non-negative");
  }
  auto segs = segments_;
  for (auto& s : segs)
    for (double& v : s.psd_w_per_hz) v *= factor;
  return NoiseSpectrum(std::move(segs));
}

NoiseSpectrum NoiseSpectrum::with_gain_db(double db) const { return scaled(std::pow(10.0, db / 10.0)); }

NoiseSpectrum NoiseSpectrum::normalized_to(double power_w) const {
  if (!(power_w >= 0.0)) throw std::invalid_argument("integrated power must be non-negative");
  if (power_w == 0.0) return scaled(0.0);
  if (is_zero()) throw std::invalid_argument("cannot normalize an all-zero spectrum");
  return scaled(power_w / integrated_power_);
}

NoiseSpectrum make_rect_spectrum(double center_hz, double bandwidth_hz, double integrated_power_w) {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("rectangular noise band needs positive bandwidth");
  if (!(integrated_power_w >= 0.0)) throw std::invalid_argument("noise power must be non-negative");
  const double lo = center_hz - 0.5 * bandwidth_hz;
  const double hi = center_hz + 0.5 * bandwidth_hz;
  if (!(lo > 0.0)) throw std::invalid_argument("rectangular noise band must lie at positive frequency");
  const double level = integrated_power_w / bandwidth_hz;
  return NoiseSpectrum({lo, hi}, {level, level});
}

double dbm_to_watts(double dbm) noexcept { return 1e-3 * std::pow(10.0, dbm / 10.0); }

double watts_to_dbm(double watts) noexcept { return 10.0 * std::log10(watts / 1e-3); }

NoiseSpectrum parse_noise_psd(std::string_view text, const std::string& source,
                              std::optional<double> integrated_power_w) {
  enum class Units { none, hz_w, ghz_dbm };
  Units units = Units::none;
  std::vector<double> f, p;
  int line_no = 0;
  for (const auto& raw : detail::split_lines(text)) {
    ++line_no;
    const std::string line = detail::trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string body = detail::trim(std::string_view(line).substr(1));
      if (body.rfind("units:", 0) == 0) {
        if (units != Units::none) throw ParseError(source, line_no, "duplicate unit tag");
        std::string tag;
        for (char c : body.substr(6))
          if (c != ' ' && c != '\t') tag.push_back(c);
        if (tag == "Hz,W_per_Hz") {
          units = Units::hz_w;
        } else if (tag == "GHz,dBm_per_Hz") {
          units = Units::ghz_dbm;
        } else {
          throw ParseError(source, line_no, "unknown unit tag '" + tag + "'");
        }
      }
      continue;
    }
    if (units == Units::none) {
      throw ParseError(source, line_no, "missing '# units:' header before data");
    }
    const auto cols = detail::split(detail::strip_comment(line), ',');
    if (cols.size() != 2) throw ParseError(source, line_no, "expected two comma-separated columns");
    double nu = 0.0, value = 0.0;
    try {
      nu = detail::parse_double(cols[0]);
      value = detail::parse_double(cols[1]);
    } catch (const std::invalid_argument& e) {
      throw ParseError(source, line_no, e.what());
    }
    if (units == Units::ghz_dbm) {
      nu *= 1e9;
      value = dbm_to_watts(value);
    }
    if (!(nu > 0.0)) throw ParseError(source, line_no, "frequency must be positive");
    if (!f.empty() && !(nu > f.back())) {
      throw ParseError(source, line_no, "frequency grid is not strictly increasing");
    }
    if (!(value >= 0.0)) throw ParseError(source, line_no, "negative power spectral density");
    f.push_back(nu);
    p.push_back(value);
  }
  if (units == Units::none) throw ParseError(source, std::max(line_no, 1), "missing '# units:' header");
  if (f.size() < 2) throw ParseError(source, std::max(line_no, 1), "need at least two samples");
  NoiseSpectrum spectrum(std::move(f), std::move(p));
  if (integrated_power_w) return spectrum.normalized_to(*integrated_power_w);
  return spectrum;
}

NoiseSpectrum load_noise_psd(const std::filesystem::path& path, std::optional<double> integrated_power_w) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open noise psd file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_noise_psd(ss.str(), path.string(), integrated_power_w);
}

}  // namespace rydnoise::noise
