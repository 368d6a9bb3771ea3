#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rydnoise/analysis/measurement.hpp"
#include "rydnoise/io/config.hpp"
#include "rydnoise/noise/couplings.hpp"
#include "rydnoise/rydberg/structure.hpp"

namespace rydnoise::io {

// A config turned into model inputs: atomic structure, dipoles, Rabi
// frequencies and the unattenuated noise spectrum.
struct ResolvedScenario {
  ScenarioConfig config;
  std::shared_ptr<const rydberg::RydbergStructure> structure;
  double rf_transition_hz = 0.0;
  double rf_dipole_ea0 = 0.0;
  double coupling_dipole_ea0 = 0.0;
  analysis::ForwardModel model;  // no noise, RF set per CW power
  noise::NoiseSpectrum noise_spectrum;  // at 0 dB attenuation
};

ResolvedScenario resolve(const ScenarioConfig& config);

// Noise couplings with the noise power scaled by `attenuation_db` (<= 0).
noise::NoiseCouplings scenario_couplings(const ResolvedScenario& scenario, double attenuation_db);

struct SpectrumCell {
  double attenuation_db = 0.0;
  noise::NoiseCouplings noise;
  analysis::ModelSpectrum result;
};

struct OffsetRow {
  double attenuation_db = 0.0;
  double noise_power_w = 0.0;
  noise::NoiseCouplings noise;
  std::optional<double> offset_hz;  // nullopt when suppressed
  double prominence_ratio = 0.0;    // tallest peak over the no-noise peak
};

struct CsnrSeries {
  double attenuation_db = 0.0;
  double noise_power_w = 0.0;
  std::vector<analysis::CsnrPoint> points;
};

struct Bundle {
  std::shared_ptr<const ResolvedScenario> scenario;
  double threshold = 0.0;            // absolute peak prominence cut
  double reference_prominence = 0.0; // no-noise, no-RF EIT peak
  double reference_offset_hz = 0.0;  // its position
  std::vector<SpectrumCell> cells;   // attenuation-major, CW power minor
  std::vector<OffsetRow> offsets;
  std::vector<CsnrSeries> csnr;

  // True when some requested spectrum lost every peak above the threshold.
  bool suppressed() const;
};

struct RunRequest {
  bool spectra = true;
  bool offsets = true;
  bool csnr = false;
  // Restrict the spectra to one (CW power, attenuation) pair.
  std::optional<double> cw_power_w;
  std::optional<double> attenuation_db;
};

// Errors from the model are rethrown with the scenario coordinates appended.
Bundle run_scenario(std::shared_ptr<const ResolvedScenario> scenario, const RunRequest& request = {});

// Vertical spacing between stacked traces in the waterfall files.
inline constexpr double kWaterfallOffset = 0.05;

// Stacked transmission traces for one attenuation: one column per CW power,
// trace k shifted up by k * kWaterfallOffset. The header records the offset,
// the field geometry and the noise descriptor. With no matching spectra only
// the header is written.
std::string export_plotdata(const Bundle& bundle, double attenuation_db);

std::string spectrum_csv(const SpectrumCell& cell);
std::string peaks_csv(const Bundle& bundle);
std::string offsets_csv(const Bundle& bundle);
std::string csnr_csv(const Bundle& bundle);

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

struct WrittenFile {
  std::string name;  // relative to the output directory
  std::uint64_t hash = 0;
  std::size_t bytes = 0;
};

struct Manifest {
  std::vector<WrittenFile> files;
  std::uint64_t outputs_hash = 0;  // over every file except the manifest itself
};

// Writes every table present in the bundle plus manifest.json into `dir`.
// Everything except the manifest's wall time is a function of the config.
Manifest write_bundle(const Bundle& bundle, const std::filesystem::path& dir, double wall_time_s);

}  // namespace rydnoise::io
