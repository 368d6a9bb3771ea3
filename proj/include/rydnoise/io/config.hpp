#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rydnoise/error.hpp"
#include "rydnoise/lindblad/model.hpp"
#include "rydnoise/noise/field.hpp"
#include "rydnoise/rydberg/state.hpp"
#include "rydnoise/spectroscopy/spectrum.hpp"

namespace rydnoise::io {

// Scenario files are YAML with six top-level blocks (atom, drives, noise,
// geometry, cell, run). Every dimensional key carries its unit as a suffix,
// e.g. `length_mm: 75` or `rf_frequency_GHz: 19.7825`; the bare name is a unit
// error and anything not in the schema is an unknown-key error. All values
// below are stored in SI units (frequencies in Hz, rates and detunings as
// given in Hz, i.e. divided by 2 pi).

struct AtomBlock {
  rydberg::RydbergState state3 = rydberg::make_state(57, 0, 0.5);
  rydberg::RydbergState state4 = rydberg::make_state(57, 1, 0.5);
  rydberg::RydbergState intermediate = rydberg::make_state(5, 1, 1.5);
  std::optional<std::filesystem::path> defects_file;
  double probe_dipole_ea0 = 2.44;
  std::optional<double> coupling_dipole_ea0;
  std::optional<double> rf_dipole_ea0;
  int perturber_window = 10;
  double gamma2_hz = 6.07e6;
  double gamma3_hz = 1e4;
  double gamma4_hz = 1e4;
  double gamma_extra_hz = 0.0;
};

struct DrivesBlock {
  double rf_frequency_hz = 19.7825e9;
  double rf_detuning_hz = 0.0;
  double probe_detuning_hz = 0.0;
  double coupling_detuning_hz = 0.0;
  std::optional<double> probe_rabi_hz;
  std::optional<double> coupling_rabi_hz;
  std::vector<double> cw_powers_w{0.0};
  spectroscopy::ScanAxis scan_axis = spectroscopy::ScanAxis::coupling;
  double scan_start_hz = -150e6;
  double scan_stop_hz = 150e6;
  int scan_points = 601;
};

enum class NoiseKind { none, rectangles, file };

struct NoiseBlock {
  NoiseKind kind = NoiseKind::none;
  std::string descriptor;
  std::vector<double> centers_hz;
  double bandwidth_hz = 1e9;
  std::optional<double> total_power_w;
  std::optional<std::filesystem::path> psd_file;
  std::vector<double> attenuations_db{0.0};
};

struct RunBlock {
  spectroscopy::VelocityGrid velocity;
  std::filesystem::path output_dir = "out";
  unsigned threads = 0;
  double prominence_fraction = 0.05;
  bool velocity_check = false;
  double velocity_tolerance = 1e-4;
  double pole_exclusion_hz = 1e6;
  bool matrix_cache = true;  // memoize radial integrals; never changes values
};

enum class Origin { default_value, user };

struct Provenance {
  Origin origin = Origin::default_value;
  int line = 0;  // 1-based; 0 for defaults
};

struct ScenarioConfig {
  AtomBlock atom;
  DrivesBlock drives;
  NoiseBlock noise;
  noise::FieldGeometry geometry;
  spectroscopy::CellParameters cell;
  RunBlock run;

  std::string source;       // file name or "<string>"
  std::string text;         // raw file contents
  std::map<std::string, Provenance> provenance;  // keyed "block.name"
};

struct Diagnostic {
  std::string path;  // "block.key" or "block"
  int line = 0;
  std::string message;
};

// All problems found while validating a config; what() lists them one per line.
class ConfigDiagnosticsError : public ConfigError {
 public:
  explicit ConfigDiagnosticsError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

// Parses and validates. Relative input file paths resolve against `base_dir`;
// run.output_dir is taken relative to the working directory.
ScenarioConfig parse_config(std::string_view text, const std::string& source = "<string>",
                            const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);

// Human-readable dump of the resolved values with their provenance.
std::string describe(const ScenarioConfig& config);

// Converts `value` given in `unit` to SI for the named quantity kind
// ("frequency", "length", "power", "dB", ...). Throws ConfigError on a unit
// that does not belong to the kind.
double to_si(double value, std::string_view unit, std::string_view kind);

}  // namespace rydnoise::io
