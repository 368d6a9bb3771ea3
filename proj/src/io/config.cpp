#include "rydnoise/io/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "rydnoise/noise/spectrum.hpp"
#include "text_util.hpp"

namespace rydnoise::io {

namespace {

struct UnitDef {
  std::string_view kind;
  std::string_view unit;
  double scale;
};

constexpr std::array kUnits{
    UnitDef{"frequency", "Hz", 1.0},         UnitDef{"frequency", "kHz", 1e3},
    UnitDef{"frequency", "MHz", 1e6},        UnitDef{"frequency", "GHz", 1e9},
    UnitDef{"length", "m", 1.0},             UnitDef{"length", "mm", 1e-3},
    UnitDef{"length", "um", 1e-6},           UnitDef{"length", "nm", 1e-9},
    UnitDef{"power", "W", 1.0},              UnitDef{"power", "mW", 1e-3},
    UnitDef{"power", "uW", 1e-6},            UnitDef{"power", "nW", 1e-9},
    UnitDef{"power", "dBm", 0.0},            UnitDef{"dB", "dB", 1.0},
    UnitDef{"temperature", "K", 1.0},        UnitDef{"dipole", "ea0", 1.0},
    UnitDef{"gain_slope", "dB_per_GHz", 1.0}, UnitDef{"thermal_speed", "u", 1.0},
};

// Unit the stored value is expressed in.
std::string_view si_unit(std::string_view kind) {
  for (const auto& u : kUnits) {
    if (u.kind == kind && u.scale == 1.0) return u.unit;
  }
  return "";
}

const UnitDef* find_unit(std::string_view unit) {
  for (const auto& u : kUnits) {
    if (u.unit == unit) return &u;
  }
  return nullptr;
}

enum class Kind { number, number_list, integer, boolean, text, state, path };

struct Value {
  double number = 0.0;
  std::vector<double> list;
  long integer = 0;
  bool flag = false;
  std::string text;
};

struct Entry {
  std::string_view block;
  std::string_view name;
  std::string_view kind;  // quantity kind, empty for dimensionless
  Kind type;
  std::function<void(ScenarioConfig&, const Value&)> set;
  std::function<std::string(const ScenarioConfig&)> show;
};

constexpr std::array<std::string_view, 6> kBlocks{"atom", "drives", "noise", "geometry", "cell", "run"};

void positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be positive");
}
void non_negative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be non-negative");
}

std::string fmt(double v) { return detail::format_double(v); }
std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : "computed"; }
std::string fmt_list(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v[i]);
  return out + "]";
}

const std::vector<Entry>& schema() {
  using C = ScenarioConfig;
  using V = Value;
  static const std::vector<Entry> entries{
      // atom
      {"atom", "state3", "", Kind::state, [](C& c, const V& v) { c.atom.state3 = rydberg::parse_state(v.text); },
       [](const C& c) { return c.atom.state3.label(); }},
      {"atom", "state4", "", Kind::state, [](C& c, const V& v) { c.atom.state4 = rydberg::parse_state(v.text); },
       [](const C& c) { return c.atom.state4.label(); }},
      {"atom", "intermediate", "", Kind::state,
       [](C& c, const V& v) { c.atom.intermediate = rydberg::parse_state(v.text); },
       [](const C& c) { return c.atom.intermediate.label(); }},
      {"atom", "defects_file", "", Kind::path, [](C& c, const V& v) { c.atom.defects_file = v.text; },
       [](const C& c) { return c.atom.defects_file ? c.atom.defects_file->string() : "built-in"; }},
      {"atom", "probe_dipole", "dipole", Kind::number,
       [](C& c, const V& v) { positive(v.number, "probe dipole"); c.atom.probe_dipole_ea0 = v.number; },
       [](const C& c) { return fmt(c.atom.probe_dipole_ea0); }},
      {"atom", "coupling_dipole", "dipole", Kind::number,
       [](C& c, const V& v) { positive(v.number, "coupling dipole"); c.atom.coupling_dipole_ea0 = v.number; },
       [](const C& c) { return fmt_opt(c.atom.coupling_dipole_ea0); }},
      {"atom", "rf_dipole", "dipole", Kind::number,
       [](C& c, const V& v) { positive(v.number, "RF dipole"); c.atom.rf_dipole_ea0 = v.number; },
       [](const C& c) { return fmt_opt(c.atom.rf_dipole_ea0); }},
      {"atom", "perturber_window", "", Kind::integer,
       [](C& c, const V& v) {
         if (v.integer < 0 || v.integer > 40) throw ConfigError("perturber window must be in 0..40");
         c.atom.perturber_window = static_cast<int>(v.integer);
       },
       [](const C& c) { return std::to_string(c.atom.perturber_window); }},
      {"atom", "gamma2", "frequency", Kind::number,
       [](C& c, const V& v) { non_negative(v.number, "gamma2"); c.atom.gamma2_hz = v.number; },
       [](const C& c) { return fmt(c.atom.gamma2_hz); }},
      {"atom", "gamma3", "frequency", Kind::number,
       [](C& c, const V& v) { non_negative(v.number, "gamma3"); c.atom.gamma3_hz = v.number; },
       [](const C& c) { return fmt(c.atom.gamma3_hz); }},
      {"atom", "gamma4", "frequency", Kind::number,
       [](C& c, const V& v) { non_negative(v.number, "gamma4"); c.atom.gamma4_hz = v.number; },
       [](const C& c) { return fmt(c.atom.gamma4_hz); }},
      {"atom", "gamma_extra", "frequency", Kind::number,
       [](C& c, const V& v) { non_negative(v.number, "gamma_extra"); c.atom.gamma_extra_hz = v.number; },
       [](const C& c) { return fmt(c.atom.gamma_extra_hz); }},
      // drives
      {"drives", "rf_frequency", "frequency", Kind::number,
       [](C& c, const V& v) { positive(v.number, "RF frequency"); c.drives.rf_frequency_hz = v.number; },
       [](const C& c) { return fmt(c.drives.rf_frequency_hz); }},
      {"drives", "rf_detuning", "frequency", Kind::number, [](C& c, const V& v) { c.drives.rf_detuning_hz = v.number; },
       [](const C& c) { return fmt(c.drives.rf_detuning_hz); }},
      {"drives", "probe_detuning", "frequency", Kind::number,
       [](C& c, const V& v) { c.drives.probe_detuning_hz = v.number; },
       [](const C& c) { return fmt(c.drives.probe_detuning_hz); }},
      {"drives", "coupling_detuning", "frequency", Kind::number,
       [](C& c, const V& v) { c.drives.coupling_detuning_hz = v.number; },
       [](const C& c) { return fmt(c.drives.coupling_detuning_hz); }},
      {"drives", "probe_rabi", "frequency", Kind::number,
       [](C& c, const V& v) { positive(v.number, "probe Rabi frequency"); c.drives.probe_rabi_hz = v.number; },
       [](const C& c) { return fmt_opt(c.drives.probe_rabi_hz); }},
      {"drives", "coupling_rabi", "frequency", Kind::number,
       [](C& c, const V& v) { non_negative(v.number, "coupling Rabi frequency"); c.drives.coupling_rabi_hz = v.number; },
       [](const C& c) { return fmt_opt(c.drives.coupling_rabi_hz); }},
      {"drives", "cw_powers", "power", Kind::number_list,
       [](C& c, const V& v) {
         if (v.list.empty()) throw ConfigError("at least one CW power is required");
         for (double p : v.list) non_negative(p, "CW power");
         c.drives.cw_powers_w = v.list;
       },
       [](const C& c) { return fmt_list(c.drives.cw_powers_w); }},
      {"drives", "scan_axis", "", Kind::text,
       [](C& c, const V& v) {
         if (v.text == "coupling") c.drives.scan_axis = spectroscopy::ScanAxis::coupling;
         else if (v.text == "probe") c.drives.scan_axis = spectroscopy::ScanAxis::probe;
         else throw ConfigError("scan axis must be 'coupling' or 'probe'");
       },
       [](const C& c) { return std::string(spectroscopy::scan_axis_name(c.drives.scan_axis)); }},
      {"drives", "scan_start", "frequency", Kind::number, [](C& c, const V& v) { c.drives.scan_start_hz = v.number; },
       [](const C& c) { return fmt(c.drives.scan_start_hz); }},
      {"drives", "scan_stop", "frequency", Kind::number, [](C& c, const V& v) { c.drives.scan_stop_hz = v.number; },
       [](const C& c) { return fmt(c.drives.scan_stop_hz); }},
      {"drives", "scan_points", "", Kind::integer,
       [](C& c, const V& v) {
         if (v.integer < 5 || v.integer > 200000) throw ConfigError("scan points must be in 5..200000");
         c.drives.scan_points = static_cast<int>(v.integer);
       },
       [](const C& c) { return std::to_string(c.drives.scan_points); }},
      // noise
      {"noise", "kind", "", Kind::text,
       [](C& c, const V& v) {
         if (v.text == "none") c.noise.kind = NoiseKind::none;
         else if (v.text == "rectangles") c.noise.kind = NoiseKind::rectangles;
         else if (v.text == "file") c.noise.kind = NoiseKind::file;
         else throw ConfigError("noise kind must be 'none', 'rectangles' or 'file'");
       },
       [](const C& c) {
         return std::string(c.noise.kind == NoiseKind::none ? "none"
                            : c.noise.kind == NoiseKind::rectangles ? "rectangles" : "file");
       }},
      {"noise", "descriptor", "", Kind::text, [](C& c, const V& v) { c.noise.descriptor = v.text; },
       [](const C& c) { return c.noise.descriptor; }},
      {"noise", "centers", "frequency", Kind::number_list,
       [](C& c, const V& v) {
         for (double f : v.list) positive(f, "band centre");
         c.noise.centers_hz = v.list;
       },
       [](const C& c) { return fmt_list(c.noise.centers_hz); }},
      {"noise", "bandwidth", "frequency", Kind::number,
       [](C& c, const V& v) { positive(v.number, "noise bandwidth"); c.noise.bandwidth_hz = v.number; },
       [](const C& c) { return fmt(c.noise.bandwidth_hz); }},
      {"noise", "total_power", "power", Kind::number,
       [](C& c, const V& v) { positive(v.number, "noise power"); c.noise.total_power_w = v.number; },
       [](const C& c) { return fmt_opt(c.noise.total_power_w); }},
      {"noise", "psd_file", "", Kind::path, [](C& c, const V& v) { c.noise.psd_file = v.text; },
       [](const C& c) { return c.noise.psd_file ? c.noise.psd_file->string() : "none"; }},
      {"noise", "attenuations", "dB", Kind::number_list,
       [](C& c, const V& v) {
         if (v.list.empty()) throw ConfigError("at least one attenuation is required");
         c.noise.attenuations_db = v.list;
       },
       [](const C& c) { return fmt_list(c.noise.attenuations_db); }},
      // geometry
      {"geometry", "distance", "length", Kind::number,
       [](C& c, const V& v) { positive(v.number, "distance"); c.geometry.distance_m = v.number; },
       [](const C& c) { return fmt(c.geometry.distance_m); }},
      {"geometry", "enhancement", "", Kind::number,
       [](C& c, const V& v) { positive(v.number, "enhancement factor"); c.geometry.enhancement = v.number; },
       [](const C& c) { return fmt(c.geometry.enhancement); }},
      {"geometry", "gain_reference", "dB", Kind::number,
       [](C& c, const V& v) { c.geometry.gain.reference_gain_db = v.number; },
       [](const C& c) { return fmt(c.geometry.gain.reference_gain_db); }},
      {"geometry", "gain_slope", "gain_slope", Kind::number,
       [](C& c, const V& v) { c.geometry.gain.slope_db_per_ghz = v.number; },
       [](const C& c) { return fmt(c.geometry.gain.slope_db_per_ghz); }},
      {"geometry", "gain_reference_frequency", "frequency", Kind::number,
       [](C& c, const V& v) {
         positive(v.number, "gain reference frequency");
         c.geometry.gain.reference_frequency_hz = v.number;
       },
       [](const C& c) { return fmt(c.geometry.gain.reference_frequency_hz); }},
      // cell
      {"cell", "length", "length", Kind::number,
       [](C& c, const V& v) { positive(v.number, "cell length"); c.cell.length_m = v.number; },
       [](const C& c) { return fmt(c.cell.length_m); }},
      {"cell", "temperature", "temperature", Kind::number,
       [](C& c, const V& v) {
         if (!(v.number > 250.0 && v.number < 450.0)) throw ConfigError("temperature must lie in 250 K - 450 K");
         c.cell.temperature_k = v.number;
       },
       [](const C& c) { return fmt(c.cell.temperature_k); }},
      {"cell", "isotope_fraction", "", Kind::number,
       [](C& c, const V& v) {
         if (!(v.number > 0.0 && v.number <= 1.0)) throw ConfigError("isotope fraction must lie in (0, 1]");
         c.cell.isotope_fraction = v.number;
       },
       [](const C& c) { return fmt(c.cell.isotope_fraction); }},
      {"cell", "probe_wavelength", "length", Kind::number,
       [](C& c, const V& v) { positive(v.number, "probe wavelength"); c.cell.probe_wavelength_m = v.number; },
       [](const C& c) { return fmt(c.cell.probe_wavelength_m); }},
      {"cell", "coupling_wavelength", "length", Kind::number,
       [](C& c, const V& v) { positive(v.number, "coupling wavelength"); c.cell.coupling_wavelength_m = v.number; },
       [](const C& c) { return fmt(c.cell.coupling_wavelength_m); }},
      {"cell", "probe_power", "power", Kind::number,
       [](C& c, const V& v) { positive(v.number, "probe power"); c.cell.probe.power_w = v.number; },
       [](const C& c) { return fmt(c.cell.probe.power_w); }},
      {"cell", "probe_fwhm", "length", Kind::number,
       [](C& c, const V& v) { positive(v.number, "probe FWHM"); c.cell.probe.fwhm_m = v.number; },
       [](const C& c) { return fmt(c.cell.probe.fwhm_m); }},
      {"cell", "coupling_power", "power", Kind::number,
       [](C& c, const V& v) { positive(v.number, "coupling power"); c.cell.coupling.power_w = v.number; },
       [](const C& c) { return fmt(c.cell.coupling.power_w); }},
      {"cell", "coupling_fwhm", "length", Kind::number,
       [](C& c, const V& v) { positive(v.number, "coupling FWHM"); c.cell.coupling.fwhm_m = v.number; },
       [](const C& c) { return fmt(c.cell.coupling.fwhm_m); }},
      // run
      {"run", "velocity_classes", "", Kind::integer,
       [](C& c, const V& v) {
         if (v.integer < 3 || v.integer % 2 == 0 || v.integer > 1000001) {
           throw ConfigError("velocity classes must be odd and in 3..1000001");
         }
         c.run.velocity.classes = static_cast<int>(v.integer);
       },
       [](const C& c) { return std::to_string(c.run.velocity.classes); }},
      {"run", "velocity_span", "thermal_speed", Kind::number,
       [](C& c, const V& v) { positive(v.number, "velocity span"); c.run.velocity.span_u = v.number; },
       [](const C& c) { return fmt(c.run.velocity.span_u); }},
      {"run", "doppler", "", Kind::boolean, [](C& c, const V& v) { c.run.velocity.doppler = v.flag; },
       [](const C& c) { return std::string(c.run.velocity.doppler ? "true" : "false"); }},
      {"run", "output_dir", "", Kind::text, [](C& c, const V& v) { c.run.output_dir = v.text; },
       [](const C& c) { return c.run.output_dir.string(); }},
      {"run", "threads", "", Kind::integer,
       [](C& c, const V& v) {
         if (v.integer < 0 || v.integer > 1024) throw ConfigError("threads must be in 0..1024");
         c.run.threads = static_cast<unsigned>(v.integer);
       },
       [](const C& c) { return std::to_string(c.run.threads); }},
      {"run", "prominence_fraction", "", Kind::number,
       [](C& c, const V& v) {
         if (!(v.number > 0.0 && v.number < 1.0)) throw ConfigError("prominence fraction must lie in (0, 1)");
         c.run.prominence_fraction = v.number;
       },
       [](const C& c) { return fmt(c.run.prominence_fraction); }},
      {"run", "velocity_check", "", Kind::boolean, [](C& c, const V& v) { c.run.velocity_check = v.flag; },
       [](const C& c) { return std::string(c.run.velocity_check ? "true" : "false"); }},
      {"run", "velocity_tolerance", "", Kind::number,
       [](C& c, const V& v) { positive(v.number, "velocity tolerance"); c.run.velocity_tolerance = v.number; },
       [](const C& c) { return fmt(c.run.velocity_tolerance); }},
      {"run", "pole_exclusion", "frequency", Kind::number,
       [](C& c, const V& v) { positive(v.number, "pole exclusion"); c.run.pole_exclusion_hz = v.number; },
       [](const C& c) { return fmt(c.run.pole_exclusion_hz); }},
      {"run", "matrix_cache", "", Kind::boolean, [](C& c, const V& v) { c.run.matrix_cache = v.flag; },
       [](const C& c) { return std::string(c.run.matrix_cache ? "true" : "false"); }},
  };
  return entries;
}

std::string key_path(std::string_view block, std::string_view key) {
  return std::string(block) + "." + std::string(key);
}

int line_of(const YAML::Node& node) { return node.Mark().line >= 0 ? node.Mark().line + 1 : 0; }

double scalar_number(const YAML::Node& node) {
  if (!node.IsScalar()) throw ConfigError("expected a number");
  return detail::parse_double(node.Scalar());
}

Value read_value(const YAML::Node& node, const Entry& e, std::string_view unit, const std::filesystem::path& base) {
  Value v;
  auto convert = [&](double x) { return e.kind.empty() ? x : to_si(x, unit, e.kind); };
  switch (e.type) {
    case Kind::number:
      v.number = convert(scalar_number(node));
      break;
    case Kind::number_list:
      if (node.IsSequence()) {
        for (const auto& item : node) v.list.push_back(convert(scalar_number(item)));
      } else {
        v.list.push_back(convert(scalar_number(node)));
      }
      break;
    case Kind::integer:
      if (!node.IsScalar()) throw ConfigError("expected an integer");
      v.integer = detail::parse_integer(node.Scalar());
      break;
    case Kind::boolean: {
      if (!node.IsScalar()) throw ConfigError("expected true or false");
      const std::string& s = node.Scalar();
      if (s == "true") v.flag = true;
      else if (s == "false") v.flag = false;
      else throw ConfigError("expected true or false");
      break;
    }
    case Kind::text:
    case Kind::state:
      if (!node.IsScalar()) throw ConfigError("expected a string");
      v.text = node.Scalar();
      break;
    case Kind::path:
      if (!node.IsScalar()) throw ConfigError("expected a file path");
      v.text = (base.empty() || std::filesystem::path(node.Scalar()).is_absolute()) ? node.Scalar()
                                                                                    : (base / node.Scalar()).string();
      break;
  }
  return v;
}

// Resolves a file key to its schema entry and unit suffix.
struct KeyMatch {
  const Entry* entry = nullptr;
  std::string unit;
  std::string error;
};

KeyMatch match_key(std::string_view block, const std::string& key) {
  KeyMatch best;
  for (const auto& e : schema()) {
    if (e.block != block) continue;
    if (key == e.name) {
      if (!e.kind.empty()) {
        return {nullptr, "", "unit mismatch: '" + key + "' needs a unit suffix (" + std::string(e.kind) + ")"};
      }
      return {&e, "", ""};
    }
    if (e.kind.empty() || key.size() <= e.name.size() + 1 || key.compare(0, e.name.size(), e.name) != 0 ||
        key[e.name.size()] != '_') {
      continue;
    }
    const std::string unit = key.substr(e.name.size() + 1);
    const UnitDef* u = find_unit(unit);
    if (!u) continue;
    if (best.entry && best.entry->name.size() >= e.name.size()) continue;
    if (u->kind != e.kind) {
      best = {nullptr, "", "unit mismatch: '" + unit + "' is not a " + std::string(e.kind) + " unit"};
      continue;
    }
    best = {&e, unit, ""};
  }
  if (!best.entry && best.error.empty()) best.error = "unknown key '" + key + "'";
  return best;
}

void cross_check(const ScenarioConfig& c, std::vector<Diagnostic>& diags) {
  auto add = [&](const std::string& path, const std::string& msg) {
    const auto it = c.provenance.find(path);
    diags.push_back({path, it == c.provenance.end() ? 0 : it->second.line, msg});
  };
  if (!(c.drives.scan_stop_hz > c.drives.scan_start_hz)) add("drives.scan_stop", "scan stop must exceed scan start");
  switch (c.noise.kind) {
    case NoiseKind::none:
      break;
    case NoiseKind::rectangles:
      if (c.noise.centers_hz.empty()) add("noise.centers", "rectangular noise needs at least one band centre");
      if (!c.noise.total_power_w) add("noise.total_power", "rectangular noise needs a total power");
      for (std::size_t i = 0; i < c.noise.centers_hz.size(); ++i) {
        for (std::size_t j = i + 1; j < c.noise.centers_hz.size(); ++j) {
          if (std::fabs(c.noise.centers_hz[i] - c.noise.centers_hz[j]) < c.noise.bandwidth_hz) {
            add("noise.centers", "noise bands overlap");
          }
        }
        if (c.noise.centers_hz[i] <= 0.5 * c.noise.bandwidth_hz) add("noise.centers", "band extends below 0 Hz");
      }
      break;
    case NoiseKind::file:
      if (!c.noise.psd_file) add("noise.psd_file", "file noise needs a psd_file");
      break;
  }
}

}  // namespace

ConfigDiagnosticsError::ConfigDiagnosticsError(std::vector<Diagnostic> diagnostics)
    : ConfigError([&] {
        std::string msg;
        for (const auto& d : diagnostics) {
          if (!msg.empty()) msg += "\n";
          msg += d.path + (d.line > 0 ? " (line " + std::to_string(d.line) + ")" : "") + ": " + d.message;
        }
        return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

double to_si(double value, std::string_view unit, std::string_view kind) {
  const UnitDef* u = find_unit(unit);
  if (!u || u->kind != kind) {
    throw ConfigError("unit '" + std::string(unit) + "' is not a " + std::string(kind) + " unit");
  }
  if (u->unit == "dBm") return noise::dbm_to_watts(value);
  return value * u->scale;
}

ScenarioConfig parse_config(std::string_view text, const std::string& source, const std::filesystem::path& base_dir) {
  ScenarioConfig cfg;
  cfg.source = source;
  cfg.text = std::string(text);
  YAML::Node root;
  try {
    root = YAML::Load(cfg.text);
  } catch (const YAML::Exception& e) {
    throw ParseError(source, e.mark.line + 1, e.msg);
  }

  std::vector<Diagnostic> diags;
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) throw ConfigDiagnosticsError({{"", 1, "top level must be a mapping of blocks"}});

  for (const auto& kv : root) {
    const std::string name = kv.first.as<std::string>();
    if (std::find(kBlocks.begin(), kBlocks.end(), name) == kBlocks.end()) {
      diags.push_back({name, line_of(kv.first), "unknown block '" + name + "'"});
    }
  }

  for (const auto block : kBlocks) {
    const YAML::Node node = root[std::string(block)];
    if (!node) {
      diags.push_back({std::string(block), 0, "missing required block '" + std::string(block) + "'"});
      continue;
    }
    if (node.IsNull()) continue;  // present but empty: all defaults
    if (!node.IsMap()) {
      diags.push_back({std::string(block), line_of(node), "block must be a mapping"});
      continue;
    }
    std::map<std::string_view, int> seen;
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      const int line = line_of(kv.first);
      const KeyMatch m = match_key(block, key);
      if (!m.entry) {
        diags.push_back({key_path(block, key), line, m.error});
        continue;
      }
      if (const auto it = seen.find(m.entry->name); it != seen.end()) {
        diags.push_back({key_path(block, key), line,
                         "'" + std::string(m.entry->name) + "' already set on line " + std::to_string(it->second)});
        continue;
      }
      seen[m.entry->name] = line;
      try {
        m.entry->set(cfg, read_value(kv.second, *m.entry, m.unit, base_dir));
        cfg.provenance[key_path(block, m.entry->name)] = {Origin::user, line};
      } catch (const std::exception& e) {
        diags.push_back({key_path(block, key), line, e.what()});
      }
    }
  }
  for (const auto& e : schema()) cfg.provenance.try_emplace(key_path(e.block, e.name));
  if (diags.empty()) cross_check(cfg, diags);
  if (!diags.empty()) throw ConfigDiagnosticsError(std::move(diags));
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string(), path.parent_path());
}

std::string describe(const ScenarioConfig& config) {
  std::string out;
  std::string_view current;
  for (const auto& e : schema()) {
    if (e.block != current) {
      out += "[" + std::string(e.block) + "]\n";
      current = e.block;
    }
    const auto& p = config.provenance.at(key_path(e.block, e.name));
    out += "  " + std::string(e.name) + " = " + e.show(config);
    if (!e.kind.empty()) out += " " + std::string(si_unit(e.kind));
    out += p.origin == Origin::user ? "  [line " + std::to_string(p.line) + "]\n" : "  [default]\n";
  }
  return out;
}

}  // namespace rydnoise::io
