#include "rydnoise/rydberg/quantum_defects.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "rydnoise/constants.hpp"
#include "rydnoise/error.hpp"
#include "text_util.hpp"

namespace rydnoise::rydberg {

std::string series_label(int l, int two_j) {
  return std::string(1, orbital_letter(l)) + std::to_string(two_j) + "/2";
}

QuantumDefectTable::QuantumDefectTable(std::string species, double rydberg_constant_hz,
                                       double core_radius_a0,
                                       std::map<SeriesKey, DefectSeries> series)
    : species_(std::move(species)),
      rydberg_hz_(rydberg_constant_hz),
      core_radius_a0_(core_radius_a0),
      series_(std::move(series)) {
  if (!(rydberg_hz_ > 0.0) || !std::isfinite(rydberg_hz_)) {
    throw ConfigError("quantum-defect table: Rydberg constant must be positive");
  }
  if (!(core_radius_a0_ >= 0.0)) {
    throw ConfigError("quantum-defect table: core radius must be non-negative");
  }
  for (const auto& [key, s] : series_) {
    if (!std::isfinite(s.delta0) || !std::isfinite(s.delta2) || s.delta0 < 0.0) {
      throw ConfigError("quantum-defect table: invalid coefficients for series " +
                        series_label(key.first, key.second));
    }
  }
}

bool QuantumDefectTable::has_series(int l, int two_j) const {
  return series_.contains({l, two_j});
}

const DefectSeries& QuantumDefectTable::series_for(int l, int two_j) const {
  const auto it = series_.find({l, two_j});
  if (it == series_.end()) {
    throw ConfigError("quantum-defect table '" + species_ + "' has no series " +
                      series_label(l, two_j));
  }
  return it->second;
}

double QuantumDefectTable::quantum_defect(const RydbergState& s) const {
  const DefectSeries& d = series_for(s.l, s.two_j);
  const double m = s.n - d.delta0;
  if (!(m > 0.0)) {
    throw ConfigError("state " + s.label() + " lies below the validity range of series " +
                      series_label(s.l, s.two_j));
  }
  return d.delta0 + d.delta2 / (m * m);
}

double QuantumDefectTable::effective_n(const RydbergState& s) const {
  const double n_eff = s.n - quantum_defect(s);
  if (!(n_eff > 0.0)) {
    throw ConfigError("non-positive effective quantum number for " + s.label());
  }
  return n_eff;
}

QuantumDefectTable QuantumDefectTable::parse(std::string_view text, const std::string& source) {
  std::string species = "unnamed";
  double rydberg = 0.0;
  bool have_rydberg = false;
  double core = 0.0;
  std::map<SeriesKey, DefectSeries> series;

  int line_no = 0;
  for (const auto& raw : detail::split_lines(text)) {
    ++line_no;
    const std::string line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(source, line_no, "expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    try {
      if (key == "species") {
        species = value;
      } else if (key == "rydberg_constant_Hz") {
        rydberg = detail::parse_double(value);
        have_rydberg = true;
      } else if (key == "core_radius_a0") {
        core = detail::parse_double(value);
      } else if (key.rfind("series", 0) == 0) {
        const std::string label = detail::trim(key.substr(6));
        // Reuse the state parser by prefixing a dummy n large enough for any l.
        const RydbergState probe = parse_state("99" + label);
        const auto fields = detail::split(value, ',');
        if (fields.size() != 2) throw ConfigError("series needs 'delta0, delta2'");
        const DefectSeries s{detail::parse_double(fields[0]), detail::parse_double(fields[1])};
        if (!series.emplace(SeriesKey{probe.l, probe.two_j}, s).second) {
          throw ConfigError("duplicate series " + label);
        }
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& ex) {
      throw ParseError(source, line_no, ex.what());
    }
  }
  if (!have_rydberg) throw ParseError(source, line_no, "missing rydberg_constant_Hz");
  return QuantumDefectTable(species, rydberg, core, std::move(series));
}

QuantumDefectTable QuantumDefectTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open quantum-defect table " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

QuantumDefectTable QuantumDefectTable::rubidium85() {
  using constants::electron_mass_u;
  using constants::rb85_mass_u;
  // Li et al. PRA 67, 052502 (S, P, D); Han et al. PRA 74, 054502 (F).
  std::map<SeriesKey, DefectSeries> s{
      {{0, 1}, {3.1311804, 0.1784}},   {{1, 1}, {2.6548849, 0.2900}},
      {{1, 3}, {2.6416737, 0.2950}},   {{2, 3}, {1.34809171, -0.60286}},
      {{2, 5}, {1.34646572, -0.59600}}, {{3, 5}, {0.0165192, -0.085}},
      {{3, 7}, {0.0165437, -0.086}},
  };
  const double ry = constants::rydberg_infinity_hz / (1.0 + electron_mass_u / rb85_mass_u);
  // Cube root of the Rb+ core dipole polarizability (9.0760 a0^3).
  return QuantumDefectTable("Rb85", ry, 2.0860, std::move(s));
}

QuantumDefectTable QuantumDefectTable::hydrogen(int l_max) {
  std::map<SeriesKey, DefectSeries> s;
  for (int l = 0; l <= l_max; ++l) {
    if (l > 0) s[{l, 2 * l - 1}] = {};
    s[{l, 2 * l + 1}] = {};
  }
  constexpr double proton_mass_u = 1.007276466621;
  const double ry = constants::rydberg_infinity_hz / (1.0 + constants::electron_mass_u / proton_mass_u);
  return QuantumDefectTable("H", ry, 0.0, std::move(s));
}

std::string QuantumDefectTable::to_text() const {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "species = " << species_ << "\n";
  out << "rydberg_constant_Hz = " << rydberg_hz_ << "\n";
  out << "core_radius_a0 = " << core_radius_a0_ << "\n";
  for (const auto& [key, s] : series_) {
    out << "series " << series_label(key.first, key.second) << " = " << s.delta0 << ", "
        << s.delta2 << "\n";
  }
  return out.str();
}

}  // namespace rydnoise::rydberg
