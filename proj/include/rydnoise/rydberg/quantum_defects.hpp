#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "rydnoise/rydberg/state.hpp"

namespace rydnoise::rydberg {

// Rydberg-Ritz coefficients: delta(n) = delta0 + delta2 / (n - delta0)^2.
struct DefectSeries {
  double delta0 = 0.0;
  double delta2 = 0.0;
};

// Immutable per-species quantum-defect data.
//
// Text format (one entry per line, '#' starts a comment):
//
//   species = Rb85
//   rydberg_constant_Hz = 3.28982070e15
//   core_radius_a0 = 2.086
//   series S1/2 = 3.1311804, 0.1784
//   series P1/2 = 2.6548849, 0.2900
//
// Series labels are an orbital letter followed by j. Series not listed are
// absent; asking for them raises ConfigError.
class QuantumDefectTable {
 public:
  using SeriesKey = std::pair<int, int>;  // (l, 2j)

  QuantumDefectTable(std::string species, double rydberg_constant_hz, double core_radius_a0,
                     std::map<SeriesKey, DefectSeries> series);

  static QuantumDefectTable parse(std::string_view text, const std::string& source = "<string>");
  static QuantumDefectTable load(const std::filesystem::path& path);

  // Shipped defaults for 85Rb (S, P, D, F series; mass-corrected Rydberg constant).
  static QuantumDefectTable rubidium85();
  // Defect-free table with the hydrogen Rydberg constant, series up to l_max.
  static QuantumDefectTable hydrogen(int l_max = 6);

  const std::string& species() const noexcept { return species_; }
  double rydberg_constant_hz() const noexcept { return rydberg_hz_; }
  double core_radius_a0() const noexcept { return core_radius_a0_; }
  const std::map<SeriesKey, DefectSeries>& series() const noexcept { return series_; }

  bool has_series(int l, int two_j) const;
  const DefectSeries& series_for(int l, int two_j) const;  // throws ConfigError

  double quantum_defect(const RydbergState& s) const;
  double effective_n(const RydbergState& s) const;  // n - delta(n)

  std::string to_text() const;

 private:
  std::string species_;
  double rydberg_hz_;
  double core_radius_a0_;
  std::map<SeriesKey, DefectSeries> series_;
};

std::string series_label(int l, int two_j);

}  // namespace rydnoise::rydberg
