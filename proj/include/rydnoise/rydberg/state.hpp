#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace rydnoise::rydberg {

// An alkali level |n, l, j> with an optional magnetic sublevel. Half-integer
// quantum numbers are stored doubled (two_j = 2j) so comparisons are exact.
struct RydbergState {
  int n = 0;
  int l = 0;
  int two_j = 1;
  std::optional<int> two_mj;

  double j() const noexcept { return 0.5 * two_j; }

  // "57S1/2", "57P3/2"; sublevel appended as " mj=1/2" when present.
  std::string label() const;

  friend bool operator==(const RydbergState&, const RydbergState&) = default;
  friend auto operator<=>(const RydbergState&, const RydbergState&) = default;
};

// Validating constructor: l < n, j = l +- 1/2 (j = 1/2 for l = 0), |mj| <= j.
// Throws std::invalid_argument.
RydbergState make_state(int n, int l, double j, std::optional<double> mj = std::nullopt);

// Parses labels such as "57S1/2", "56D5/2", "30p3/2". Throws std::invalid_argument.
RydbergState parse_state(std::string_view text);

// Spectroscopic letter for l (S, P, D, F, G, H, I, K, ...).
char orbital_letter(int l);

}  // namespace rydnoise::rydberg
