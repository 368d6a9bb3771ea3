#include "rydnoise/rydberg/state.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace rydnoise::rydberg {

namespace {
constexpr std::string_view kLetters = "SPDFGHIKLMNOQRTUV";

int to_twice(double v, const char* what) {
  const double twice = 2.0 * v;
  const double rounded = std::round(twice);
  if (std::fabs(twice - rounded) > 1e-9) {
    throw std::invalid_argument(std::string(what) + " must be a multiple of 1/2");
  }
  return static_cast<int>(rounded);
}
}  // namespace

char orbital_letter(int l) {
  if (l < 0 || l >= static_cast<int>(kLetters.size())) {
    throw std::invalid_argument("orbital angular momentum out of range: " + std::to_string(l));
  }
  return kLetters[static_cast<std::size_t>(l)];
}

std::string RydbergState::label() const {
  std::string s = std::to_string(n) + orbital_letter(l) + std::to_string(two_j) + "/2";
  if (two_mj) s += " mj=" + std::to_string(*two_mj) + "/2";
  return s;
}

RydbergState make_state(int n, int l, double j, std::optional<double> mj) {
  if (n < 1) throw std::invalid_argument("principal quantum number must be >= 1");
  if (l < 0 || l >= n) throw std::invalid_argument("orbital quantum number must satisfy 0 <= l < n");
  const int two_j = to_twice(j, "j");
  if (two_j != 2 * l + 1 && two_j != 2 * l - 1) {
    throw std::invalid_argument("j must equal l +- 1/2");
  }
  RydbergState s{n, l, two_j, std::nullopt};
  if (mj) {
    const int two_mj = to_twice(*mj, "mj");
    if (std::abs(two_mj) > two_j || (two_mj - two_j) % 2 != 0) {
      throw std::invalid_argument("mj must satisfy |mj| <= j in integer steps from j");
    }
    s.two_mj = two_mj;
  }
  return s;
}

RydbergState parse_state(std::string_view text) {
  auto fail = [&] { throw std::invalid_argument("cannot parse state label '" + std::string(text) + "'"); };
  std::size_t pos = 0;
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  int n = 0;
  auto [p1, ec1] = std::from_chars(text.data() + pos, text.data() + text.size(), n);
  if (ec1 != std::errc{}) fail();
  pos = static_cast<std::size_t>(p1 - text.data());
  if (pos >= text.size()) fail();
  const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(text[pos])));
  const auto l = kLetters.find(letter);
  if (l == std::string_view::npos) fail();
  ++pos;
  int two_j = 0;
  auto [p2, ec2] = std::from_chars(text.data() + pos, text.data() + text.size(), two_j);
  if (ec2 != std::errc{}) fail();
  pos = static_cast<std::size_t>(p2 - text.data());
  if (text.substr(pos, 2) != "/2") fail();
  pos += 2;
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size()) fail();
  return make_state(n, static_cast<int>(l), 0.5 * two_j);
}

}  // namespace rydnoise::rydberg
