#pragma once

// Randomized six-level configurations for solver cross-checks. Rydberg decay
// and exchange rates are raised to the MHz scale and the probe is kept near
// resonance so that every mode relaxes within ~10 us and long-time propagation
// stays cheap; the algebra being checked does not depend on these magnitudes.

#include <random>

#include "rydnoise/constants.hpp"
#include "rydnoise/lindblad/model.hpp"

namespace rydnoise::testing {

struct RandomConfig {
  lindblad::DriveParameters drives;
  lindblad::DecayParameters decays;
  double velocity_m_s = 0.0;
};

inline RandomConfig random_config(std::mt19937_64& rng, bool with_noise = true) {
  using constants::two_pi;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto mhz = [&](double lo, double hi) { return two_pi * 1e6 * (lo + (hi - lo) * u(rng)); };
  RandomConfig c;
  c.drives.probe_rabi = mhz(2.0, 5.0);
  c.drives.coupling_rabi = mhz(1.0, 20.0);
  c.drives.rf_rabi = u(rng) < 0.2 ? 0.0 : mhz(1.0, 30.0);
  c.drives.probe_detuning = mhz(-5.0, 5.0);
  c.drives.coupling_detuning = mhz(-20.0, 20.0);
  c.drives.rf_detuning = mhz(-10.0, 10.0);
  c.decays.gamma3 = mhz(0.2, 2.0);
  c.decays.gamma4 = mhz(0.2, 2.0);
  c.decays.gamma_extra = u(rng) < 0.5 ? 0.0 : mhz(0.0, 2.0);
  if (with_noise) {
    c.decays.noise.rd3 = u(rng) < 0.25 ? 0.0 : mhz(0.5, 10.0);
    c.decays.noise.re4 = u(rng) < 0.25 ? 0.0 : mhz(0.5, 10.0);
    c.decays.noise.r34 = u(rng) < 0.5 ? 0.0 : mhz(0.5, 10.0);
    c.decays.noise.shift3_hz = 1e6 * (-20.0 + 40.0 * u(rng));
    c.decays.noise.shift4_hz = 1e6 * (-20.0 + 40.0 * u(rng));
  }
  c.velocity_m_s = -10.0 + 20.0 * u(rng);
  return c;
}

}  // namespace rydnoise::testing
