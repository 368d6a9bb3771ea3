#pragma once

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <utility>
#include <vector>

#include "rydnoise/rydberg/angular.hpp"
#include "rydnoise/rydberg/quantum_defects.hpp"
#include "rydnoise/rydberg/state.hpp"
#include "rydnoise/rydberg/wavefunction.hpp"

namespace rydnoise::rydberg {

// -Ry / (n - delta)^2 in Hz, relative to the ionization limit.
double level_energy(const RydbergState& s, const QuantumDefectTable& defects);

// (E_f - E_i) / h in Hz; antisymmetric in its arguments.
double transition_frequency(const RydbergState& i, const RydbergState& f,
                            const QuantumDefectTable& defects);

struct DipoleMatrixElement {
  double radial_a0 = 0.0;
  double angular = 0.0;
  double total_ea0 = 0.0;  // radial_a0 * angular
};

struct Perturber {
  RydbergState state;
  double frequency_hz = 0.0;  // signed nu_fi = (E_f - E_i) / h
  double dipole_ea0 = 0.0;
};

// Matrix-element front end over one defect table. Radial integrals are memoized
// per (l, j) pair; the cache is shared between threads and can be disabled, and
// either way the returned values are identical.
class RydbergStructure {
 public:
  explicit RydbergStructure(QuantumDefectTable defects, RadialGrid grid = {},
                            bool cache_enabled = true);

  const QuantumDefectTable& defects() const noexcept { return defects_; }
  const RadialGrid& grid() const noexcept { return grid_; }

  double level_energy(const RydbergState& s) const { return rydberg::level_energy(s, defects_); }
  double transition_frequency(const RydbergState& i, const RydbergState& f) const {
    return rydberg::transition_frequency(i, f, defects_);
  }

  // |<f| r |i>| in a0. Throws SelectionRuleError unless |dl| = 1.
  double radial_matrix_element(const RydbergState& i, const RydbergState& f) const;

  // Radial part times the m_j-aggregated angular factor for `pol`.
  DipoleMatrixElement dipole_moment(const RydbergState& i, const RydbergState& f,
                                    const Polarization& pol) const;

  // Dipole-allowed partners of `state` with n within n_window of state.n,
  // `exclude` removed, sorted by |nu_fi| (ties by state order).
  std::vector<Perturber> enumerate_perturbers(const RydbergState& state, int n_window,
                                              const std::optional<RydbergState>& exclude,
                                              const Polarization& pol) const;

  bool cache_enabled() const noexcept { return cache_enabled_; }
  std::size_t cache_size() const;

 private:
  using Key = std::pair<RydbergState, RydbergState>;

  double compute_radial(const RydbergState& i, const RydbergState& f) const;

  QuantumDefectTable defects_;
  RadialGrid grid_;
  bool cache_enabled_;
  mutable std::shared_mutex mutex_;
  mutable std::map<Key, double> cache_;
};

}  // namespace rydnoise::rydberg
