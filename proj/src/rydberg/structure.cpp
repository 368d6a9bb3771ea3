#include "rydnoise/rydberg/structure.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "rydnoise/error.hpp"

namespace rydnoise::rydberg {

double level_energy(const RydbergState& s, const QuantumDefectTable& defects) {
  const double n_eff = defects.effective_n(s);
  return -defects.rydberg_constant_hz() / (n_eff * n_eff);
}

double transition_frequency(const RydbergState& i, const RydbergState& f,
                            const QuantumDefectTable& defects) {
  if (i.n == f.n && i.l == f.l && i.two_j == f.two_j) return 0.0;
  return level_energy(f, defects) - level_energy(i, defects);
}

RydbergStructure::RydbergStructure(QuantumDefectTable defects, RadialGrid grid,
                                   bool cache_enabled)
    : defects_(std::move(defects)), grid_(grid), cache_enabled_(cache_enabled) {}

namespace {
RydbergState strip_mj(RydbergState s) {
  s.two_mj.reset();
  return s;
}
}  // namespace

double RydbergStructure::compute_radial(const RydbergState& i, const RydbergState& f) const {
  const auto wi = solve_coulomb_radial(defects_.effective_n(i), i.l, defects_.core_radius_a0(), grid_);
  const auto wf = solve_coulomb_radial(defects_.effective_n(f), f.l, defects_.core_radius_a0(), grid_);
  return std::fabs(radial_r_integral(wi, wf));
}

double RydbergStructure::radial_matrix_element(const RydbergState& i, const RydbergState& f) const {
  if (std::abs(i.l - f.l) != 1) {
    throw SelectionRuleError("radial matrix element " + i.label() + " -> " + f.label() +
                             " requires |dl| = 1");
  }
  // Symmetric in argument order: key on the ordered pair.
  auto a = strip_mj(i);
  auto b = strip_mj(f);
  if (b < a) std::swap(a, b);
  if (!cache_enabled_) return compute_radial(a, b);

  const Key key{a, b};
  {
    std::shared_lock lock(mutex_);
    const auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  const double value = compute_radial(a, b);
  std::unique_lock lock(mutex_);
  cache_.emplace(key, value);
  return value;
}

DipoleMatrixElement RydbergStructure::dipole_moment(const RydbergState& i, const RydbergState& f,
                                                    const Polarization& pol) const {
  if (!dipole_allowed(i, f)) {
    throw SelectionRuleError("dipole transition " + i.label() + " -> " + f.label() +
                             " violates electric-dipole selection rules");
  }
  DipoleMatrixElement d;
  d.radial_a0 = radial_matrix_element(i, f);
  d.angular = angular_factor(i, f, pol);
  d.total_ea0 = d.radial_a0 * d.angular;
  return d;
}

std::vector<Perturber> RydbergStructure::enumerate_perturbers(
    const RydbergState& state, int n_window, const std::optional<RydbergState>& exclude,
    const Polarization& pol) const {
  if (n_window < 0) throw std::invalid_argument("perturber window must be non-negative");
  std::vector<Perturber> out;
  const RydbergState excluded = exclude ? strip_mj(*exclude) : RydbergState{};
  for (int n = std::max(1, state.n - n_window); n <= state.n + n_window; ++n) {
    for (int l : {state.l - 1, state.l + 1}) {
      if (l < 0 || l >= n) continue;
      for (int two_j : {2 * l - 1, 2 * l + 1}) {
        if (two_j < 1 || std::abs(two_j - state.two_j) > 2) continue;
        const RydbergState f{n, l, two_j, std::nullopt};
        if (exclude && f == excluded) continue;
        Perturber p;
        p.state = f;
        p.frequency_hz = transition_frequency(state, f);
        p.dipole_ea0 = dipole_moment(state, f, pol).total_ea0;
        if (p.dipole_ea0 == 0.0) continue;
        out.push_back(p);
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Perturber& a, const Perturber& b) {
    return std::fabs(a.frequency_hz) < std::fabs(b.frequency_hz);
  });
  return out;
}

std::size_t RydbergStructure::cache_size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

}  // namespace rydnoise::rydberg
