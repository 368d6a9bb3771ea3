#pragma once

#include <vector>

namespace rydnoise::rydberg {

// Radial grid for the Numerov solver. The solver works in x = sqrt(r / a0) on
// the lattice x_k = k * step, so any two wavefunctions built with the same step
// share grid points and can be multiplied pointwise.
struct RadialGrid {
  double step = 0.01;
  // Inward integration starts at outer_turning_factor * r_outer_turning_point
  // plus outer_decay_lengths * n_eff (one decay length of the bound tail is
  // n_eff a0). The second term matters only for low n.
  double outer_turning_factor = 2.0;
  double outer_decay_lengths = 20.0;
};

// u(r) = r R(r) represented as u(r) = x^(1/2) w(x), normalized so that
// integral u^2 dr = 1 over the integrated range.
class RadialWavefunction {
 public:
  RadialWavefunction(double step, long first_index, std::vector<double> w);

  double step() const noexcept { return step_; }
  long first_index() const noexcept { return first_; }
  long last_index() const noexcept { return first_ + static_cast<long>(w_.size()) - 1; }
  double x(long k) const noexcept { return step_ * static_cast<double>(k); }
  double w(long k) const { return w_.at(static_cast<std::size_t>(k - first_)); }
  const std::vector<double>& samples() const noexcept { return w_; }

  // u at radius r (a0); zero outside the integrated range.
  double u_at(double r_a0) const;

 private:
  double step_;
  long first_;
  std::vector<double> w_;
};

// Inward Numerov solution of the radial equation in the pure Coulomb potential
// with energy -1/(2 n_eff^2) hartree. Integration stops at inner_radius_a0 (at
// least one grid step) and, for l > 0, at the point inside the inner turning
// point where the solution starts to diverge.
RadialWavefunction solve_coulomb_radial(double n_eff, int l, double inner_radius_a0,
                                        const RadialGrid& grid = {});

// Signed integral u_a(r) u_b(r) r dr in units of a0. Both must share the step.
double radial_r_integral(const RadialWavefunction& a, const RadialWavefunction& b);

// Integral u^2 dr; 1 for solver output.
double radial_norm(const RadialWavefunction& a);

}  // namespace rydnoise::rydberg
