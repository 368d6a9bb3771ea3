#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "rydnoise/constants.hpp"
#include "rydnoise/noise/couplings.hpp"

namespace rydnoise::lindblad {

// Basis ordering of the six-level model: ground, intermediate, the two
// Rydberg levels joined by the RF field, and the two fictive levels that hold
// population moved out of |3> and |4> by noise.
enum Level : int { g1 = 0, e2 = 1, r3 = 2, r4 = 3, fd = 4, fe = 5 };
inline constexpr int level_count = 6;

using cplx = std::complex<double>;
using Matrix6 = Eigen::Matrix<cplx, 6, 6>;
using Superoperator = Eigen::Matrix<cplx, 36, 36>;

// Rabi frequencies and detunings, all in rad/s. Detunings are laser minus
// atomic frequency.
struct DriveParameters {
  double probe_rabi = 0.0;
  double coupling_rabi = 0.0;
  double rf_rabi = 0.0;
  double probe_detuning = 0.0;
  double coupling_detuning = 0.0;
  double rf_detuning = 0.0;

  void validate() const;  // ConfigError on negative or non-finite values
};

// Population decay rates (1/s) and where they go, plus the noise couplings.
struct DecayParameters {
  double gamma2 = constants::two_pi * 6.07e6;
  double gamma3 = constants::two_pi * 1e4;
  double gamma4 = constants::two_pi * 1e4;
  Level gamma3_target = e2;
  Level gamma4_target = r3;
  double gamma_extra = 0.0;  // pure dephasing of |3>, |4> against the other levels
  noise::NoiseCouplings noise;

  void validate() const;  // ConfigError
};

// Counter-propagating probe and coupling beams.
struct DopplerGeometry {
  double probe_wavelength_m = 780.241e-9;
  double coupling_wavelength_m = 479.9285e-9;
};

struct JumpOperator {
  int to = 0;
  int from = 0;
  double rate = 0.0;  // L = sqrt(rate) |to><from|; to == from is unused
};

// Pure dephasing operator sqrt(2 gamma) (|3><3| + |4><4|) is handled separately.
std::vector<JumpOperator> jump_operators(const DecayParameters& decays);

// RWA ladder Hamiltonian (rad/s) for an atom moving at `velocity_m_s` along the
// probe direction. Level shifts shift3_hz/shift4_hz (positive = level moves up)
// enter as 2 pi * shift on the diagonal.
Matrix6 build_hamiltonian(const DriveParameters& drives, double shift3_hz, double shift4_hz,
                          double velocity_m_s = 0.0, const DopplerGeometry& doppler = {});

// d rho / dt for a 6x6 density matrix.
Matrix6 apply_lindbladian(const Matrix6& h, const DecayParameters& decays, const Matrix6& rho);

// Dense superoperator on row-major vec(rho) (index i * 6 + j).
Superoperator build_liouvillian(const Matrix6& h, const DecayParameters& decays);

// 6x6 density matrix with invariant checks.
class DensityMatrix {
 public:
  DensityMatrix() : rho_(Matrix6::Zero()) {}
  explicit DensityMatrix(const Matrix6& rho) : rho_(rho) {}
  static DensityMatrix ground_state();
  static DensityMatrix pure(int level);

  const Matrix6& matrix() const noexcept { return rho_; }
  cplx operator()(int i, int j) const { return rho_(i, j); }
  double population(int i) const { return rho_(i, i).real(); }
  double trace() const;
  double hermiticity_error() const;       // max |rho_ij - conj(rho_ji)|
  double min_eigenvalue() const;          // of the Hermitian part
  double fictive_coherence_max() const;   // max |rho_dx|, |rho_ex| over x != self

 private:
  Matrix6 rho_;
};

// Steady state from the dense superoperator: the trace condition replaces the
// ground-population equation and fictive levels without any exchange rate are
// pinned empty. Throws AmbiguousSteadyStateError when the constrained system is
// rank deficient.
DensityMatrix steady_state(const Superoperator& l, const DecayParameters& decays);

struct EvolveOptions {
  double rtol = 1e-10;
  double atol = 1e-13;
  double initial_step = 0.0;  // 0 = automatic
  double min_step = 1e-22;
  long max_steps = 50'000'000;
};

// Adaptive Dormand-Prince 5(4) propagation of d vec(rho)/dt = L vec(rho).
// Throws NumericalError on step-size underflow or step-limit exhaustion.
DensityMatrix time_evolve(const Superoperator& l, const DensityMatrix& rho0, double t,
                          const EvolveOptions& options = {});

// Slowest nonzero relaxation rate of L (smallest |Re lambda| among eigenvalues
// not at zero), 1/s.
double spectral_gap(const Superoperator& l);

// Steady state of the four-level model (levels 1-4 only, no fictive levels and
// no noise terms): independent 16x16 reference for the reduction check.
Eigen::Matrix4cd four_level_steady_state(const DriveParameters& drives, const DecayParameters& decays,
                                         double velocity_m_s = 0.0, const DopplerGeometry& doppler = {});

}  // namespace rydnoise::lindblad
