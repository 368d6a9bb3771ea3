#pragma once

#include <array>
#include <span>

#include "rydnoise/lindblad/model.hpp"

namespace rydnoise::lindblad {

// One (probe detuning, coupling detuning, velocity) cell of a scan.
struct ScanPoint {
  double probe_detuning = 0.0;     // rad/s
  double coupling_detuning = 0.0;  // rad/s
  double velocity_m_s = 0.0;
};

// Production steady-state solver.
//
// Fictive-level coherences are identically zero, so the state is carried as 18
// real unknowns: six populations and the real and imaginary parts of the six
// coherences among levels 1-4. The real system matrix is affine in the three
// diagonal Hamiltonian entries, M = M0 + h2 A2 + h3 A3 + h4 A4, so a scan only
// re-assembles and solves; solves run batch_width scan points at a time through
// the SIMD batched elimination. The trace condition replaces the ground
// population equation; a fictive level with no exchange rate is pinned empty.
class SteadyStateEngine {
 public:
  static constexpr int unknowns = 18;

  // Rabi frequencies and the RF detuning are taken from `drives`; the probe and
  // coupling detunings come from each ScanPoint.
  SteadyStateEngine(const DriveParameters& drives, const DecayParameters& decays,
                    const DopplerGeometry& doppler = {});

  // rho_21 (the probe coherence) for every point.
  void probe_coherence(std::span<const ScanPoint> points, std::span<cplx> rho21) const;

  // Full density matrix for a single point.
  DensityMatrix solve(const ScanPoint& point) const;

 private:
  using Dense = std::array<double, unknowns * unknowns>;

  // Solves up to batch_width points; x receives unknowns * batch_width values (SoA).
  void solve_lanes(std::span<const ScanPoint> points, std::span<double> x) const;

  DriveParameters drives_;
  DecayParameters decays_;
  DopplerGeometry doppler_;
  Dense m0_{};
  std::array<Dense, 3> a_{};  // dM / dh_k for k = 2, 3, 4
  double trace_scale_ = 1.0;
};

}  // namespace rydnoise::lindblad
