#include "rydnoise/lindblad/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rydnoise/error.hpp"
#include "rydnoise/simd/kernels.hpp"

namespace rydnoise::lindblad {

namespace c = constants;

namespace {

constexpr int n_unknowns = SteadyStateEngine::unknowns;
constexpr std::array<std::array<int, 2>, 6> kPairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
constexpr int kPopulations = 6;

// Hermitian basis matrix for unknown k.
Matrix6 basis_matrix(int k) {
  Matrix6 b = Matrix6::Zero();
  if (k < kPopulations) {
    b(k, k) = 1.0;
    return b;
  }
  const auto [i, j] = kPairs[static_cast<std::size_t>((k - kPopulations) / 2)];
  if ((k - kPopulations) % 2 == 0) {
    b(i, j) = 1.0;
    b(j, i) = 1.0;
  } else {
    b(i, j) = cplx(0.0, 1.0);
    b(j, i) = cplx(0.0, -1.0);
  }
  return b;
}

// Real components of a Hermitian matrix in the same ordering as the unknowns.
std::array<double, n_unknowns> components(const Matrix6& m) {
  std::array<double, n_unknowns> out{};
  for (int i = 0; i < kPopulations; ++i) out[static_cast<std::size_t>(i)] = m(i, i).real();
  for (std::size_t q = 0; q < kPairs.size(); ++q) {
    const cplx v = m(kPairs[q][0], kPairs[q][1]);
    out[kPopulations + 2 * q] = v.real();
    out[kPopulations + 2 * q + 1] = v.imag();
  }
  return out;
}

}  // namespace

SteadyStateEngine::SteadyStateEngine(const DriveParameters& drives, const DecayParameters& decays,
                                     const DopplerGeometry& doppler)
    : drives_(drives), decays_(decays), doppler_(doppler) {
  drives_.validate();
  decays_.validate();

  DriveParameters off_diagonal = drives_;
  off_diagonal.probe_detuning = off_diagonal.coupling_detuning = off_diagonal.rf_detuning = 0.0;
  const Matrix6 h0 = build_hamiltonian(off_diagonal, 0.0, 0.0);

  const cplx minus_i(0.0, -1.0);
  for (int k = 0; k < n_unknowns; ++k) {
    const Matrix6 b = basis_matrix(k);
    const auto col0 = components(apply_lindbladian(h0, decays_, b));
    for (int r = 0; r < n_unknowns; ++r) m0_[static_cast<std::size_t>(r * n_unknowns + k)] = col0[static_cast<std::size_t>(r)];
    for (int d = 0; d < 3; ++d) {
      const int level = d + 1;
      // -i [E_ll, B]
      Matrix6 comm = Matrix6::Zero();
      comm.row(level) += b.row(level);
      comm.col(level) -= b.col(level);
      const auto col = components(minus_i * comm);
      for (int r = 0; r < n_unknowns; ++r) a_[d][static_cast<std::size_t>(r * n_unknowns + k)] = col[static_cast<std::size_t>(r)];
    }
  }

  // Row replacements, scaled to the size of the other equations.
  double scale = 1.0;
  for (double v : m0_) scale = std::max(scale, std::fabs(v));
  auto replace_row = [&](int r, int diag_col) {
    for (int k = 0; k < n_unknowns; ++k) {
      m0_[static_cast<std::size_t>(r * n_unknowns + k)] = 0.0;
      for (auto& a : a_) a[static_cast<std::size_t>(r * n_unknowns + k)] = 0.0;
    }
    if (diag_col >= 0) m0_[static_cast<std::size_t>(r * n_unknowns + diag_col)] = scale;
  };
  if (!(decays_.noise.rd3 > 0.0)) replace_row(fd, fd);
  if (!(decays_.noise.re4 > 0.0)) replace_row(fe, fe);
  replace_row(g1, -1);
  for (int k = 0; k < kPopulations; ++k) m0_[static_cast<std::size_t>(k)] = scale;
  trace_scale_ = scale;
}

void SteadyStateEngine::solve_lanes(std::span<const ScanPoint> points, std::span<double> x) const {
  constexpr int w = simd::batch_width;
  alignas(32) std::array<double, n_unknowns * n_unknowns * w> a;
  const double kp = c::two_pi / doppler_.probe_wavelength_m;
  const double kc = c::two_pi / doppler_.coupling_wavelength_m;
  std::array<std::array<double, 3>, w> h{};
  for (int l = 0; l < w; ++l) {
    const ScanPoint& p = points[static_cast<std::size_t>(std::min<int>(l, static_cast<int>(points.size()) - 1))];
    const double dp = p.probe_detuning - kp * p.velocity_m_s;
    const double dc = p.coupling_detuning + kc * p.velocity_m_s;
    h[l][0] = -dp;
    h[l][1] = -(dp + dc) + c::two_pi * decays_.noise.shift3_hz;
    h[l][2] = -(dp + dc + drives_.rf_detuning) + c::two_pi * decays_.noise.shift4_hz;
  }
  for (std::size_t e = 0; e < m0_.size(); ++e) {
    for (int l = 0; l < w; ++l) {
      a[e * w + l] = m0_[e] + h[l][0] * a_[0][e] + h[l][1] * a_[1][e] + h[l][2] * a_[2][e];
    }
  }
  std::fill(x.begin(), x.end(), 0.0);
  for (int l = 0; l < w; ++l) x[static_cast<std::size_t>(g1 * w + l)] = trace_scale_;
  const auto singular = simd::solve_batch(a, x, n_unknowns, 1e-14);
  for (int l = 0; l < w && l < static_cast<int>(points.size()); ++l) {
    if (singular[l]) throw AmbiguousSteadyStateError("steady-state system is singular at a scan point");
  }
}

void SteadyStateEngine::probe_coherence(std::span<const ScanPoint> points, std::span<cplx> rho21) const {
  if (rho21.size() != points.size()) throw std::invalid_argument("output size mismatch");
  constexpr int w = simd::batch_width;
  alignas(32) std::array<double, n_unknowns * w> x;
  for (std::size_t start = 0; start < points.size(); start += w) {
    const auto chunk = points.subspan(start, std::min<std::size_t>(w, points.size() - start));
    solve_lanes(chunk, x);
    for (std::size_t l = 0; l < chunk.size(); ++l) {
      // rho_12 = re + i im, rho_21 = conj.
      rho21[start + l] = cplx(x[kPopulations * w + l], -x[(kPopulations + 1) * w + l]);
    }
  }
}

DensityMatrix SteadyStateEngine::solve(const ScanPoint& point) const {
  constexpr int w = simd::batch_width;
  alignas(32) std::array<double, n_unknowns * w> x;
  solve_lanes(std::span(&point, 1), x);
  Matrix6 rho = Matrix6::Zero();
  for (int i = 0; i < kPopulations; ++i) rho(i, i) = x[static_cast<std::size_t>(i * w)];
  for (std::size_t q = 0; q < kPairs.size(); ++q) {
    const cplx v(x[(kPopulations + 2 * q) * w], x[(kPopulations + 2 * q + 1) * w]);
    rho(kPairs[q][0], kPairs[q][1]) = v;
    rho(kPairs[q][1], kPairs[q][0]) = std::conj(v);
  }
  return DensityMatrix(rho);
}

}  // namespace rydnoise::lindblad
