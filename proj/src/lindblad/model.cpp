#include "rydnoise/lindblad/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "rydnoise/error.hpp"

namespace rydnoise::lindblad {

namespace c = constants;

void DriveParameters::validate() const {
  for (double v : {probe_rabi, coupling_rabi, rf_rabi}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("Rabi frequencies must be finite and non-negative");
  }
  for (double v : {probe_detuning, coupling_detuning, rf_detuning}) {
    if (!std::isfinite(v)) throw ConfigError("detunings must be finite");
  }
}

void DecayParameters::validate() const {
  for (double v : {gamma2, gamma3, gamma4, gamma_extra}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("decay rates must be finite and non-negative");
  }
  auto below = [](Level target, Level from) { return static_cast<int>(target) < static_cast<int>(from); };
  if (!below(gamma3_target, r3) || !below(gamma4_target, r4)) {
    throw ConfigError("Rydberg decays must go to a lower level of the ladder");
  }
  noise.validate();
}

std::vector<JumpOperator> jump_operators(const DecayParameters& d) {
  std::vector<JumpOperator> ops;
  auto add = [&](int to, int from, double rate) {
    if (rate > 0.0) ops.push_back({to, from, rate});
  };
  add(g1, e2, d.gamma2);
  add(d.gamma3_target, r3, d.gamma3);
  add(d.gamma4_target, r4, d.gamma4);
  add(fd, r3, d.noise.rd3);
  add(r3, fd, d.noise.rd3);
  add(fe, r4, d.noise.re4);
  add(r4, fe, d.noise.re4);
  add(r4, r3, d.noise.r34);
  add(r3, r4, d.noise.r34);
  return ops;
}

Matrix6 build_hamiltonian(const DriveParameters& drives, double shift3_hz, double shift4_hz,
                          double velocity_m_s, const DopplerGeometry& doppler) {
  const double kp = c::two_pi / doppler.probe_wavelength_m;
  const double kc = c::two_pi / doppler.coupling_wavelength_m;
  const double dp = drives.probe_detuning - kp * velocity_m_s;
  const double dc = drives.coupling_detuning + kc * velocity_m_s;
  Matrix6 h = Matrix6::Zero();
  h(e2, e2) = -dp;
  h(r3, r3) = -(dp + dc) + c::two_pi * shift3_hz;
  h(r4, r4) = -(dp + dc + drives.rf_detuning) + c::two_pi * shift4_hz;
  h(g1, e2) = h(e2, g1) = 0.5 * drives.probe_rabi;
  h(e2, r3) = h(r3, e2) = 0.5 * drives.coupling_rabi;
  h(r3, r4) = h(r4, r3) = 0.5 * drives.rf_rabi;
  return h;
}

Matrix6 apply_lindbladian(const Matrix6& h, const DecayParameters& decays, const Matrix6& rho) {
  const cplx minus_i(0.0, -1.0);
  Matrix6 out = minus_i * (h * rho - rho * h);
  for (const auto& j : jump_operators(decays)) {
    // L rho L^dag = rate rho_ff |t><t|;  L^dag L = rate |f><f|.
    out(j.to, j.to) += j.rate * rho(j.from, j.from);
    for (int k = 0; k < level_count; ++k) {
      out(j.from, k) -= 0.5 * j.rate * rho(j.from, k);
      out(k, j.from) -= 0.5 * j.rate * rho(k, j.from);
    }
  }
  if (decays.gamma_extra > 0.0) {
    // sqrt(2 gamma) P with P = |3><3| + |4><4|: off-diagonal blocks between P
    // and its complement decay at gamma.
    auto in_p = [](int k) { return k == r3 || k == r4; };
    for (int a = 0; a < level_count; ++a)
      for (int b = 0; b < level_count; ++b)
        if (in_p(a) != in_p(b)) out(a, b) -= decays.gamma_extra * rho(a, b);
  }
  return out;
}

Superoperator build_liouvillian(const Matrix6& h, const DecayParameters& decays) {
  decays.validate();
  Superoperator l;
  for (int k = 0; k < level_count; ++k) {
    for (int m = 0; m < level_count; ++m) {
      Matrix6 basis = Matrix6::Zero();
      basis(k, m) = 1.0;
      const Matrix6 col = apply_lindbladian(h, decays, basis);
      for (int i = 0; i < level_count; ++i)
        for (int j = 0; j < level_count; ++j) l(i * level_count + j, k * level_count + m) = col(i, j);
    }
  }
  return l;
}

DensityMatrix DensityMatrix::ground_state() { return pure(g1); }

DensityMatrix DensityMatrix::pure(int level) {
  Matrix6 m = Matrix6::Zero();
  m(level, level) = 1.0;
  return DensityMatrix(m);
}

double DensityMatrix::trace() const { return rho_.trace().real(); }

double DensityMatrix::hermiticity_error() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const Matrix6 herm = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix6> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double DensityMatrix::fictive_coherence_max() const {
  double m = 0.0;
  for (int f : {static_cast<int>(fd), static_cast<int>(fe)})
    for (int k = 0; k < level_count; ++k) {
      if (k == f) continue;
      m = std::max({m, std::abs(rho_(f, k)), std::abs(rho_(k, f))});
    }
  return m;
}

DensityMatrix steady_state(const Superoperator& l, const DecayParameters& decays) {
  constexpr int n = level_count * level_count;
  Superoperator a = l;
  Eigen::Matrix<cplx, n, 1> b = Eigen::Matrix<cplx, n, 1>::Zero();
  const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());

  auto pin_level = [&](int f) {
    for (int k = 0; k < level_count; ++k) {
      for (int idx : {f * level_count + k, k * level_count + f}) {
        a.row(idx).setZero();
        a(idx, idx) = scale;
        b(idx) = 0.0;
      }
    }
  };
  if (!(decays.noise.rd3 > 0.0)) pin_level(fd);
  if (!(decays.noise.re4 > 0.0)) pin_level(fe);

  // Trace condition replaces the rho_11 equation.
  a.row(0).setZero();
  for (int k = 0; k < level_count; ++k) a(0, k * level_count + k) = scale;
  b(0) = scale;

  Eigen::FullPivLU<Superoperator> lu(a);
  lu.setThreshold(1e-13);
  if (lu.rank() < n) {
    throw AmbiguousSteadyStateError("steady state is not unique (null space dimension > 1)");
  }
  const Eigen::Matrix<cplx, n, 1> x = lu.solve(b);
  Matrix6 rho;
  for (int i = 0; i < level_count; ++i)
    for (int j = 0; j < level_count; ++j) rho(i, j) = x(i * level_count + j);
  // Symmetrize away solver round-off.
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(rho);
}

DensityMatrix time_evolve(const Superoperator& l, const DensityMatrix& rho0, double t,
                          const EvolveOptions& opt) {
  using Vec = Eigen::Matrix<cplx, 36, 1>;
  if (!(t >= 0.0)) throw std::invalid_argument("evolution time must be non-negative");
  Vec y;
  for (int i = 0; i < level_count; ++i)
    for (int j = 0; j < level_count; ++j) y(i * level_count + j) = rho0(i, j);
  if (t == 0.0 || l.isZero(0.0)) return rho0;

  // Dormand-Prince 5(4) tableau (autonomous system, so the nodes c_i are unused).
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double norm_l = l.cwiseAbs().rowwise().sum().maxCoeff();
  double step = opt.initial_step > 0.0 ? opt.initial_step : std::min(t, 0.1 / norm_l);
  double time = 0.0;
  Vec k1 = l * y;
  long steps = 0;
  while (time < t) {
    if (++steps > opt.max_steps) throw NumericalError("time evolution exceeded the step limit");
    if (step < opt.min_step) throw NumericalError("time evolution step size underflow");
    const double hstep = std::min(step, t - time);
    const Vec k2 = l * (y + hstep * (a21 * k1));
    const Vec k3 = l * (y + hstep * (a31 * k1 + a32 * k2));
    const Vec k4 = l * (y + hstep * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec k5 = l * (y + hstep * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec k6 = l * (y + hstep * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vec y_new = y + hstep * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec k7 = l * y_new;
    const Vec err = hstep * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err_norm = 0.0;
    for (int i = 0; i < 36; ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y(i)), std::abs(y_new(i)));
      err_norm = std::max(err_norm, std::abs(err(i)) / sc);
    }
    if (err_norm <= 1.0) {
      time += hstep;
      y = y_new;
      k1 = k7;
    }
    const double factor = err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
    step = hstep * factor;
  }
  Matrix6 rho;
  for (int i = 0; i < level_count; ++i)
    for (int j = 0; j < level_count; ++j) rho(i, j) = y(i * level_count + j);
  return DensityMatrix(rho);
}

double spectral_gap(const Superoperator& l) {
  Eigen::ComplexEigenSolver<Superoperator> es(l, false);
  const auto& ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= 1e-9 * scale) continue;
    gap = std::min(gap, std::fabs(ev(i).real()));
  }
  return gap;
}

Eigen::Matrix4cd four_level_steady_state(const DriveParameters& drives, const DecayParameters& decays,
                                         double velocity_m_s, const DopplerGeometry& doppler) {
  // Written out independently of the six-level builder: Hamiltonian, natural
  // decays and dephasing only.
  const double kp = c::two_pi / doppler.probe_wavelength_m;
  const double kc = c::two_pi / doppler.coupling_wavelength_m;
  const double dp = drives.probe_detuning - kp * velocity_m_s;
  const double dc = drives.coupling_detuning + kc * velocity_m_s;
  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  h(1, 1) = -dp;
  h(2, 2) = -(dp + dc);
  h(3, 3) = -(dp + dc + drives.rf_detuning);
  h(0, 1) = h(1, 0) = drives.probe_rabi / 2;
  h(1, 2) = h(2, 1) = drives.coupling_rabi / 2;
  h(2, 3) = h(3, 2) = drives.rf_rabi / 2;

  struct Decay {
    int to, from;
    double rate;
  };
  const Decay decay_list[] = {{0, 1, decays.gamma2},
                              {static_cast<int>(decays.gamma3_target), 2, decays.gamma3},
                              {static_cast<int>(decays.gamma4_target), 3, decays.gamma4}};
  // Coherence decay rate of rho_ij: half the total outflow of i plus of j, plus dephasing.
  double out_rate[4] = {0.0, decays.gamma2, decays.gamma3, decays.gamma4};

  Eigen::Matrix<cplx, 16, 16> a = Eigen::Matrix<cplx, 16, 16>::Zero();
  const cplx i_unit(0.0, 1.0);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const int row = i * 4 + j;
      // -i (H rho - rho H)_ij
      for (int k = 0; k < 4; ++k) {
        a(row, k * 4 + j) += -i_unit * h(i, k);
        a(row, i * 4 + k) += i_unit * h(k, j);
      }
      a(row, row) -= 0.5 * (out_rate[i] + out_rate[j]);
      const bool pi = i >= 2, pj = j >= 2;
      if (pi != pj) a(row, row) -= decays.gamma_extra;
    }
  }
  for (const auto& d : decay_list) a(d.to * 4 + d.to, d.from * 4 + d.from) += d.rate;

  Eigen::Matrix<cplx, 16, 1> b = Eigen::Matrix<cplx, 16, 1>::Zero();
  a.row(0).setZero();
  for (int k = 0; k < 4; ++k) a(0, k * 4 + k) = 1.0;
  b(0) = 1.0;
  const Eigen::Matrix<cplx, 16, 1> x = a.fullPivLu().solve(b);
  Eigen::Matrix4cd rho;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rho(i, j) = x(i * 4 + j);
  return rho;
}

}  // namespace rydnoise::lindblad
