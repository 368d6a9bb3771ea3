// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "paper_setup.hpp"
#include "random_config.hpp"
#include "rydnoise/analysis/measurement.hpp"
#include "rydnoise/analysis/peaks.hpp"
#include "rydnoise/io/config.hpp"
#include "rydnoise/io/scenario.hpp"
#include "rydnoise/lindblad/steady_state.hpp"
#include "rydnoise/noise/couplings.hpp"
#include "rydnoise/rydberg/quantum_defects.hpp"
#include "rydnoise/rydberg/structure.hpp"

using namespace rydnoise;
using constants::two_pi;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = fs::path(RYDNOISE_SOURCE_DIR) / "configs";

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += "[fail] ";
    }
    detail += what + "; ";
  }
  // Like require, but only reported when it fails.
  void check(bool ok, const std::string& what) {
    if (!ok) require(false, what);
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Outcome structure_values() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const rydberg::RydbergStructure rb(rydberg::QuantumDefectTable::rubidium85());
  const auto s = rydberg::parse_state("57S1/2"), p = rydberg::parse_state("57P1/2");
  const double nu = rb.transition_frequency(s, p);
  const double radial = rb.radial_matrix_element(s, p);
  const double dipole = rb.dipole_moment(s, p, rydberg::Polarization::along_quantization_axis()).total_ea0;
  const double t = seconds_since(t0);
  o.require(std::fabs(nu - 19.7825e9) <= 0.03e9, "nu = " + fmt("%.5f GHz", nu / 1e9));
  o.require(std::fabs(radial / 3360.0 - 1.0) <= 0.05, "radial = " + fmt("%.1f a0", radial));
  o.require(std::fabs(std::fabs(dipole) / 1120.0 - 1.0) <= 0.05, "dipole = " + fmt("%.1f e a0", std::fabs(dipole)));
  o.require(t < 1.0, "runtime " + fmt("%.3f s", t));
  return o;
}

Outcome field_chain() {
  Outcome o;
  const noise::FieldGeometry geo;
  const double g = noise::horn_gain_db(19.78e9, geo.gain);
  const double e = noise::farfield_efield(2.4e-3, 19.7825e9, geo);
  o.require(std::fabs(g - 15.63) <= 0.005, "gain = " + fmt("%.4f dB", g));
  o.require(std::fabs(e - 11.6) <= 0.1, "E = " + fmt("%.3f V/m", e));
  return o;
}

Outcome solver_oracle() {
  using namespace lindblad;
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240611);
  double worst = 0.0, worst_herm = 0.0, worst_trace = 0.0, min_eig = 1.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto cfg = testing::random_config(rng);
    const Matrix6 h =
        build_hamiltonian(cfg.drives, cfg.decays.noise.shift3_hz, cfg.decays.noise.shift4_hz, cfg.velocity_m_s);
    const Superoperator l = build_liouvillian(h, cfg.decays);
    const auto ss = steady_state(l, cfg.decays);
    const auto evolved = time_evolve(l, DensityMatrix::ground_state(), 50.0 / spectral_gap(l));
    worst = std::max(worst, (ss.matrix() - evolved.matrix()).cwiseAbs().maxCoeff());
    for (const auto* rho : {&ss, &evolved}) {
      worst_herm = std::max(worst_herm, rho->hermiticity_error());
      worst_trace = std::max(worst_trace, std::fabs(rho->trace() - 1.0));
      min_eig = std::min(min_eig, rho->min_eigenvalue());
    }
  }
  const double t = seconds_since(t0);
  o.require(worst <= 1e-8, "max |steady - evolved| = " + fmt("%.2e", worst));
  o.require(worst_trace <= 1e-9, "trace error " + fmt("%.1e", worst_trace));
  o.require(worst_herm <= 1e-9, "hermiticity error " + fmt("%.1e", worst_herm));
  o.require(min_eig >= -1e-9, "min eigenvalue " + fmt("%.1e", min_eig));
  o.require(t < 60.0, "runtime " + fmt("%.1f s", t));
  return o;
}

// Absorption feature helpers: peaks of -alpha locate the transparency windows.
analysis::PeakSet window_peaks(const spectroscopy::TransmissionSpectrum& s, double fraction) {
  std::vector<double> x(s.size()), y(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    x[i] = s.detuning_hz(i);
    y[i] = -s.alpha[i];
  }
  const auto all = analysis::find_peaks(x, y, 0.0);
  double top = 0.0;
  for (const auto& p : all.peaks) top = std::max(top, p.prominence);
  return analysis::find_peaks(x, y, fraction * top);
}

// FWHM of the EIT dip in alpha, measured from the scan-edge baseline.
double dip_fwhm_hz(const spectroscopy::TransmissionSpectrum& s) {
  const auto bottom = static_cast<std::size_t>(std::min_element(s.alpha.begin(), s.alpha.end()) - s.alpha.begin());
  const double half = 0.5 * (s.alpha[bottom] + s.alpha.front());
  auto crossing = [&](long step) {
    for (long i = static_cast<long>(bottom);; i += step) {
      const double a = s.alpha[static_cast<std::size_t>(i)], b = s.alpha[static_cast<std::size_t>(i + step)];
      if (b > half) {
        const double xa = s.detuning_hz(static_cast<std::size_t>(i)), xb = s.detuning_hz(static_cast<std::size_t>(i + step));
        return xa + (xb - xa) * (half - a) / (b - a);
      }
    }
  };
  return crossing(1) - crossing(-1);
}

spectroscopy::SystemConfig weak_probe_at_rest() {
  auto cfg = testing::paper_system(1);
  cfg.velocity.doppler = false;
  cfg.drives.probe_rabi = two_pi * 0.1e6;
  cfg.drives.coupling_rabi = two_pi * 2e6;
  return cfg;
}

// Weak probe with full Doppler averaging; the coupling is raised so each
// velocity class's window spans several class spacings.
spectroscopy::SystemConfig weak_probe_doppler() {
  auto cfg = testing::paper_system(6401);
  cfg.drives.probe_rabi = two_pi * 0.5e6;
  cfg.drives.coupling_rabi = two_pi * 3e6;
  return cfg;
}

std::optional<double> split_hz(spectroscopy::SystemConfig cfg, spectroscopy::ScanAxis axis, double rf_hz,
                               double half_span_hz, double step_hz) {
  cfg.drives.rf_rabi = two_pi * rf_hz;
  const auto points = static_cast<std::size_t>(std::ceil(2.0 * half_span_hz / step_hz)) + 1;
  const auto grid = spectroscopy::linear_grid(-two_pi * half_span_hz, two_pi * half_span_hz, points);
  const auto s = axis == spectroscopy::ScanAxis::coupling ? spectroscopy::transmission_spectrum(cfg, grid)
                                                         : spectroscopy::probe_scan_spectrum(cfg, grid);
  return analysis::at_splitting(window_peaks(s, 0.05));
}

struct DopplerSplits {
  double linewidth_hz = 0.0;
  std::vector<double> rf_hz;
  std::vector<std::optional<double>> coupling, probe;
};

const DopplerSplits& doppler_splits() {
  static const DopplerSplits d = [] {
    DopplerSplits out;
    const auto cfg = weak_probe_doppler();
    out.linewidth_hz = dip_fwhm_hz(spectroscopy::transmission_spectrum(cfg, testing::mhz_grid(-30, 30, 241)));
    const double ratio = cfg.cell.coupling_wavelength_m / cfg.cell.probe_wavelength_m;
    for (double m : {10.0, 30.0, 100.0}) {
      const double rf = m * out.linewidth_hz;
      out.rf_hz.push_back(rf);
      out.coupling.push_back(split_hz(cfg, spectroscopy::ScanAxis::coupling, rf, 0.6 * rf, 0.25e6));
      out.probe.push_back(split_hz(cfg, spectroscopy::ScanAxis::probe, rf, 0.6 * rf * ratio, 0.25e6 * ratio));
    }
    return out;
  }();
  return d;
}

Outcome at_law() {
  Outcome o;
  const auto rest = weak_probe_at_rest();
  const double w0 = dip_fwhm_hz(spectroscopy::transmission_spectrum(rest, testing::mhz_grid(-30, 30, 3001)));
  o.detail += "v=0 EIT width " + fmt("%.3f MHz", w0 / 1e6) + "; ";
  for (double m : {10.0, 30.0, 100.0}) {
    const double rf = m * w0;
    const auto s = split_hz(rest, spectroscopy::ScanAxis::coupling, rf, 0.6 * rf, w0 / 30.0);
    const double err = s ? std::fabs(*s / rf - 1.0) : 1.0;
    o.require(s && err <= 0.02, "v=0 " + fmt("%.0fx", m) + " err " + fmt("%.2f%%", 100 * err));
  }
  const auto& d = doppler_splits();
  o.detail += "Doppler EIT width " + fmt("%.3f MHz", d.linewidth_hz / 1e6) + "; ";
  for (std::size_t i = 0; i < d.rf_hz.size(); ++i) {
    const double err = d.coupling[i] ? std::fabs(*d.coupling[i] / d.rf_hz[i] - 1.0) : 1.0;
    o.require(d.coupling[i] && err <= 0.05, "Doppler " + fmt("%.0f MHz", d.rf_hz[i] / 1e6) + " err " +
                                                fmt("%.2f%%", 100 * err));
  }
  for (double e_v_m : {1.0, 5.0, 11.6}) {
    const double rf = analysis::rf_rabi(e_v_m, 1120.0) / two_pi;
    const auto s = split_hz(rest, spectroscopy::ScanAxis::coupling, rf, 0.6 * rf, w0 / 30.0);
    const double e = s ? analysis::infer_efield(*s, 1120.0) : 0.0;
    o.require(std::fabs(e / e_v_m - 1.0) <= 0.03, "E " + fmt("%.1f", e_v_m) + " -> " + fmt("%.3f V/m", e));
  }
  return o;
}

Outcome d_factor() {
  Outcome o;
  const auto& d = doppler_splits();
  const auto cell = spectroscopy::CellParameters{};
  const double dfac = analysis::d_factor(spectroscopy::ScanAxis::probe, cell.probe_wavelength_m, cell.coupling_wavelength_m);
  for (std::size_t i = 0; i < d.rf_hz.size(); ++i) {
    if (!d.coupling[i] || !d.probe[i]) {
      o.require(false, "missing splitting at " + fmt("%.0f MHz", d.rf_hz[i] / 1e6));
      continue;
    }
    const double err = std::fabs(*d.probe[i] * dfac / *d.coupling[i] - 1.0);
    o.require(err <= 0.05, fmt("%.0f MHz: ", d.rf_hz[i] / 1e6) + fmt("probe x D %.2f", *d.probe[i] * dfac / 1e6) +
                               fmt(" vs coupling %.2f MHz", *d.coupling[i] / 1e6));
  }
  return o;
}

long double antiderivative(long double nu, long double a) {
  return (1.0L / (a * a)) * (std::log(std::fabs((nu - a) / (nu + a))) / (2.0L * a) + 1.0L / nu);
}

Outcome ac_shift_oracle() {
  Outcome o;
  noise::FieldGeometry geo;
  geo.gain.slope_db_per_ghz = 0.0;
  const double psd = 2e-12;
  const double flat = geo.enhancement * geo.enhancement * std::pow(10.0, geo.gain.reference_gain_db / 10.0) * psd /
                      (4.0 * constants::pi * geo.distance_m * geo.distance_m);
  const double a = 19.7835e9;
  double worst = 0.0;
  for (auto [lo, hi] : {std::pair{20.2e9, 21.2e9}, std::pair{18.2e9, 19.2e9}, std::pair{5e9, 6e9}}) {
    const noise::SpectralIntensity in(noise::NoiseSpectrum({lo, hi}, {psd, psd}), geo);
    const double exact = static_cast<double>(flat * (antiderivative(hi, a) - antiderivative(lo, a)));
    worst = std::max(worst, std::fabs(noise::pole_integral(in, a) / exact - 1.0));
  }
  o.require(worst <= 1e-10, "off-band closed form rel err " + fmt("%.1e", worst));

  const noise::SpectralIntensity in(noise::NoiseSpectrum({19.2e9, 20.2e9}, {psd, psd}), geo);
  noise::PoleQuadrature q;
  double prev = noise::pole_integral(in, a, q), worst_step = 0.0;
  for (int k = 0; k < 4; ++k) {
    q.exclusion_half_width_hz /= 2;
    const double v = noise::pole_integral(in, a, q);
    worst_step = std::max(worst_step, std::fabs(v / prev - 1.0));
    prev = v;
  }
  o.require(worst_step < 0.005, "PV change under window halving " + fmt("%.1e", worst_step));
  return o;
}

// ---------------------------------------------------------------------------
// Shipped-scenario based checks.

struct FilterCase {
  const char* name;
  const char* file;
  std::array<double, 3> model;  // published model offsets, MHz, at -12/-6/0 dB
};

const std::array<FilterCase, 4> kFilters{{
    {"F1", "paper-filter1.cfg", {5, 15, 62}},
    {"F2", "paper-filter2.cfg", {-3, -9, -38}},
    {"F3", "paper-filter3.cfg", {-2, -3, -16}},
    {"F1/3", "paper-filter13.cfg", {2, 6, 23}},
}};

std::shared_ptr<const io::ResolvedScenario> scenario(const std::string& file,
                                                     const std::function<void(io::ScenarioConfig&)>& edit = {}) {
  auto cfg = io::load_config(kConfigs / file);
  if (edit) edit(cfg);
  return std::make_shared<const io::ResolvedScenario>(io::resolve(cfg));
}

const std::map<std::string, io::Bundle>& offset_bundles() {
  static const auto bundles = [] {
    std::map<std::string, io::Bundle> out;
    io::RunRequest req;
    req.spectra = false;
    for (const auto& f : kFilters) out[f.name] = io::run_scenario(scenario(f.file), req);
    return out;
  }();
  return bundles;
}

Outcome table1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& f : kFilters) {
    const auto& rows = offset_bundles().at(f.name).offsets;
    std::string line = std::string(f.name) + ":";
    double prev = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      if (rows.size() != 3 || !rows[i].offset_hz) {
        o.require(false, std::string(f.name) + " offset missing");
        continue;
      }
      const double mhz = *rows[i].offset_hz / 1e6;
      const double ratio = mhz / f.model[i];
      line += fmt(" %+.2f", mhz);
      o.check(ratio > 0.5 && ratio < 2.0, std::string(f.name) + fmt(" %+.0f MHz model", f.model[i]) +
                                                fmt(" got %+.2f", mhz));
      o.check(std::fabs(mhz) > prev, std::string(f.name) + " not monotone");
      prev = std::fabs(mhz);
    }
    o.detail += line + " MHz; ";
  }
  const double t = seconds_since(t0);
  o.require(t < 600.0, "runtime " + fmt("%.0f s", t));
  return o;
}

// CW power points at fixed CSNR values, limited to the 0 - 2.4 mW horn range.
Outcome csnr_trends() {
  Outcome o;
  const std::vector<double> csnrs{0.2, 0.5, 1.0, 2.0, 4.0};
  std::map<std::string, std::map<double, std::map<double, std::optional<double>>>> err;  // filter, atten, csnr
  for (const auto& f : kFilters) {
    for (double att : {-12.0, -6.0, 0.0}) {
      const auto s = scenario(f.file, [&](io::ScenarioConfig& c) {
        c.run.velocity.classes = 1601;
        c.drives.scan_start_hz = -250e6;
        c.drives.scan_stop_hz = 250e6;
        c.drives.scan_points = 501;
        c.noise.attenuations_db = {att};
        c.drives.cw_powers_w.clear();
      });
      const double pn = s->noise_spectrum.with_gain_db(att).integrated_power();
      std::vector<double> powers;
      for (double r : csnrs) {
        if (r * pn <= 2.4e-3) powers.push_back(r * pn);
      }
      auto edited = std::make_shared<io::ResolvedScenario>(*s);
      edited->config.drives.cw_powers_w = powers;
      io::RunRequest req;
      req.spectra = false;
      req.offsets = false;
      req.csnr = true;
      const auto b = io::run_scenario(edited, req);
      for (const auto& p : b.csnr.front().points) {
        err[f.name][att][std::round(p.csnr * 10) / 10] = p.percent_difference;
      }
    }
  }
  auto show = [](const std::optional<double>& v) { return v ? fmt("%.2f%%", *v) : std::string("none"); };
  double worst_above_one = 0.0;
  for (const auto& [name, by_att] : err) {
    for (const auto& [att, by_csnr] : by_att) {
      for (const auto& [r, v] : by_csnr) {
        if (r > 1.0) {
          o.check(v.has_value(), name + fmt(" %g dB", att) + fmt(" CSNR %g has no splitting", r));
          if (v) worst_above_one = std::max(worst_above_one, std::fabs(*v));
        }
      }
    }
  }
  o.require(worst_above_one < 10.0, "max |error| for CSNR > 1: " + fmt("%.2f%%", worst_above_one));
  const auto blue = err["F1"][0.0][0.5], red = err["F3"][0.0][0.5];
  o.require(blue && red && std::fabs(*blue) > std::fabs(*red),
            "CSNR 0.5 at 0 dB: blue " + show(blue) + " vs red " + show(red));
  double worst_red = 0.0;
  bool red_complete = true;
  for (const auto& [att, by_csnr] : err["F3"]) {
    for (const auto& [r, v] : by_csnr) {
      if (r >= 0.2 && !v) red_complete = false;
      if (v) worst_red = std::max(worst_red, std::fabs(*v));
    }
  }
  o.require(red_complete && worst_red < 10.0, "red band max |error| down to CSNR 0.2: " + fmt("%.2f%%", worst_red));
  return o;
}

Outcome qualitative_spectra() {
  Outcome o;
  const auto& blue = offset_bundles().at("F1");
  bool all_positive = true;
  for (const auto& row : blue.offsets) {
    all_positive = all_positive && row.offset_hz && *row.offset_hz > 0.0;
  }
  o.require(all_positive, "F1 zero-RF peaks all positive");

  // With RF on, the midpoint of the AT pair moves up at every attenuation.
  const auto clean = io::run_scenario(scenario("no-noise.cfg"), [] {
    io::RunRequest r;
    r.offsets = false;
    r.cw_power_w = 2.4e-3;
    return r;
  }());
  const auto noisy = io::run_scenario(scenario("paper-filter1.cfg"), [] {
    io::RunRequest r;
    r.offsets = false;
    r.cw_power_w = 2.4e-3;
    return r;
  }());
  auto midpoint = [](const analysis::PeakSet& ps) -> std::optional<double> {
    if (ps.size() < 2) return std::nullopt;
    auto sorted = ps.peaks;
    std::stable_sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return a.prominence > b.prominence; });
    return 0.5 * (sorted[0].position_hz + sorted[1].position_hz);
  };
  const auto m0 = midpoint(clean.cells.front().result.peaks);
  for (const auto& c : noisy.cells) {
    const auto m = midpoint(c.result.peaks);
    o.require(m && m0 && *m > *m0, fmt("F1 %g dB AT midpoint", c.attenuation_db) +
                                       fmt(" %+.2f MHz", m ? (*m - m0.value_or(0.0)) / 1e6 : NAN));
  }

  auto ratio_at_0db = [](const io::Bundle& b) {
    for (const auto& r : b.offsets) {
      if (r.attenuation_db == 0.0) return r.prominence_ratio;
    }
    return -1.0;
  };
  const double r1 = ratio_at_0db(blue), r2 = ratio_at_0db(offset_bundles().at("F2")),
               r3 = ratio_at_0db(offset_bundles().at("F3"));
  o.require(r1 >= 0.0 && r1 < 0.5, "F1 0 dB height ratio " + fmt("%.3f", r1));
  o.require(r2 >= 0.0 && r2 < 0.5, "F2 0 dB height ratio " + fmt("%.3f", r2));
  o.require(r3 >= 0.5, "F3 0 dB height ratio " + fmt("%.3f", r3));
  return o;
}

std::map<std::string, std::string> read_outputs(const fs::path& dir, const io::Manifest& m) {
  std::map<std::string, std::string> out;
  for (const auto& f : m.files) {
    std::ifstream in(dir / f.name, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    out[f.name] = ss.str();
  }
  return out;
}

Outcome determinism() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "rydnoise_acceptance";
  fs::remove_all(root);
  std::size_t files = 0;
  for (const auto& f : kFilters) {
    std::vector<std::map<std::string, std::string>> runs;
    std::vector<std::uint64_t> hashes;
    for (unsigned threads : {1u, 1u, 4u}) {
      const auto s = scenario(f.file, [&](io::ScenarioConfig& c) {
        c.run.velocity.classes = 201;
        c.drives.scan_points = 201;
        c.run.threads = threads;
      });
      const fs::path dir = root / (std::string(f.file) + std::to_string(runs.size()));
      const auto m = io::write_bundle(io::run_scenario(s), dir, 0.0);
      hashes.push_back(m.outputs_hash);
      runs.push_back(read_outputs(dir, m));
    }
    files += runs[0].size();
    o.require(runs[0] == runs[1] && hashes[0] == hashes[1], std::string(f.name) + " rerun byte-identical");
    o.require(runs[0] == runs[2] && hashes[0] == hashes[2], std::string(f.name) + " 1 vs 4 threads identical");
  }
  o.detail += std::to_string(files) + " files compared";
  fs::remove_all(root);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Rydberg structure", structure_values},
      {"gain and far-field chain", field_chain},
      {"steady state vs propagation", solver_oracle},
      {"AT splitting law", at_law},
      {"Doppler mismatch factor", d_factor},
      {"AC shift integral", ac_shift_oracle},
      {"zero-RF offsets", table1},
      {"CSNR trends", csnr_trends},
      {"qualitative spectra", qualitative_spectra},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::printf("criterion %zu (%s): %s  %s(%.1f s)\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
