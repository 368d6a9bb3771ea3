#include "rydnoise/io/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "rydnoise/constants.hpp"
#include "rydnoise/error.hpp"
#include "text_util.hpp"

namespace rydnoise::io {

namespace {

using constants::two_pi;
using detail::format_double;

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string coordinates(std::optional<double> atten, std::optional<double> power) {
  std::string s = " [scenario:";
  if (atten) s += " attenuation " + format_double(*atten) + " dB";
  if (power) s += " CW power " + format_double(*power) + " W";
  return s + "]";
}

// Runs fn and rethrows model errors (same type) with the coordinates appended.
template <class Fn>
auto at(std::optional<double> atten, std::optional<double> power, Fn&& fn) {
  try {
    return fn();
  } catch (const VelocityGridError& e) {
    throw VelocityGridError(e.what() + coordinates(atten, power), e.achieved_tolerance());
  } catch (const AmbiguousSteadyStateError& e) {
    throw AmbiguousSteadyStateError(e.what() + coordinates(atten, power));
  } catch (const NumericalError& e) {
    throw NumericalError(e.what() + coordinates(atten, power));
  } catch (const ConfigError& e) {
    throw ConfigError(e.what() + coordinates(atten, power));
  }
}

noise::NoiseSpectrum build_noise(const NoiseBlock& nb) {
  switch (nb.kind) {
    case NoiseKind::none:
      return {};
    case NoiseKind::rectangles: {
      std::vector<noise::SpectrumSegment> segs;
      const double share = *nb.total_power_w / static_cast<double>(nb.centers_hz.size());
      auto centers = nb.centers_hz;
      std::sort(centers.begin(), centers.end());
      for (double c : centers) segs.push_back(noise::make_rect_spectrum(c, nb.bandwidth_hz, share).segments().front());
      return noise::NoiseSpectrum(std::move(segs));
    }
    case NoiseKind::file:
      return noise::load_noise_psd(*nb.psd_file, nb.total_power_w);
  }
  return {};
}

std::string header_line(const std::string& key, const std::string& value) { return "# " + key + "=" + value + "\n"; }

}  // namespace

ResolvedScenario resolve(const ScenarioConfig& config) {
  ResolvedScenario r;
  r.config = config;
  const auto& a = config.atom;
  auto defects = a.defects_file ? rydberg::QuantumDefectTable::load(*a.defects_file)
                                : rydberg::QuantumDefectTable::rubidium85();
  r.structure = std::make_shared<const rydberg::RydbergStructure>(std::move(defects), rydberg::RadialGrid{},
                                                                  config.run.matrix_cache);
  const auto pol = rydberg::Polarization::along_quantization_axis();
  try {
    r.rf_transition_hz = std::fabs(r.structure->transition_frequency(a.state3, a.state4));
    r.rf_dipole_ea0 = a.rf_dipole_ea0 ? *a.rf_dipole_ea0
                                      : std::fabs(r.structure->dipole_moment(a.state3, a.state4, pol).total_ea0);
    r.coupling_dipole_ea0 = a.coupling_dipole_ea0
                                ? *a.coupling_dipole_ea0
                                : std::fabs(r.structure->dipole_moment(a.intermediate, a.state3, pol).total_ea0);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("atom block: ") + e.what());
  }

  const auto& d = config.drives;
  auto& m = r.model;
  auto& sys = m.system;
  sys.cell = config.cell;
  sys.probe_dipole_ea0 = a.probe_dipole_ea0;
  sys.velocity = config.run.velocity;
  sys.threads = config.run.threads;
  sys.drives.probe_rabi = d.probe_rabi_hz ? two_pi * *d.probe_rabi_hz
                                          : spectroscopy::rabi_from_beam(config.cell.probe.power_w,
                                                                         config.cell.probe.fwhm_m, a.probe_dipole_ea0);
  sys.drives.coupling_rabi =
      d.coupling_rabi_hz ? two_pi * *d.coupling_rabi_hz
                         : spectroscopy::rabi_from_beam(config.cell.coupling.power_w, config.cell.coupling.fwhm_m,
                                                        r.coupling_dipole_ea0);
  sys.drives.probe_detuning = two_pi * d.probe_detuning_hz;
  sys.drives.coupling_detuning = two_pi * d.coupling_detuning_hz;
  sys.drives.rf_detuning = two_pi * d.rf_detuning_hz;
  sys.decays.gamma2 = two_pi * a.gamma2_hz;
  sys.decays.gamma3 = two_pi * a.gamma3_hz;
  sys.decays.gamma4 = two_pi * a.gamma4_hz;
  sys.decays.gamma_extra = two_pi * a.gamma_extra_hz;
  sys.validate();

  m.scan_grid = spectroscopy::linear_grid(two_pi * d.scan_start_hz, two_pi * d.scan_stop_hz,
                                          static_cast<std::size_t>(d.scan_points));
  m.axis = d.scan_axis;
  m.rf_dipole_ea0 = r.rf_dipole_ea0;
  m.rf_frequency_hz = d.rf_frequency_hz;
  m.geometry = config.geometry;
  m.geometry.validate();
  m.prominence_fraction = config.run.prominence_fraction;
  if (config.run.velocity_check) m.velocity_tolerance = config.run.velocity_tolerance;

  r.noise_spectrum = build_noise(config.noise);
  return r;
}

noise::NoiseCouplings scenario_couplings(const ResolvedScenario& s, double attenuation_db) {
  if (s.noise_spectrum.is_zero()) return {};
  const noise::SpectralIntensity intensity(s.noise_spectrum.with_gain_db(attenuation_db), s.config.geometry);
  noise::CouplingOptions opts;
  opts.n_window = s.config.atom.perturber_window;
  opts.quadrature.exclusion_half_width_hz = s.config.run.pole_exclusion_hz;
  opts.driven_dipole_ea0 = s.config.atom.rf_dipole_ea0;
  return noise::compute_couplings(*s.structure, s.config.atom.state3, s.config.atom.state4, intensity, opts);
}

bool Bundle::suppressed() const {
  for (const auto& c : cells) {
    if (c.result.peaks.empty()) return true;
  }
  for (const auto& o : offsets) {
    if (!o.offset_hz) return true;
  }
  return false;
}

Bundle run_scenario(std::shared_ptr<const ResolvedScenario> scenario, const RunRequest& request) {
  const auto& s = *scenario;
  const auto& model = s.model;
  Bundle b;
  b.scenario = scenario;

  const auto clean = at(std::nullopt, 0.0, [&] { return analysis::model_spectrum(model, 0.0, {}, 0.0); });
  if (clean.peaks.empty()) throw NumericalError("no EIT peak in the no-noise reference spectrum");
  const auto& ref = clean.peaks.peaks[clean.peaks.tallest()];
  b.reference_prominence = ref.prominence;
  b.reference_offset_hz = ref.position_hz;
  b.threshold = model.prominence_fraction * ref.prominence;

  const std::vector<double> attens =
      request.attenuation_db ? std::vector<double>{*request.attenuation_db} : s.config.noise.attenuations_db;
  const std::vector<double> powers =
      request.cw_power_w ? std::vector<double>{*request.cw_power_w} : s.config.drives.cw_powers_w;
  const bool noisy = !s.noise_spectrum.is_zero();

  std::vector<noise::NoiseCouplings> couplings;
  for (double att : attens) couplings.push_back(at(att, std::nullopt, [&] { return scenario_couplings(s, att); }));

  if (request.spectra) {
    for (std::size_t i = 0; i < attens.size(); ++i) {
      for (double p : powers) {
        SpectrumCell cell;
        cell.attenuation_db = attens[i];
        cell.noise = couplings[i];
        cell.result = at(attens[i], p, [&] { return analysis::model_spectrum(model, p, couplings[i], b.threshold); });
        b.cells.push_back(std::move(cell));
      }
    }
  }

  if (request.offsets && noisy) {
    for (std::size_t i = 0; i < attens.size(); ++i) {
      OffsetRow row;
      row.attenuation_db = attens[i];
      row.noise_power_w = s.noise_spectrum.with_gain_db(attens[i]).integrated_power();
      row.noise = couplings[i];
      const auto off = at(attens[i], 0.0, [&] { return analysis::zero_rf_offset(model, couplings[i], b.threshold); });
      row.offset_hz = off.offset_hz;
      if (!off.peaks.empty()) row.prominence_ratio = off.peaks.peaks[off.peaks.tallest()].prominence / ref.prominence;
      b.offsets.push_back(row);
    }
  }

  if (request.csnr) {
    if (!noisy) throw ConfigError("CSNR analysis needs a noise spectrum");
    for (std::size_t i = 0; i < attens.size(); ++i) {
      CsnrSeries series;
      series.attenuation_db = attens[i];
      series.noise_power_w = s.noise_spectrum.with_gain_db(attens[i]).integrated_power();
      series.points = at(attens[i], std::nullopt, [&] {
        return analysis::csnr_analysis(model, powers, couplings[i], series.noise_power_w, b.threshold);
      });
      b.csnr.push_back(std::move(series));
    }
  }
  return b;
}

std::string export_plotdata(const Bundle& bundle, double attenuation_db) {
  std::vector<const SpectrumCell*> traces;
  for (const auto& c : bundle.cells) {
    if (c.attenuation_db == attenuation_db) traces.push_back(&c);
  }
  std::string out = "# waterfall: trace k is transmission + k * trace_offset, k = 0 for the first CW power\n";
  out += header_line("trace_offset", format_double(kWaterfallOffset));
  out += header_line("attenuation_dB", format_double(attenuation_db));
  if (bundle.scenario) {
    const auto& cfg = bundle.scenario->config;
    out += header_line("A_sw", format_double(cfg.geometry.enhancement));
    out += header_line("x_m", format_double(cfg.geometry.distance_m));
    out += header_line("descriptor", cfg.noise.descriptor);
    out += header_line("scan_axis", spectroscopy::scan_axis_name(bundle.scenario->model.axis));
  }
  out += header_line("traces", std::to_string(traces.size()));
  if (traces.empty()) return out;

  out += "detuning_Hz";
  for (const auto* t : traces) out += ",P_" + format_double(t->result.cw_power_w) + "_W";
  out += "\n";
  const auto& first = traces.front()->result.spectrum;
  for (std::size_t i = 0; i < first.size(); ++i) {
    out += format_double(first.detuning_hz(i));
    for (std::size_t k = 0; k < traces.size(); ++k) {
      out += "," + format_double(traces[k]->result.spectrum.transmission[i] + static_cast<double>(k) * kWaterfallOffset);
    }
    out += "\n";
  }
  return out;
}

std::string spectrum_csv(const SpectrumCell& cell) {
  const auto& sp = cell.result.spectrum;
  std::string out;
  out += header_line("attenuation_dB", format_double(cell.attenuation_db));
  out += header_line("cw_power_W", format_double(cell.result.cw_power_w));
  out += header_line("farfield_V_per_m", format_double(cell.result.efield_v_m));
  for (const auto& [k, v] : sp.metadata) out += header_line(k, v);
  out += "detuning_Hz,transmission,alpha_per_m\n";
  for (std::size_t i = 0; i < sp.size(); ++i) {
    out += format_double(sp.detuning_hz(i)) + "," + format_double(sp.transmission[i]) + "," +
           format_double(sp.alpha[i]) + "\n";
  }
  return out;
}

std::string peaks_csv(const Bundle& bundle) {
  std::string out = header_line("prominence_threshold", format_double(bundle.threshold));
  out += "attenuation_dB,cw_power_W,farfield_V_per_m,peak_count,peak_positions_Hz,tallest_position_Hz,"
         "splitting_Hz,inferred_V_per_m\n";
  for (const auto& c : bundle.cells) {
    const auto& peaks = c.result.peaks;
    std::string positions;
    for (const auto& p : peaks.peaks) positions += (positions.empty() ? "" : ";") + format_double(p.position_hz);
    std::optional<double> tallest, field;
    if (!peaks.empty()) tallest = peaks.peaks[peaks.tallest()].position_hz;
    const auto split = analysis::at_splitting(peaks);
    if (split && bundle.scenario) {
      const auto& m = bundle.scenario->model;
      field = analysis::infer_efield(
          *split, m.rf_dipole_ea0,
          analysis::d_factor(m.axis, m.system.cell.probe_wavelength_m, m.system.cell.coupling_wavelength_m));
    }
    out += format_double(c.attenuation_db) + "," + format_double(c.result.cw_power_w) + "," +
           format_double(c.result.efield_v_m) + "," + std::to_string(peaks.size()) + "," + positions + "," +
           opt(tallest) + "," + opt(split) + "," + opt(field) + "\n";
  }
  return out;
}

std::string offsets_csv(const Bundle& bundle) {
  std::string out = header_line("reference_offset_Hz", format_double(bundle.reference_offset_hz));
  out += header_line("prominence_threshold", format_double(bundle.threshold));
  out += "attenuation_dB,noise_power_W,R34_per_s,Rd3_per_s,Re4_per_s,shift3_Hz,shift4_Hz,offset_Hz,"
         "prominence_ratio\n";
  for (const auto& r : bundle.offsets) {
    out += format_double(r.attenuation_db) + "," + format_double(r.noise_power_w) + "," + format_double(r.noise.r34) +
           "," + format_double(r.noise.rd3) + "," + format_double(r.noise.re4) + "," +
           format_double(r.noise.shift3_hz) + "," + format_double(r.noise.shift4_hz) + "," + opt(r.offset_hz) + "," +
           format_double(r.prominence_ratio) + "\n";
  }
  return out;
}

std::string csnr_csv(const Bundle& bundle) {
  std::string out =
      "attenuation_dB,noise_power_W,cw_power_W,csnr,farfield_V_per_m,clean_V_per_m,noisy_V_per_m,percent_difference\n";
  for (const auto& s : bundle.csnr) {
    for (const auto& p : s.points) {
      out += format_double(s.attenuation_db) + "," + format_double(s.noise_power_w) + "," +
             format_double(p.cw_power_w) + "," + format_double(p.csnr) + "," + format_double(p.farfield_v_m) + "," +
             opt(p.clean_efield_v_m) + "," + opt(p.noisy_efield_v_m) + "," + opt(p.percent_difference) + "\n";
    }
  }
  return out;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Manifest write_bundle(const Bundle& bundle, const std::filesystem::path& dir, double wall_time_s) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  Manifest manifest;
  auto emit = [&](const std::string& name, const std::string& body) {
    const fs::path path = dir / name;
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << body;
    if (!out) throw std::runtime_error("cannot write " + path.string());
    manifest.files.push_back({name, fnv1a(body), body.size()});
  };

  std::vector<double> attens;
  for (const auto& c : bundle.cells) {
    emit("spectra/spectrum_a" + format_double(c.attenuation_db) + "dB_p" + format_double(c.result.cw_power_w) +
             "W.csv",
         spectrum_csv(c));
    if (std::find(attens.begin(), attens.end(), c.attenuation_db) == attens.end()) attens.push_back(c.attenuation_db);
  }
  if (!bundle.cells.empty()) emit("peaks.csv", peaks_csv(bundle));
  for (double a : attens) emit("waterfall_a" + format_double(a) + "dB.dat", export_plotdata(bundle, a));
  if (!bundle.offsets.empty()) emit("offsets.csv", offsets_csv(bundle));
  if (!bundle.csnr.empty()) emit("csnr.csv", csnr_csv(bundle));

  std::string combined;
  for (const auto& f : manifest.files) combined += f.name + "\n" + std::to_string(f.hash) + "\n";
  manifest.outputs_hash = fnv1a(combined);

  auto hex = [](std::uint64_t v) {
    std::ostringstream ss;
    ss << std::hex << std::setw(16) << std::setfill('0') << v;
    return ss.str();
  };
  nlohmann::ordered_json j;
  j["version"] = RYDNOISE_VERSION;
  if (bundle.scenario) {
    j["config_source"] = bundle.scenario->config.source;
    j["config_hash"] = hex(fnv1a(bundle.scenario->config.text));
    j["threads"] = bundle.scenario->config.run.threads;
  }
  j["wall_time_s"] = wall_time_s;
  j["suppressed"] = bundle.suppressed();
  j["files"] = nlohmann::ordered_json::array();
  for (const auto& f : manifest.files) {
    j["files"].push_back({{"name", f.name}, {"bytes", f.bytes}, {"fnv1a", hex(f.hash)}});
  }
  j["outputs_hash"] = hex(manifest.outputs_hash);
  std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("cannot write manifest.json");
  return manifest;
}

}  // namespace rydnoise::io
