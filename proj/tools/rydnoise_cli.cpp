// rydnoise command-line front end. See README.md for the config format.

#include <chrono>
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "rydnoise/error.hpp"
#include "rydnoise/io/config.hpp"
#include "rydnoise/io/scenario.hpp"

namespace {

using namespace rydnoise;

enum Exit { ok = 0, config_error = 1, numerical_failure = 2, suppressed = 3 };

struct Common {
  std::string config;
  std::string out;
  int threads = -1;
};

std::shared_ptr<const io::ResolvedScenario> load(const Common& c) {
  auto cfg = io::load_config(c.config);
  if (!c.out.empty()) cfg.run.output_dir = c.out;
  if (c.threads >= 0) cfg.run.threads = static_cast<unsigned>(c.threads);
  return std::make_shared<const io::ResolvedScenario>(io::resolve(cfg));
}

int finish(const io::Bundle& bundle, const io::ResolvedScenario& s, std::chrono::steady_clock::time_point start) {
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto manifest = io::write_bundle(bundle, s.config.run.output_dir, wall);
  std::printf("wrote %zu files to %s (outputs hash %016llx, %.1f s)\n", manifest.files.size(),
              s.config.run.output_dir.string().c_str(), static_cast<unsigned long long>(manifest.outputs_hash), wall);
  if (bundle.suppressed()) {
    std::fprintf(stderr, "warning: EIT suppressed below the prominence threshold in some spectra\n");
    return suppressed;
  }
  return ok;
}

void print_offsets(const io::Bundle& b) {
  std::printf("reference peak %+.3f MHz\n", b.reference_offset_hz / 1e6);
  std::printf("%10s %14s %14s %14s %12s\n", "atten_dB", "noise_W", "offset_MHz", "shift3_MHz", "prom_ratio");
  for (const auto& r : b.offsets) {
    std::printf("%10g %14.6g ", r.attenuation_db, r.noise_power_w);
    if (r.offset_hz) std::printf("%+14.3f", *r.offset_hz / 1e6);
    else std::printf("%14s", "suppressed");
    std::printf(" %+14.3f %12.3f\n", r.noise.shift3_hz / 1e6, r.prominence_ratio);
  }
}

void print_csnr(const io::Bundle& b) {
  std::printf("%10s %12s %10s %12s\n", "atten_dB", "cw_power_W", "csnr", "diff_%");
  for (const auto& s : b.csnr) {
    for (const auto& p : s.points) {
      std::printf("%10g %12.4g %10.4g ", s.attenuation_db, p.cw_power_w, p.csnr);
      if (p.percent_difference) std::printf("%12.3f\n", *p.percent_difference);
      else std::printf("%12s\n", "n/a");
    }
  }
}

int validate(const Common& c) {
  const auto s = load(c);
  std::cout << io::describe(s->config);
  const auto& d = s->model.system.drives;
  std::printf("[derived]\n");
  std::printf("  rf_transition = %.6f GHz\n", s->rf_transition_hz / 1e9);
  std::printf("  rf_dipole = %.2f ea0\n", s->rf_dipole_ea0);
  std::printf("  coupling_dipole = %.5g ea0\n", s->coupling_dipole_ea0);
  std::printf("  probe_rabi = %.4f MHz\n", d.probe_rabi / constants::two_pi / 1e6);
  std::printf("  coupling_rabi = %.4f MHz\n", d.coupling_rabi / constants::two_pi / 1e6);
  std::printf("  noise_power = %.6g W\n", s->noise_spectrum.integrated_power());
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rydberg EIT/AT spectra under coherent RF and band-limited noise"};
  app.set_version_flag("--version", RYDNOISE_VERSION);
  app.require_subcommand(1);

  Common common;
  double power_w = 0.0, atten_db = 0.0;
  auto add_common = [&](CLI::App* sub, bool outputs) {
    sub->add_option("config", common.config, "scenario file")->required()->check(CLI::ExistingFile);
    if (outputs) {
      sub->add_option("--out", common.out, "output directory (overrides run.output_dir)");
      sub->add_option("--threads", common.threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
    }
  };
  auto* v = app.add_subcommand("validate", "parse and print the resolved config");
  add_common(v, false);
  auto* run = app.add_subcommand("run", "all spectra, peak table, offsets and waterfall files");
  add_common(run, true);
  auto* spec = app.add_subcommand("spectrum", "one spectrum at a given CW power and attenuation");
  add_common(spec, true);
  spec->add_option("--power", power_w, "CW horn power, W")->required()->check(CLI::NonNegativeNumber);
  spec->add_option("--atten", atten_db, "noise attenuation, dB")->required();
  auto* t1 = app.add_subcommand("table1", "zero-RF peak offsets per attenuation");
  add_common(t1, true);
  auto* cs = app.add_subcommand("csnr", "field error versus coherent-signal-to-noise ratio");
  add_common(cs, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ok : config_error;
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    if (v->parsed()) return validate(common);
    const auto s = load(common);
    io::RunRequest req;
    if (spec->parsed()) {
      req.offsets = false;
      req.cw_power_w = power_w;
      req.attenuation_db = atten_db;
    } else if (t1->parsed()) {
      req.spectra = false;
    } else if (cs->parsed()) {
      req.spectra = false;
      req.offsets = false;
      req.csnr = true;
    }
    const auto bundle = io::run_scenario(s, req);
    if (!bundle.offsets.empty()) print_offsets(bundle);
    if (!bundle.csnr.empty()) print_csnr(bundle);
    if (spec->parsed() && !bundle.cells.empty()) {
      const auto& peaks = bundle.cells.front().result.peaks;
      for (const auto& p : peaks.peaks) {
        std::printf("peak %+.3f MHz  prominence %.4g\n", p.position_hz / 1e6, p.prominence);
      }
    }
    return finish(bundle, *s, start);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return config_error;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return numerical_failure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return numerical_failure;
  }
}
