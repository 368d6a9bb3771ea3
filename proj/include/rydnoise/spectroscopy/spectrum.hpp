#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rydnoise/lindblad/model.hpp"

namespace rydnoise::spectroscopy {

struct Beam {
  double power_w = 0.0;
  double fwhm_m = 0.0;
};

struct CellParameters {
  double length_m = 0.075;
  double temperature_k = 294.0;
  double isotope_fraction = constants::rb85_natural_abundance;
  double probe_wavelength_m = 780.241e-9;
  double coupling_wavelength_m = 479.9285e-9;
  Beam probe{4.1e-6, 270e-6};
  Beam coupling{43.3e-3, 353e-6};

  void validate() const;  // ConfigError
};

// Peak Rabi frequency (rad/s) of a Gaussian beam of the given power and
// intensity FWHM acting on a transition with dipole `dipole_ea0`.
double rabi_from_beam(double power_w, double fwhm_m, double dipole_ea0);

// Rb vapor pressure in Pa (solid below the 312.46 K melting point, liquid
// above), from log10(P / torr) = 2.881 + A - B / T.
double rb_vapor_pressure_pa(double temperature_k);

// Number density (1/m^3) of the isotope in a cell at temperature T.
// ConfigError outside 250 K < T < 450 K.
double vapor_density(double temperature_k, double isotope_fraction);

// Uniform velocity grid over +-span_u most-probable speeds with Maxwell weights.
struct VelocityGrid {
  int classes = 12801;
  double span_u = 4.0;
  bool doppler = true;  // false: a single v = 0 class

  void validate() const;
};

struct VelocityClass {
  double velocity_m_s;
  double weight;  // weights sum to 1
};

// Most-probable speed sqrt(2 kT / m) along one axis.
double most_probable_speed(double temperature_k, double mass_kg);

std::vector<VelocityClass> maxwell_classes(const VelocityGrid& grid, double temperature_k, double mass_kg);

// Everything needed to turn a detuning grid into a transmission spectrum.
struct SystemConfig {
  lindblad::DriveParameters drives;  // the scanned detuning is overwritten per sample
  lindblad::DecayParameters decays;
  CellParameters cell;
  double probe_dipole_ea0 = 2.44;
  double atomic_mass_kg = constants::rb85_mass_u * constants::amu;
  VelocityGrid velocity;
  unsigned threads = 0;  // 0 = hardware concurrency

  lindblad::DopplerGeometry doppler() const {
    return {cell.probe_wavelength_m, cell.coupling_wavelength_m};
  }
  void validate() const;
};

enum class ScanAxis { coupling, probe };

const char* scan_axis_name(ScanAxis axis);

struct TransmissionSpectrum {
  ScanAxis axis = ScanAxis::coupling;
  std::vector<double> detuning;      // rad/s
  std::vector<double> transmission;  // exp(-alpha L)
  std::vector<double> alpha;         // 1/m
  std::vector<std::pair<std::string, std::string>> metadata;

  std::size_t size() const noexcept { return detuning.size(); }
  // Detuning / 2 pi in Hz.
  double detuning_hz(std::size_t i) const;
};

// Doppler-averaged probe susceptibility at one scan point. The probe
// coherence is taken as rho_12 = conj(rho_21), for which Im chi > 0 is
// absorption in this detuning convention.
std::complex<double> susceptibility(const SystemConfig& config, double probe_detuning, double coupling_detuning);

// Coupling-laser scan (probe detuning from config.drives) over `grid` (rad/s).
TransmissionSpectrum transmission_spectrum(const SystemConfig& config, std::span<const double> grid);

// Probe-laser scan (coupling detuning from config.drives).
TransmissionSpectrum probe_scan_spectrum(const SystemConfig& config, std::span<const double> grid);

// Runs the scan at the configured grid and at twice the classes and a wider
// span (+1 u), and throws VelocityGridError when any transmission sample moves
// by more than `tolerance`. Returns the configured-grid spectrum.
TransmissionSpectrum checked_spectrum(const SystemConfig& config, ScanAxis axis, std::span<const double> grid,
                                      double tolerance = 1e-4);

// Uniform detuning grid from lo to hi inclusive (same units as the inputs).
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

}  // namespace rydnoise::spectroscopy
