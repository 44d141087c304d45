#pragma once

#include <optional>
#include <variant>

#include "tripletsim/device.hpp"

namespace tripletsim {

struct GaussianPulse {
  double fwhm = 0.0;  // s, temporal intensity FWHM
};
struct ContinuousWave {};

struct PulseEnergy {
  double joules = 0.0;
};
struct PeakPower {
  double watts = 0.0;
};
struct CwPower {
  double watts = 0.0;
};

using PumpShape = std::variant<GaussianPulse, ContinuousWave>;
using PumpDrive = std::variant<PulseEnergy, PeakPower, CwPower>;

struct PumpSpec {
  Band band = Band::P1;
  PumpShape shape = GaussianPulse{};
  PumpDrive drive = PulseEnergy{};
  double repetition_rate = 0.0;  // Hz
  double detuning = 0.0;         // center minus ring resonance, rad/s

  bool pulsed() const { return std::holds_alternative<GaussianPulse>(shape); }
  double fwhm() const;
  void validate() const;
};

class PumpSpectrum {
 public:
  static PumpSpectrum gaussian(Band band, const BandSpec& spec, double fwhm,
                               double center_omega);
  static PumpSpectrum continuous(Band band, const BandSpec& spec, double center_omega);

  Band band() const { return band_; }
  bool cw() const { return cw_; }
  double center_omega() const { return center_omega_; }
  double center_wavenumber() const { return center_k_; }
  double group_velocity() const { return v_; }
  // amplitude time constant tau = fwhm / (2 sqrt(ln 2)); 0 for CW
  double tau() const { return tau_; }
  double spectral_intensity_fwhm_hz() const;
  // rms width of |phi(omega)|^2 in rad/s
  double omega_sigma() const;

  // normalized phi(k), real for transform-limited pulses
  double phi(double k) const;
  double omega_detuning(double k) const;
  // fraction of |phi|^2 outside [k_lo, k_hi]
  double energy_outside(double k_lo, double k_hi) const;

  // pulse: |alpha|^2 photons per pulse; CW: |alpha|^2 photon flux (1/s)
  cd alpha() const { return alpha_; }
  PumpSpectrum with_alpha(cd alpha) const;
  // CW replaces alpha phi(k) by line_amplitude * delta(k - k_c)
  cd cw_line_amplitude() const;

 private:
  Band band_ = Band::P1;
  bool cw_ = false;
  double center_omega_ = 0.0;
  double center_k_ = 0.0;
  double v_ = 0.0;
  double tau_ = 0.0;
  cd alpha_{1.0, 0.0};
};

PumpSpectrum gaussian_spectrum(double fwhm, const BandSpec& band, Band id = Band::P1);
PumpSpectrum amplitude_from_drive(const PumpSpec& spec, const BandSpec& band,
                                  std::optional<double> resonance_omega = {});
double pulse_energy(double peak_power, double fwhm);
double average_power(double energy, double repetition_rate);
double drive_pulse_energy(const PumpSpec& spec);
double drive_peak_power(const PumpSpec& spec);
double drive_average_power(const PumpSpec& spec);

double intracavity_peak_power(const RingResonance& res, const PumpSpec& spec,
                              const BandSpec& band);
double cw_enhancement(const RingResonance& res, double detuning = 0.0);

}  // namespace tripletsim
