#include "tripletsim/pump.hpp"

#include <algorithm>
#include <cmath>

#include "tripletsim/errors.hpp"

namespace tripletsim {

namespace {

const double kLn2 = std::log(2.0);
// E = P_peak * fwhm * sqrt(pi / (4 ln 2)) for a Gaussian intensity profile
const double kGaussianArea = std::sqrt(kPi / (4.0 * kLn2));

double tau_from_fwhm(double fwhm) { return fwhm / (2.0 * std::sqrt(kLn2)); }

}  // namespace

double PumpSpec::fwhm() const {
  if (const auto* g = std::get_if<GaussianPulse>(&shape)) return g->fwhm;
  return 0.0;
}

void PumpSpec::validate() const {
  if (pulsed()) {
    if (!(fwhm() > 0.0) || !std::isfinite(fwhm()))
      throw DomainError("Gaussian pump needs a positive FWHM");
    if (!(repetition_rate > 0.0)) throw DomainError("pulsed pump needs a positive repetition rate");
    if (std::holds_alternative<CwPower>(drive))
      throw DomainError("pulsed pump must be driven by pulse energy or peak power");
  } else if (!std::holds_alternative<CwPower>(drive)) {
    throw DomainError("CW pump must be driven by a CW power");
  }
  const double value = std::visit([](const auto& d) -> double {
    if constexpr (std::is_same_v<std::decay_t<decltype(d)>, PulseEnergy>) return d.joules;
    else return d.watts;
  }, drive);
  if (!(value >= 0.0) || !std::isfinite(value)) throw DomainError("pump drive must be >= 0");
  if (!std::isfinite(detuning)) throw DomainError("pump detuning must be finite");
}

PumpSpectrum PumpSpectrum::gaussian(Band band, const BandSpec& spec, double fwhm,
                                    double center_omega) {
  if (!(fwhm > 0.0)) throw DomainError("gaussian_spectrum requires fwhm > 0");
  PumpSpectrum s;
  s.band_ = band;
  s.cw_ = false;
  s.center_omega_ = center_omega;
  s.center_k_ = wavenumber_at(spec, center_omega);
  s.v_ = spec.group_velocity;
  s.tau_ = tau_from_fwhm(fwhm);
  return s;
}

PumpSpectrum PumpSpectrum::continuous(Band band, const BandSpec& spec, double center_omega) {
  PumpSpectrum s;
  s.band_ = band;
  s.cw_ = true;
  s.center_omega_ = center_omega;
  s.center_k_ = wavenumber_at(spec, center_omega);
  s.v_ = spec.group_velocity;
  return s;
}

double PumpSpectrum::spectral_intensity_fwhm_hz() const {
  if (cw_) return 0.0;
  return std::sqrt(kLn2) / (kPi * tau_);
}

double PumpSpectrum::omega_sigma() const {
  if (cw_) return 0.0;
  return 1.0 / (std::sqrt(2.0) * tau_);
}

double PumpSpectrum::omega_detuning(double k) const { return v_ * (k - center_k_); }

double PumpSpectrum::phi(double k) const {
  if (cw_) throw DomainError("CW pump has no sampled spectrum");
  const double d = omega_detuning(k) * tau_;
  return std::sqrt(v_ * tau_ / std::sqrt(kPi)) * std::exp(-0.5 * d * d);
}

double PumpSpectrum::energy_outside(double k_lo, double k_hi) const {
  if (cw_) return (k_lo <= center_k_ && center_k_ <= k_hi) ? 0.0 : 1.0;
  const double a = v_ * tau_ * (k_lo - center_k_);
  const double b = v_ * tau_ * (k_hi - center_k_);
  return 0.5 * std::erfc(b) + 0.5 * std::erfc(-a);
}

PumpSpectrum PumpSpectrum::with_alpha(cd alpha) const {
  PumpSpectrum s = *this;
  s.alpha_ = alpha;
  return s;
}

cd PumpSpectrum::cw_line_amplitude() const {
  if (!cw_) throw DomainError("line amplitude is defined for CW pumps only");
  return std::sqrt(2.0 * kPi / v_) * alpha_;
}

PumpSpectrum gaussian_spectrum(double fwhm, const BandSpec& band, Band id) {
  return PumpSpectrum::gaussian(id, band, fwhm, band.omega);
}

double pulse_energy(double peak_power, double fwhm) {
  if (!(peak_power >= 0.0) || !(fwhm > 0.0))
    throw DomainError("pulse_energy requires peak power >= 0 and fwhm > 0");
  return peak_power * fwhm * kGaussianArea;
}

double average_power(double energy, double repetition_rate) {
  if (!(energy >= 0.0) || !(repetition_rate >= 0.0))
    throw DomainError("average_power requires non-negative inputs");
  return energy * repetition_rate;
}

double drive_pulse_energy(const PumpSpec& spec) {
  if (const auto* e = std::get_if<PulseEnergy>(&spec.drive)) return e->joules;
  if (const auto* p = std::get_if<PeakPower>(&spec.drive)) return pulse_energy(p->watts, spec.fwhm());
  throw DomainError("CW pump has no pulse energy");
}

double drive_peak_power(const PumpSpec& spec) {
  if (const auto* p = std::get_if<PeakPower>(&spec.drive)) return p->watts;
  if (const auto* c = std::get_if<CwPower>(&spec.drive)) return c->watts;
  return std::get<PulseEnergy>(spec.drive).joules / (spec.fwhm() * kGaussianArea);
}

double drive_average_power(const PumpSpec& spec) {
  if (const auto* c = std::get_if<CwPower>(&spec.drive)) return c->watts;
  return average_power(drive_pulse_energy(spec), spec.repetition_rate);
}

PumpSpectrum amplitude_from_drive(const PumpSpec& spec, const BandSpec& band,
                                  std::optional<double> resonance_omega) {
  spec.validate();
  const double center = resonance_omega.value_or(band.omega) + spec.detuning;
  const double photon = kHbar * band.omega;
  if (spec.pulsed()) {
    const double n = drive_pulse_energy(spec) / photon;
    return PumpSpectrum::gaussian(spec.band, band, spec.fwhm(), center)
        .with_alpha({std::sqrt(n), 0.0});
  }
  const double flux = std::get<CwPower>(spec.drive).watts / photon;
  return PumpSpectrum::continuous(spec.band, band, center).with_alpha({std::sqrt(flux), 0.0});
}

double cw_enhancement(const RingResonance& res, double detuning) {
  const double g = res.decay_total();
  return 2.0 * res.spec.group_velocity * res.decay(Channel::ac) /
         (res.circumference * (g * g + detuning * detuning));
}

double intracavity_peak_power(const RingResonance& res, const PumpSpec& spec,
                              const BandSpec& band) {
  spec.validate();
  if (res.band != spec.band) throw DomainError("pump band is not the resonance band");
  const double delta = band.omega + spec.detuning - res.omega;
  const double peak = drive_peak_power(spec);
  if (!spec.pulsed()) return cw_enhancement(res, delta) * peak;

  // circulating power |A|^2 with dA/dt = -(Gbar + i delta) A + kappa sqrt(P_in(t)),
  // kappa^2 = 2 v Gamma_ac / L; exponential integrator for piecewise-linear input
  const double gbar = res.decay_total();
  const double kappa = std::sqrt(2.0 * res.spec.group_velocity * res.decay(Channel::ac) /
                                 res.circumference);
  const double fwhm = spec.fwhm();
  const double a = 2.0 * kLn2 / (fwhm * fwhm);
  auto drive = [&](double t) { return std::sqrt(peak) * std::exp(-a * t * t); };

  const double t0 = -4.0 * fwhm;
  const double t1 = 4.0 * fwhm + 20.0 / gbar;
  const double h = std::min(fwhm / 200.0, 1.0 / (20.0 * gbar));
  const auto steps = static_cast<long long>(std::ceil((t1 - t0) / h));
  const cd c{gbar, delta};
  const cd e = std::exp(-c * h);
  const cd phi1 = (1.0 - e) / c;
  const cd phi2 = (1.0 - phi1 / h) / c;

  cd amp{0.0, 0.0};
  double best = 0.0;
  double u0 = drive(t0);
  for (long long n = 0; n < steps; ++n) {
    const double u1 = drive(t0 + (n + 1) * h);
    amp = e * amp + kappa * (u0 * phi1 + (u1 - u0) * phi2);
    best = std::max(best, std::norm(amp));
    u0 = u1;
  }
  return best;
}

}  // namespace tripletsim
