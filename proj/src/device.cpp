#include "tripletsim/device.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tripletsim/errors.hpp"

namespace tripletsim {

namespace {

constexpr std::array<std::string_view, 6> kBandNames{"P1", "S1", "I", "P2", "S2", "S3"};
constexpr std::array<std::string_view, 3> kChannelNames{"ac", "ph1", "ph2"};

const cd kI{0.0, 1.0};

}  // namespace

std::string_view to_string(Band b) { return kBandNames[index(b)]; }
std::string_view to_string(Channel c) { return kChannelNames[index(c)]; }

Band parse_band(std::string_view name) {
  for (Band b : kBands)
    if (to_string(b) == name) return b;
  throw DomainError("unknown band '" + std::string(name) + "'");
}

Channel parse_channel(std::string_view name) {
  for (Channel c : kChannels)
    if (to_string(c) == name) return c;
  throw DomainError("unknown channel '" + std::string(name) + "'");
}

BandSpec BandSpec::from_wavelength(double wavelength_m, double group_velocity,
                                   std::optional<double> reference_wavenumber) {
  if (!(wavelength_m > 0.0) || !std::isfinite(wavelength_m))
    throw DomainError("band wavelength must be positive");
  if (!(group_velocity > 0.0) || !std::isfinite(group_velocity))
    throw DomainError("group velocity must be positive");
  BandSpec b;
  b.wavelength = wavelength_m;
  b.omega = angular_frequency_from_wavelength(wavelength_m);
  b.group_velocity = group_velocity;
  b.reference_wavenumber = reference_wavenumber.value_or(b.omega / group_velocity);
  return b;
}

double dispersion_omega(const BandSpec& band, double k) {
  return band.omega + band.group_velocity * (k - band.reference_wavenumber);
}

double wavenumber_at(const BandSpec& band, double omega) {
  return band.reference_wavenumber + (omega - band.omega) / band.group_velocity;
}

double decay_rate(double omega, double q) {
  if (!(omega > 0.0) || !(q > 0.0)) throw DomainError("decay_rate requires omega > 0 and Q > 0");
  if (std::isinf(q)) return 0.0;
  return omega / (2.0 * q);
}

double escape_efficiency(double gamma_channel, double gamma_total) {
  if (!(gamma_total > 0.0)) throw DomainError("escape_efficiency requires Gamma_total > 0");
  if (gamma_channel < 0.0 || gamma_channel > gamma_total)
    throw DomainError("escape_efficiency requires 0 <= Gamma_channel <= Gamma_total");
  return gamma_channel / gamma_total;
}

double RingResonance::decay(Channel c) const {
  if (c == Channel::ac) return decay_rate(omega, q_coupling);
  if (c == phantom()) return decay_rate(omega, q_intrinsic);
  return 0.0;
}

double RingResonance::decay_total() const {
  return decay(Channel::ac) + decay(phantom());
}

double RingResonance::efficiency(Channel c) const {
  return escape_efficiency(decay(c), decay_total());
}

double RingResonance::coupling(Channel c) const {
  return std::sqrt(2.0 * spec.group_velocity * decay(c));
}

cd field_enhancement(const RingResonance& res, Channel channel, Sign sign, double k) {
  const double g = res.coupling(channel);
  if (g == 0.0) return {0.0, 0.0};
  const double detuning = res.omega - dispersion_omega(res.spec, k);
  const double gbar = res.decay_total();
  const cd denom{detuning, sign == Sign::plus ? gbar : -gbar};
  return g / (std::sqrt(res.circumference) * denom);
}

Device::Device(const DeviceGeometry& geometry, const std::array<BandSpec, 6>& bands,
               const std::vector<ResonanceSpec>& resonances,
               const std::array<double, 2>& gamma_nl)
    : geometry_(geometry), bands_(bands), gamma_nl_(gamma_nl) {
  if (!(geometry.ring1_radius > 0.0) || !(geometry.ring2_radius > 0.0))
    throw DomainError("ring radii must be positive");
  if (!(geometry.coupling_half_separation >= 0.0))
    throw DomainError("coupling half-separation must be non-negative");
  for (double g : gamma_nl)
    if (!(g >= 0.0) || !std::isfinite(g)) throw DomainError("gamma_nl must be finite and >= 0");
  for (const BandSpec& b : bands)
    if (!(b.omega > 0.0) || !(b.group_velocity > 0.0))
      throw DomainError("band frequencies and group velocities must be positive");

  for (const ResonanceSpec& r : resonances) {
    if (r.ring != 1 && r.ring != 2) throw DomainError("ring index must be 1 or 2");
    if (resonance(r.ring, r.band))
      throw DomainError("duplicate resonance for band " + std::string(to_string(r.band)) +
                        " in ring " + std::to_string(r.ring));
    if (!(r.q_intrinsic > 0.0) || !(r.q_coupling > 0.0))
      throw DomainError("quality factors must be positive");
    RingResonance res;
    res.ring = r.ring;
    res.band = r.band;
    res.spec = bands_[index(r.band)];
    res.omega = res.spec.omega + r.omega_offset;
    if (!(res.omega > 0.0)) throw DomainError("resonant frequency must be positive");
    res.q_intrinsic = r.q_intrinsic;
    res.q_coupling = r.q_coupling;
    res.circumference = circumference(r.ring);
    if (!(res.decay_total() > 0.0)) throw DomainError("resonance needs a finite loaded Q");
    resonances_.push_back(res);
  }

  for (Band b : {Band::P1, Band::S1, Band::I})
    if (!hosts(1, b))
      throw DomainError("ring 1 must host band " + std::string(to_string(b)));
  for (Band b : {Band::P2, Band::S2, Band::S3, Band::I})
    if (!hosts(2, b))
      throw DomainError("ring 2 must host band " + std::string(to_string(b)));
}

const RingResonance* Device::resonance(int ring, Band b) const {
  for (const RingResonance& r : resonances_)
    if (r.ring == ring && r.band == b) return &r;
  return nullptr;
}

const RingResonance& Device::require(int ring, Band b) const {
  const RingResonance* r = resonance(ring, b);
  if (!r)
    throw DomainError("band " + std::string(to_string(b)) + " is not hosted by ring " +
                      std::to_string(ring));
  return *r;
}

double Device::circumference(int ring) const {
  if (ring == 1) return 2.0 * kPi * geometry_.ring1_radius;
  if (ring == 2) return 2.0 * kPi * geometry_.ring2_radius;
  throw DomainError("ring index must be 1 or 2");
}

double Device::gamma_nl(int ring) const {
  if (ring != 1 && ring != 2) throw DomainError("ring index must be 1 or 2");
  return gamma_nl_[ring - 1];
}

double Device::min_linewidth() const {
  double m = std::numeric_limits<double>::infinity();
  for (const RingResonance& r : resonances_) m = std::min(m, r.decay_total());
  return m;
}

cd asymptotic_coefficient(const Device& dev, Band band, Direction direction,
                          Channel channel, int ring, double k) {
  const bool supported =
      direction == Direction::out || (direction == Direction::in && channel == Channel::ac);
  if (!supported) throw DomainError("asymptotic-in fields exist only for the ac channel");
  if (ring != 1 && ring != 2) throw DomainError("ring index must be 1 or 2");

  const RingResonance* here = dev.resonance(ring, band);
  if (!here) return {0.0, 0.0};
  const RingResonance* r1 = dev.resonance(1, band);
  const RingResonance* r2 = dev.resonance(2, band);

  const BandSpec& spec = dev.band(band);
  const double v = spec.group_velocity;
  const double phase_arg = (k - spec.reference_wavenumber) * dev.half_separation();
  const cd phase = ring == 1 ? std::polar(1.0, -phase_arg) : std::polar(1.0, phase_arg);

  // -i gamma sqrt(L) F / v : transmission correction picked up passing the other ring
  auto pass = [&](const RingResonance* r, Channel c, Sign s) -> cd {
    if (!r) return {0.0, 0.0};
    return kI * r->coupling(Channel::ac) * std::sqrt(r->circumference) *
           field_enhancement(*r, c, s, k) / v;
  };

  if (direction == Direction::in) {
    if (ring == 1) return field_enhancement(*here, Channel::ac, Sign::minus, k) * phase;
    return field_enhancement(*here, Channel::ac, Sign::minus, k) *
           (1.0 + pass(r1, Channel::ac, Sign::minus)) * phase;
  }

  switch (channel) {
    case Channel::ac:
      if (ring == 1)
        return field_enhancement(*here, Channel::ac, Sign::plus, k) *
               (1.0 - pass(r2, Channel::ac, Sign::plus)) * phase;
      return field_enhancement(*here, Channel::ac, Sign::plus, k) * phase;
    case Channel::ph1:
      if (ring == 2) return {0.0, 0.0};
      return field_enhancement(*here, Channel::ph1, Sign::plus, k) * phase;
    case Channel::ph2:
      if (ring == 2) return field_enhancement(*here, Channel::ph2, Sign::plus, k) * phase;
      if (!r2) return {0.0, 0.0};
      return field_enhancement(*here, Channel::ac, Sign::plus, k) *
             (-kI * r2->coupling(Channel::ac) * std::sqrt(r2->circumference) *
              field_enhancement(*r2, Channel::ph2, Sign::plus, k) / v) *
             phase;
  }
  return {0.0, 0.0};
}

bool EnergyReport::aligned(double tolerance_linewidths) const {
  return std::abs(delta1_linewidths) <= tolerance_linewidths &&
         std::abs(delta2_linewidths) <= tolerance_linewidths;
}

double conserving_idler_wavelength(double pump_wavelength, double signal_wavelength) {
  const double inv = 2.0 / pump_wavelength - 1.0 / signal_wavelength;
  if (!(inv > 0.0)) throw DomainError("no positive idler frequency conserves energy");
  return 1.0 / inv;
}

EnergyReport check_energy_conservation(const Device& dev) {
  auto w = [&](Band b) { return dev.band(b).omega; };
  EnergyReport r;
  r.delta1 = 2.0 * w(Band::P1) - w(Band::S1) - w(Band::I);
  r.delta2 = w(Band::I) + w(Band::P2) - w(Band::S2) - w(Band::S3);
  r.min_linewidth = dev.min_linewidth();
  r.delta1_linewidths = r.delta1 / r.min_linewidth;
  r.delta2_linewidths = r.delta2 / r.min_linewidth;
  r.idler_wavelength =
      conserving_idler_wavelength(dev.band(Band::P1).wavelength, dev.band(Band::S1).wavelength);
  return r;
}

}  // namespace tripletsim
