#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "tripletsim/constants.hpp"

namespace tripletsim {

enum class Band { P1, S1, I, P2, S2, S3 };
enum class Channel { ac, ph1, ph2 };
enum class Direction { in, out };
enum class Sign { minus, plus };

inline constexpr std::array<Band, 6> kBands{Band::P1, Band::S1, Band::I,
                                            Band::P2, Band::S2, Band::S3};
inline constexpr std::array<Channel, 3> kChannels{Channel::ac, Channel::ph1,
                                                  Channel::ph2};

inline constexpr int index(Band b) { return static_cast<int>(b); }
inline constexpr int index(Channel c) { return static_cast<int>(c); }

std::string_view to_string(Band b);
std::string_view to_string(Channel c);
Band parse_band(std::string_view name);
Channel parse_channel(std::string_view name);

struct BandSpec {
  double wavelength = 0.0;            // m, vacuum
  double omega = 0.0;                 // rad/s
  double reference_wavenumber = 0.0;  // rad/m
  double group_velocity = 0.0;        // m/s

  // K defaults to omega / v; only differences k - K ever enter the physics.
  static BandSpec from_wavelength(double wavelength_m, double group_velocity,
                                  std::optional<double> reference_wavenumber = {});
};

double dispersion_omega(const BandSpec& band, double k);
double wavenumber_at(const BandSpec& band, double omega);

double decay_rate(double omega, double q);
double escape_efficiency(double gamma_channel, double gamma_total);

struct RingResonance {
  int ring = 1;
  Band band = Band::P1;
  double omega = 0.0;
  double q_intrinsic = 1e6;
  double q_coupling = 1e6;
  double circumference = 0.0;
  BandSpec spec;

  Channel phantom() const { return ring == 1 ? Channel::ph1 : Channel::ph2; }
  bool attached(Channel c) const { return c == Channel::ac || c == phantom(); }
  double decay(Channel c) const;
  double decay_total() const;
  double loaded_q() const { return omega / (2.0 * decay_total()); }
  double efficiency(Channel c) const;
  // gamma with |gamma|^2 = 2 v Gamma, taken real and non-negative
  double coupling(Channel c) const;
  double dwell_time() const { return 1.0 / (2.0 * decay_total()); }
};

// F_{+-}(k) = gamma / (sqrt(L) ((omega_res - omega_k) +- i Gamma_bar))
cd field_enhancement(const RingResonance& res, Channel channel, Sign sign, double k);

struct ResonanceSpec {
  int ring = 1;
  Band band = Band::P1;
  double q_intrinsic = 1e6;
  double q_coupling = 1e6;
  double omega_offset = 0.0;  // resonance minus band center, rad/s
};

struct DeviceGeometry {
  double ring1_radius = 20e-6;
  double ring2_radius = 10e-6;
  double coupling_half_separation = 50e-6;
};

class Device {
 public:
  Device(const DeviceGeometry& geometry, const std::array<BandSpec, 6>& bands,
         const std::vector<ResonanceSpec>& resonances,
         const std::array<double, 2>& gamma_nl);

  const BandSpec& band(Band b) const { return bands_[index(b)]; }
  const RingResonance* resonance(int ring, Band b) const;
  const RingResonance& require(int ring, Band b) const;
  bool hosts(int ring, Band b) const { return resonance(ring, b) != nullptr; }
  const std::vector<RingResonance>& resonances() const { return resonances_; }
  double circumference(int ring) const;
  double half_separation() const { return geometry_.coupling_half_separation; }
  double gamma_nl(int ring) const;
  const DeviceGeometry& geometry() const { return geometry_; }
  double min_linewidth() const;

 private:
  DeviceGeometry geometry_;
  std::array<BandSpec, 6> bands_;
  std::vector<RingResonance> resonances_;
  std::array<double, 2> gamma_nl_;
};

// Reduced asymptotic amplitude inside ring `ring` (zero if the band is absent).
cd asymptotic_coefficient(const Device& dev, Band band, Direction direction,
                          Channel channel, int ring, double k);

struct EnergyReport {
  double delta1 = 0.0;  // 2 w_P1 - w_S1 - w_I
  double delta2 = 0.0;  // w_I + w_P2 - w_S2 - w_S3
  double min_linewidth = 0.0;
  double delta1_linewidths = 0.0;
  double delta2_linewidths = 0.0;
  double idler_wavelength = 0.0;  // solves delta1 = 0
  bool aligned(double tolerance_linewidths = 0.1) const;
};

EnergyReport check_energy_conservation(const Device& dev);

double conserving_idler_wavelength(double pump_wavelength, double signal_wavelength);

}  // namespace tripletsim
