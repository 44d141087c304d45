#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include "tripletsim/config.hpp"
#include "tripletsim/device.hpp"

namespace testing {

using tripletsim::Band;
using tripletsim::cd;

inline constexpr double kV = 8.2418e7;

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline double max_abs_diff(const std::vector<cd>& a, const std::vector<cd>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const std::vector<cd>& a) {
  double m = 0.0;
  for (const cd& z : a) m = std::max(m, std::abs(z));
  return m;
}

// Bands as in the built-in configurations (I and S3 from energy conservation).
inline std::array<tripletsim::BandSpec, 6> nominal_bands() {
  return tripletsim::resolve_bands(tripletsim::build_preset("A"));
}

inline std::vector<tripletsim::ResonanceSpec> standard_resonances(double q_int = 1e6,
                                                                  double q_ac = 1e6) {
  std::vector<tripletsim::ResonanceSpec> r;
  for (Band b : {Band::P1, Band::S1, Band::I}) r.push_back({1, b, q_int, q_ac, 0.0});
  for (Band b : {Band::P2, Band::S2, Band::S3, Band::I}) r.push_back({2, b, q_int, q_ac, 0.0});
  return r;
}

inline tripletsim::Device nominal_device(double q_int = 1e6, double q_ac = 1e6) {
  return tripletsim::Device({}, nominal_bands(), standard_resonances(q_int, q_ac), {250.0, 250.0});
}

inline tripletsim::Device preset_device(const char* id) {
  return tripletsim::build_device(tripletsim::build_preset(id));
}

// small, quick settings for physics tests
inline tripletsim::SimulationConfig small_preset(const char* id, int n = 16) {
  auto cfg = tripletsim::build_preset(id);
  cfg.grid.n = n;
  cfg.grid.idler_n = 128;
  cfg.grid.pump_n = 64;
  return cfg;
}

}  // namespace testing
