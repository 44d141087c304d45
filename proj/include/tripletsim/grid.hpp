#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "tripletsim/device.hpp"

namespace tripletsim {

// Uniform grid in x = v (k - K) / Gbar over [-span, span], trapezoid weights in k.
struct KGrid {
  Band band = Band::S1;
  int n = 0;
  double span = 0.0;
  double linewidth = 0.0;
  double reference_wavenumber = 0.0;
  double group_velocity = 0.0;
  std::vector<double> x;
  std::vector<double> k;
  std::vector<double> detuning;  // omega_k - omega_band
  std::vector<double> weight;

  static KGrid make(Band band, const BandSpec& spec, double linewidth, int n, double span);
  double dk() const { return k.size() > 1 ? k[1] - k[0] : 0.0; }
  double domega() const { return dk() * group_velocity; }
};

// Uniform trapezoid nodes on [lo, hi].
struct Quadrature {
  std::vector<double> node;
  std::vector<double> weight;
  static Quadrature trapezoid(double lo, double hi, int n);
};

double pairwise_sum(std::span<const double> values);

// Runs body(i) for i in [0, count) on `threads` workers; each index is
// visited exactly once and results must be written to per-index slots.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

int resolve_threads(int requested);

}  // namespace tripletsim
