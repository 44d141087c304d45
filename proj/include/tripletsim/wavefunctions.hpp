#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tripletsim/device.hpp"
#include "tripletsim/grid.hpp"
#include "tripletsim/pump.hpp"

namespace tripletsim {

enum class Evaluation { tabulated, exact };
// contour: idler integral by residues in the eps -> 0+ limit (all resonance poles sit
// below the real axis); quadrature: trapezoid over the idler grid at finite eps with the
// pole subtracted
enum class IdlerRule { contour, quadrature };

struct GridSettings {
  int n = 64;
  double span = 8.0;
  int idler_n = 256;
  double idler_span = 16.0;
  int pump_n = 256;
  double pump_span_linewidths = 16.0;
  double pump_span_sigmas = 6.0;
  double pump_nodes_per_sigma = 4.0;
  int oversample = 4;
  double epsilon = 1e-3;  // units of the idler linewidth
  bool check_epsilon = true;
  double max_pump_truncation = 1e-3;
  int threads = 1;
  Evaluation evaluation = Evaluation::tabulated;
  IdlerRule idler_rule = IdlerRule::contour;

  void validate() const;
};

// Pump nodes and the pulse-weighted in-coefficient g(k) = D_in(k) phi(k).
class PumpSampling {
 public:
  PumpSampling(const Device& dev, const PumpSpectrum& pump, int ring,
               const GridSettings& settings);

  const PumpSpectrum& spectrum() const { return pump_; }
  bool cw() const { return pump_.cw(); }
  // band detunings and integration weights; for CW a single line node
  const std::vector<double>& detuning() const { return detuning_; }
  const std::vector<double>& k() const { return k_; }
  // w_m D_in(k_m) alpha phi(k_m), or line_amplitude D_in(k_c) for CW
  const std::vector<cd>& weight() const { return weight_; }
  cd g(double k) const;  // D_in(k) phi(k), pulsed only
  double truncation() const { return truncation_; }
  double node_spacing() const;

 private:
  const Device* dev_;
  PumpSpectrum pump_;
  int ring_;
  std::vector<double> detuning_;
  std::vector<double> k_;
  std::vector<double> quad_;
  std::vector<cd> weight_;
  double truncation_ = 0.0;
};

// J(W) = (1/v) int dk3 g(k3) g(k4), with omega detunings summing to W.
class PumpConvolution {
 public:
  PumpConvolution(const Device& dev, const PumpSpectrum& pump1, const GridSettings& settings);
  cd operator()(double total_detuning) const;
  const PumpSampling& sampling() const { return sampling_; }
  // J(W) carries the coupling-point phase exp(i carrier W) exactly
  double carrier() const { return carrier_; }

 private:
  const Device* dev_;
  PumpSampling sampling_;
  std::vector<cd> g_nodes_;
  double v_ = 0.0;
  double reference_k_ = 0.0;
  double carrier_ = 0.0;
};

// G(e) = sum_nu int dq conj(D1^nu(q)) D2^nu(q) / (e - delta_q + i eps), e relative to w_I.
class IdlerPropagator {
 public:
  IdlerPropagator(const Device& dev, const GridSettings& settings, double epsilon);
  cd operator()(double e) const;
  cd overlap(double k) const;   // sum_nu conj(D1^nu) D2^nu
  cd quadrature(double e) const;
  cd closure(double e) const;   // eps -> 0 contour result
  double epsilon() const { return eps_; }
  IdlerRule rule() const { return rule_; }

 private:
  const Device* dev_;
  IdlerRule rule_ = IdlerRule::contour;
  double v_ = 0.0;
  double reference_k_ = 0.0;
  double eps_ = 0.0;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<double> detuning_;
  std::vector<double> weight_;
  std::vector<cd> f_;
};

class UniformTable {
 public:
  UniformTable() = default;
  // interpolates f(x) exp(-i carrier x) and restores the carrier on lookup
  UniformTable(double lo, double hi, double step, const std::function<cd(double)>& f,
               int threads = 1, double carrier = 0.0);
  cd operator()(double x) const;
  std::size_t size() const { return v_.size(); }

 private:
  double lo_ = 0.0;
  double h_ = 1.0;
  double carrier_ = 0.0;
  std::vector<cd> v_;
};

struct BiphotonAmplitude {
  KGrid signal;  // S1
  KGrid idler;   // I (ring-1 linewidth)
  std::array<std::vector<cd>, 3> signal_factor;
  std::array<std::vector<cd>, 3> idler_factor;
  std::vector<cd> core;  // prefactor * J, row-major [signal, idler]
  double probability = 0.0;
  std::array<double, 9> channel_probability{};
  std::vector<std::string> warnings;

  std::shared_ptr<const PumpConvolution> convolution;
  PumpSpectrum pump1;
  double detuning1 = 0.0;  // 2 w_P1 - w_S1 - w_I

  double beta() const;
  std::vector<cd> raw(Channel signal_ch, Channel idler_ch) const;  // beta * phi
  std::vector<cd> amplitude(Channel signal_ch, Channel idler_ch) const;
  double channel(Channel a, Channel b) const {
    return channel_probability[index(a) * 3 + index(b)];
  }
};

struct TriphotonAmplitude {
  KGrid s1;
  KGrid s2;
  KGrid s3;
  std::array<std::vector<cd>, 3> s1_factor;
  std::array<std::vector<cd>, 3> s2_factor;
  std::array<std::vector<cd>, 3> s3_factor;
  std::vector<cd> core;  // prefactor * H, row-major [s1, s2, s3]
  double probability = 0.0;
  std::array<double, 27> channel_probability{};
  double post_selection_norm = 0.0;
  double epsilon = 0.0;
  double epsilon_drift = 0.0;
  std::size_t table_points = 0;
  std::vector<std::string> warnings;

  double sigma() const;
  std::size_t size() const { return core.size(); }
  std::vector<cd> raw(Channel a, Channel b, Channel c) const;  // sigma * Psi
  std::vector<cd> amplitude(Channel a, Channel b, Channel c) const;
  std::vector<cd> post_selected() const;  // N Psi_acacac, unit norm
  double channel(Channel a, Channel b, Channel c) const {
    return channel_probability[(index(a) * 3 + index(b)) * 3 + index(c)];
  }
};

BiphotonAmplitude compute_bwf(const Device& dev, const PumpSpectrum& pump1,
                              const GridSettings& settings);
TriphotonAmplitude compute_twf(const Device& dev, const PumpSpectrum& pump2,
                               const BiphotonAmplitude& bwf, const GridSettings& settings);

struct ProbabilityTable {
  double total = 0.0;
  std::vector<std::pair<std::string, double>> entries;
};
ProbabilityTable channel_probabilities(const BiphotonAmplitude& amp);
ProbabilityTable channel_probabilities(const TriphotonAmplitude& amp);

double two_pair_probability_bound(double pair_probability);
double two_pair_probability_bound(const BiphotonAmplitude& amp);

// Direct quadrature over every intermediate wavenumber using the 4-argument kernels.
std::vector<cd> brute_force_bwf(const Device& dev, const BiphotonAmplitude& bwf,
                                Channel signal_ch, Channel idler_ch);
std::vector<cd> brute_force_twf(const Device& dev, const PumpSpectrum& pump2,
                                const BiphotonAmplitude& bwf, const TriphotonAmplitude& twf,
                                Channel a, Channel b, Channel c, const GridSettings& settings);

}  // namespace tripletsim
