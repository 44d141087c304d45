// Acceptance checks for the triplet simulator. Usage: tripletsim_acceptance [N ...]
// Prints one [PASS]/[FAIL] line per criterion; exit status is nonzero if any selected
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "tripletsim/analysis.hpp"
#include "tripletsim/config.hpp"
#include "tripletsim/constants.hpp"
#include "tripletsim/kernels.hpp"
#include "tripletsim/pipeline.hpp"
#include "tripletsim/pump.hpp"

using namespace tripletsim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "MISS ") + what);
  }
  void note(const std::string& what) { details.push_back("     " + what); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const char* kPresets[3] = {"A", "B", "C"};

// per-preset reference figures
struct Reference {
  double sigma2;
  double rate;
  std::array<double, 3> purity;
};
const std::map<std::string, Reference> kReference = {
    {"A", {5.94e-6, 7.43, {0.974, 0.610, 0.610}}},
    {"B", {1.54e-5, 19.2, {0.982, 0.806, 0.806}}},
    {"C", {2.52e-6, 5.66, {0.995, 0.970, 0.970}}},
};

struct Timed {
  SimulationResult result;
  double seconds = 0.0;
};

// converged grids: n = 64 over +-8 linewidths, doubled idler grid
const Timed& converged(const std::string& id) {
  static std::map<std::string, Timed> cache;
  auto it = cache.find(id);
  if (it != cache.end()) return it->second;
  SimulationConfig cfg = build_preset(id);
  cfg.grid.n = 64;
  cfg.grid.span_linewidths = 8.0;
  cfg.grid.idler_n = 512;
  const auto t0 = std::chrono::steady_clock::now();
  Timed t{simulate(cfg, 0), 0.0};
  t.seconds = seconds_since(t0);
  return cache.emplace(id, std::move(t)).first->second;
}

SimulationConfig small(const std::string& id, int n) {
  SimulationConfig cfg = build_preset(id);
  cfg.grid.n = n;
  cfg.grid.idler_n = 128;
  cfg.grid.pump_n = 64;
  return cfg;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// half a unit in the last quoted digit
double rounding_halfwidth(double value, int digits) {
  const double e = std::floor(std::log10(std::abs(value)));
  return 0.5 * std::pow(10.0, e - (digits - 1));
}

// ---------------------------------------------------------------------------

Outcome rate_arithmetic() {
  Outcome o;
  for (const char* id : kPresets) {
    const SimulationConfig cfg = build_preset(id);
    const Device dev = build_device(cfg);
    const Reference& p = kReference.at(id);
    const double rep = cfg.pump1.repetition_rate_mhz * 1e6;
    const RateReport r = triplet_rate(p.sigma2, dev, rep);
    // rate interval from the three-figure rounding of |sigma|^2
    const double spread = rounding_halfwidth(p.sigma2, 3) / p.sigma2 * r.rate;
    const double lo = r.rate - spread, hi = r.rate + spread;
    const double plo = p.rate - rounding_halfwidth(p.rate, 3);
    const double phi = p.rate + rounding_halfwidth(p.rate, 3);
    o.check(lo <= phi && plo <= hi,
            fmt("%s: R3 = %.4f Hz in [%.4f, %.4f], reference %.3g Hz -> [%.4f, %.4f]", id,
                r.rate, lo, hi, p.rate, plo, phi));
  }
  const SimulationConfig a = build_preset("A");
  const RateReport r = triplet_rate(kReference.at("A").sigma2, build_device(a),
                                    a.pump1.repetition_rate_mhz * 1e6, {3.0, 3.0, 3.0});
  o.check(std::abs(r.detected_rate - 0.93) < 0.005,
          fmt("A with 3 dB per channel: %.4f Hz (expected 0.93 Hz)", r.detected_rate));
  o.summary = "rate arithmetic from reference |sigma|^2";
  return o;
}

Outcome energy_conservation() {
  Outcome o;
  SimulationConfig cfg = build_preset("A");
  cfg.bands[index(Band::S3)].wavelength_nm = 1573.41;  // as quoted, not derived
  const Device dev = build_device(cfg);
  const EnergyReport e = check_energy_conservation(dev);
  const double idler_nm = e.idler_wavelength * 1e9;
  o.check(std::abs(idler_nm - 1552.09) <= 0.01,
          fmt("idler wavelength %.4f nm (1552.09 +- 0.01)", idler_nm));
  o.check(std::abs(e.delta1_linewidths) < 0.1,
          fmt("|delta1| = %.3g linewidths", std::abs(e.delta1_linewidths)));
  o.check(std::abs(e.delta2_linewidths) < 0.1,
          fmt("|delta2| = %.3f linewidths with S3 at 1573.41 nm (bound 0.1)",
              std::abs(e.delta2_linewidths)));
  const EnergyReport derived = check_energy_conservation(build_device(build_preset("A")));
  o.note(fmt("derived S3 %.4f nm gives |delta2| = %.2g linewidths",
             build_device(build_preset("A")).band(Band::S3).wavelength * 1e9,
             std::abs(derived.delta2_linewidths)));
  o.summary = "energy conservation for the quoted wavelengths";
  return o;
}

Outcome purities() {
  Outcome o;
  for (const char* id : kPresets) {
    const Timed& t = converged(id);
    const auto& p = t.result.purity.purity;
    const auto& q = kReference.at(id).purity;
    bool ok = true;
    for (int i = 0; i < 3; ++i) ok = ok && std::abs(p[i] - q[i]) <= 0.02;
    o.check(ok, fmt("%s: %.4f / %.4f / %.4f vs %.3f / %.3f / %.3f", id, p[0], p[1], p[2], q[0],
                    q[1], q[2]));
    o.check(t.seconds < 300.0, fmt("%s: %.1f s (limit 300 s)", id, t.seconds));
  }
  o.summary = "purities at n = 64, span 8";
  return o;
}

Outcome probabilities() {
  Outcome o;
  const Timed& a = converged("A");
  const double beta2 = a.result.bwf.probability;
  const bool beta_ok = std::abs(beta2 - 0.1) <= 0.03;
  o.check(beta_ok, fmt("A: |beta|^2 = %.4f (0.1 +- 30%%)", beta2));
  bool sigma_ok = true;
  std::vector<double> ratio;
  for (const char* id : kPresets) {
    const double s = converged(id).result.twf.probability;
    const double p = kReference.at(id).sigma2;
    ratio.push_back(s / p);
    const bool ok = std::abs(s / p - 1.0) <= 0.3;
    sigma_ok = sigma_ok && ok;
    o.check(ok, fmt("%s: |sigma|^2 = %.4g vs %.3g (ratio %.3f)", id, s, p, s / p));
  }
  if (beta_ok && sigma_ok) {
    o.summary = "pair and triplet probabilities";
    return o;
  }

  // fallback: scaling laws plus a preset-independent offset
  o.note("outside 30%; checking scaling laws and offset constancy");
  Outcome fb;
  const SimulationConfig base = small("B", 16);
  const SimulationResult r0 = simulate(base);
  SimulationConfig c1 = base;
  c1.pump1.pulse_energy_pj = *base.pump1.pulse_energy_pj * 2.0;
  const SimulationResult r1 = simulate(c1);
  SimulationConfig c2 = base;
  c2.pump2.pulse_energy_pj = *base.pump2.pulse_energy_pj * 3.0;
  const SimulationResult r2 = simulate(c2);
  const double db = rel(r1.bwf.probability / r0.bwf.probability, 4.0);
  const double ds1 = rel(r1.twf.probability / r0.twf.probability, 4.0);
  const double ds2 = rel(r2.twf.probability / r0.twf.probability, 3.0);
  fb.check(db < 1e-6, fmt("|beta|^2 ~ P_peak^2: deviation %.2g", db));
  fb.check(ds1 < 1e-6, fmt("|sigma|^2 ~ E_P1^2: deviation %.2g", ds1));
  fb.check(ds2 < 1e-6, fmt("|sigma|^2 ~ E_P2: deviation %.2g", ds2));
  const double lo = *std::min_element(ratio.begin(), ratio.end());
  const double hi = *std::max_element(ratio.begin(), ratio.end());
  fb.check(hi / lo <= 1.3, fmt("offset |sigma|^2 / reference spans %.3f .. %.3f (max/min %.2f, "
                               "bound 1.3)",
                               lo, hi, hi / lo));
  for (auto& d : fb.details) o.details.push_back(d);
  o.pass = fb.pass;
  o.summary = "pair and triplet probabilities (scaling fallback)";
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  for (const char* id : kPresets) {
    const SimulationConfig cfg = build_preset(id);
    const Device dev = build_device(cfg);
    GridSettings s = grid_settings(cfg, 0);
    s.n = 16;
    s.pump_n = 16;
    s.idler_n = 16;
    s.pump_nodes_per_sigma = 0.0;
    s.evaluation = Evaluation::exact;
    s.idler_rule = IdlerRule::quadrature;
    s.check_epsilon = false;
    const PumpSpectrum p1 = amplitude_from_drive(build_pump(cfg.pump1), dev.band(Band::P1),
                                                 dev.require(1, Band::P1).omega);
    const PumpSpectrum p2 = amplitude_from_drive(build_pump(cfg.pump2), dev.band(Band::P2),
                                                 dev.require(2, Band::P2).omega);
    const BiphotonAmplitude bwf = compute_bwf(dev, p1, s);
    const TriphotonAmplitude twf = compute_twf(dev, p2, bwf, s);
    const auto fact = twf.raw(Channel::ac, Channel::ac, Channel::ac);
    const auto brute =
        brute_force_twf(dev, p2, bwf, twf, Channel::ac, Channel::ac, Channel::ac, s);
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < fact.size(); ++i) {
      diff = std::max(diff, std::abs(fact[i] - brute[i]));
      scale = std::max(scale, std::abs(fact[i]));
    }
    o.check(diff <= 1e-8 * scale, fmt("%s: max |factorized - direct| / max = %.2g", id,
                                      diff / scale));
  }
  const double dt = seconds_since(t0);
  o.check(dt < 120.0, fmt("%.1f s (limit 120 s)", dt));
  o.summary = "factorized triphoton amplitude vs direct quadrature on 16-point grids";
  return o;
}

Outcome pump_bookkeeping() {
  Outcome o;
  auto within = [&](const char* what, double got, double expected) {
    o.check(rel(got, expected) <= 0.1,
            fmt("%s: %.4g vs %.4g (%.1f%%)", what, got, expected, 100.0 * rel(got, expected)));
  };
  const SimulationConfig a = build_preset("A"), b = build_preset("B"), c = build_preset("C");
  // A and B quote the P1 peak power; the energy follows from the Gaussian identity
  within("A/B P1 energy from 0.53 mW, 300 ps [pJ]", pulse_energy(0.53e-3, 300e-12) * 1e12, 0.17);
  within("B P2 energy from 0.12 W, 300 ps [pJ]", pulse_energy(0.12, 300e-12) * 1e12, 36.7);
  within("C P1 energy [pJ]", drive_pulse_energy(build_pump(c.pump1)) * 1e12, 0.52);
  within("C P2 energy [pJ]", drive_pulse_energy(build_pump(c.pump2)) * 1e12, 20.5);
  within("A P1 average [uW]", drive_average_power(build_pump(a.pump1)) * 1e6, 1.60);
  within("B P2 average [mW]", drive_average_power(build_pump(b.pump2)) * 1e3, 0.34);
  within("C P1 average [uW]", drive_average_power(build_pump(c.pump1)) * 1e6, 4.87);
  within("C P2 average [mW]", drive_average_power(build_pump(c.pump2)) * 1e3, 0.19);

  const Device dev = build_device(a);
  const RingResonance& p2 = dev.require(2, Band::P2);
  const double cw = intracavity_peak_power(p2, build_pump(a.pump2), dev.band(Band::P2));
  o.check(cw >= 1.0 && cw <= 1.6, fmt("A: 1.4 mW CW circulates %.3f W (1 .. 1.6 W)", cw));
  const Device db = build_device(b);
  const double pk = intracavity_peak_power(db.require(2, Band::P2), build_pump(b.pump2),
                                           db.band(Band::P2));
  o.note(fmt("B: pulsed P2 peaks at %.2f W in the ring (quoted bound 10 W)", pk));
  o.summary = "pump energies, average powers, circulating power";
  return o;
}

double bwf_norm(const BiphotonAmplitude& b) {
  double s = 0.0;
  const std::size_t n2 = b.idler.k.size();
  for (Channel x : kChannels)
    for (Channel y : kChannels) {
      const auto a = b.amplitude(x, y);
      for (std::size_t i = 0; i < b.signal.k.size(); ++i)
        for (std::size_t j = 0; j < n2; ++j)
          s += b.signal.weight[i] * b.idler.weight[j] * std::norm(a[i * n2 + j]);
    }
  return s;
}

double twf_norm(const TriphotonAmplitude& t) {
  double s = 0.0;
  for (Channel x : kChannels)
    for (Channel y : kChannels)
      for (Channel z : kChannels) {
        const auto a = t.amplitude(x, y, z);
        s += view_of(a, t.s1, t.s2, t.s3).norm();
      }
  return s;
}

// uniform y-polarized field in a rectangular core
ModeProfileGrid box(const Device& dev, int cx, int cz) {
  ModeProfileGrid g;
  g.nx = 40;
  g.nz = 30;
  g.dx = 20e-9;
  g.dz = 15e-9;
  g.eps.assign(g.cells(), 1.444 * 1.444);
  g.chi_mask.assign(g.cells(), 0.0);
  for (Band b : {Band::S1, Band::I, Band::P1}) {
    ModeField m;
    m.band = b;
    m.omega = dev.band(b).omega;
    m.group_velocity = dev.band(b).group_velocity;
    m.e.assign(g.cells(), Vec3c{});
    g.modes.push_back(m);
  }
  const int x0 = (g.nx - cx) / 2, z0 = (g.nz - cz) / 2;
  for (int i = x0; i < x0 + cx; ++i)
    for (int j = z0; j < z0 + cz; ++j) {
      const std::size_t c = static_cast<std::size_t>(i) * g.nz + j;
      g.eps[c] = 3.5 * 3.5;
      g.chi_mask[c] = 1.0;
      for (ModeField& m : g.modes) m.e[c] = {0.0, 1.0, 0.0};
    }
  normalize_modes(g);
  return g;
}

Outcome invariants() {
  Outcome o;

  double worst_norm = 0.0;
  for (const char* id : kPresets) {
    const SimulationResult r = simulate(small(id, 16));
    worst_norm = std::max({worst_norm, std::abs(bwf_norm(r.bwf) - 1.0),
                           std::abs(twf_norm(r.twf) - 1.0)});
  }
  o.check(worst_norm < 1e-5, fmt("channel-summed norms of BWF and TWF: max |sum - 1| = %.2g",
                                 worst_norm));

  double worst_eta = 0.0;
  for (const char* id : kPresets) {
    const Device dev = build_device(build_preset(id));
    for (const RingResonance& r : dev.resonances()) {
      double s = 0.0;
      for (Channel c : kChannels) s += r.efficiency(c);
      worst_eta = std::max(worst_eta, std::abs(s - 1.0));
    }
  }
  o.check(worst_eta < 1e-12, fmt("escape-efficiency partition: %.2g", worst_eta));

  double worst_a = 0.0;
  for (const char* id : kPresets) {
    SimulationConfig cfg = small(id, 12);
    std::vector<SimulationResult> runs;
    for (double a : {0.0, 50.0, 137.0}) {
      cfg.coupling_half_separation_um = a;
      runs.push_back(simulate(cfg));
    }
    for (const auto& r : runs) {
      worst_a = std::max({worst_a, rel(r.bwf.probability, runs[0].bwf.probability),
                          rel(r.twf.probability, runs[0].twf.probability)});
      for (int i = 0; i < 3; ++i)
        worst_a = std::max(worst_a, std::abs(r.purity.purity[i] - runs[0].purity.purity[i]));
    }
  }
  o.check(worst_a < 1e-9, fmt("coupling-point invariance (a = 0, 50, 137 um): %.2g", worst_a));

  {
    const SimulationConfig cfg = small("B", 12);
    const Device dev = build_device(cfg);
    const GridSettings s = grid_settings(cfg);
    const PumpSpectrum p1 = amplitude_from_drive(build_pump(cfg.pump1), dev.band(Band::P1),
                                                 dev.require(1, Band::P1).omega);
    const PumpSpectrum p2 = amplitude_from_drive(build_pump(cfg.pump2), dev.band(Band::P2),
                                                 dev.require(2, Band::P2).omega);
    const auto b0 = compute_bwf(dev, p1, s);
    const auto t0 = compute_twf(dev, p2, b0, s);
    const auto b1 = compute_bwf(dev, p1.with_alpha(p1.alpha() * std::polar(1.0, 0.83)), s);
    const auto t1 = compute_twf(dev, p2.with_alpha(p2.alpha() * std::polar(1.0, -2.1)), b1, s);
    const auto q0 = t0.post_selected();
    const auto q1 = t1.post_selected();
    const auto u0 = purity(view_of(q0, t0.s1, t0.s2, t0.s3));
    const auto u1 = purity(view_of(q1, t1.s1, t1.s2, t1.s3));
    double w = std::max(rel(b1.probability, b0.probability), rel(t1.probability, t0.probability));
    for (int i = 0; i < 3; ++i) w = std::max(w, std::abs(u1.purity[i] - u0.purity[i]));
    o.check(w < 1e-9, fmt("global pump phases: %.2g", w));
  }

  const auto& pa = converged("A").result.purity.purity;
  const auto& pb = converged("B").result.purity.purity;
  const auto& pc = converged("C").result.purity.purity;
  o.check(pc[0] > pb[0] && pb[0] > pa[0],
          fmt("p1 ordering C > B > A: %.5f / %.5f / %.5f", pc[0], pb[0], pa[0]));
  o.check(pc[1] > pb[1] && pb[1] > pa[1],
          fmt("p2 ordering C > B > A: %.5f / %.5f / %.5f", pc[1], pb[1], pa[1]));

  {
    double worst = 0.0;
    const Device dev = build_device(build_preset("C"));
    for (const RingResonance& r : dev.resonances()) {
      const double v = r.spec.group_velocity;
      const double gbar = r.decay_total();
      // k = K + (gbar/v) tan(theta), midpoint rule over the whole line
      const int n = 2000;
      const double h = kPi / n;
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        const double th = -kPi / 2.0 + (i + 0.5) * h;
        const double k = r.spec.reference_wavenumber + gbar / v * std::tan(th);
        const double jac = gbar / v / (std::cos(th) * std::cos(th));
        s += std::norm(field_enhancement(r, Channel::ac, Sign::plus, k)) * jac;
      }
      s *= h;
      const double expect = 2.0 * kPi * r.decay(Channel::ac) / (r.circumference * gbar);
      worst = std::max(worst, rel(s, expect));
    }
    o.check(worst < 1e-6, fmt("Lorentzian area identity: %.2g", worst));
  }

  {
    const Chi3Tensor t = Chi3Tensor::cubic_kleinman(1.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
    double worst = 0.0;
    for (int trial = 0; trial < 8; ++trial) {
      const double ax = ang(rng);
      const Mat3 rx{{{1.0, 0.0, 0.0}, {0.0, std::cos(ax), -std::sin(ax)},
                     {0.0, std::sin(ax), std::cos(ax)}}};
      const Mat3 rz = rotation_about_z(ang(rng));
      Mat3 r{};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k) r[i][j] += rz[i][k] * rx[k][j];
      const Chi3Tensor tr = t.rotated(r);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l)
              worst = std::max(worst, std::abs(tr(i, j, k, l) - t(i, j, k, l)));
    }
    o.check(worst < 1e-12, fmt("cubic tensor rotation invariance: %.2g", worst));
  }

  {
    const Device dev = build_device(build_preset("A"));
    const double chi = 2.0e-19;
    const ModeProfileGrid g = box(dev, 24, 14);
    const double area = 24 * 14 * g.dx * g.dz;
    const double w = g.mode(Band::P1).omega;
    const double v = g.mode(Band::P1).group_velocity;
    const double expect = 3.0 * chi * w / (4.0 * kEpsilon0 * v * v * std::pow(3.5, 4) * area);
    const double got = gamma_nl(g, {Band::S1, Band::I, Band::P1, Band::P1}, chi).value;
    o.check(rel(got, expect) < 1e-10, fmt("gamma_NL of a uniform box: %.2g", rel(got, expect)));
  }

  o.summary = "invariant suite";
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  Outcome o;
  const fs::path root =
      fs::temp_directory_path() / ("tripletsim_accept_" + std::to_string(::getpid()));
  fs::remove_all(root);
  for (const char* id : {"B", "C"}) {
    SimulationConfig cfg = build_preset(id);
    cfg.grid.n = 24;
    std::vector<fs::path> dirs;
    for (int threads : {1, 2, 5}) {
      RunOptions opt;
      opt.out_dir = root / (std::string(id) + "_" + std::to_string(threads));
      opt.threads = threads;
      run(cfg, opt);
      dirs.push_back(opt.out_dir);
    }
    std::size_t files = 0, same = 0;
    for (const auto& e : fs::directory_iterator(dirs[0])) {
      if (e.path().extension() != ".bin") continue;
      ++files;
      const std::string ref = slurp(e.path());
      bool eq = true;
      for (std::size_t d = 1; d < dirs.size(); ++d)
        eq = eq && slurp(dirs[d] / e.path().filename()) == ref;
      same += eq ? 1 : 0;
    }
    o.check(files > 0 && same == files,
            fmt("%s: %zu of %zu arrays identical for 1, 2 and 5 threads", id, same, files));
  }
  std::error_code ec;
  fs::remove_all(root, ec);
  o.summary = "byte-identical exports across worker counts";
  return o;
}

const std::map<int, std::function<Outcome()>> kCriteria = {
    {1, rate_arithmetic}, {2, energy_conservation}, {3, purities},   {4, probabilities},
    {5, oracle_equivalence}, {6, pump_bookkeeping}, {7, invariants}, {8, determinism},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int n = std::atoi(argv[i]);
    if (!kCriteria.count(n)) {
      std::cerr << "unknown criterion '" << argv[i] << "' (expected 1..8)\n";
      return 2;
    }
    selected.push_back(n);
  }
  if (selected.empty())
    for (const auto& [n, f] : kCriteria) selected.push_back(n);

  int failed = 0;
  for (int n : selected) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = kCriteria.at(n)();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = "threw";
      o.details.push_back(std::string("MISS exception: ") + e.what());
    }
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << n << " " << o.summary
              << fmt(" (%.1f s)", seconds_since(t0)) << "\n";
    for (const auto& d : o.details) std::cout << "    " << d << "\n";
    std::cout.flush();
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
