#include "tripletsim/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include "tripletsim/errors.hpp"
#include "tripletsim/io.hpp"

namespace tripletsim {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

double max_abs(const std::vector<cd>& v) {
  double m = 0.0;
  for (const cd& x : v) m = std::max(m, std::abs(x));
  return m;
}

ordered_json pump_json(const PumpSpec& spec, const PumpSpectrum& s, double intracavity) {
  ordered_json j;
  j["pulsed"] = spec.pulsed();
  if (spec.pulsed()) {
    j["fwhm_s"] = spec.fwhm();
    j["pulse_energy_j"] = drive_pulse_energy(spec);
    j["photons_per_pulse"] = std::norm(s.alpha());
    j["spectral_fwhm_hz"] = s.spectral_intensity_fwhm_hz();
  } else {
    j["photon_flux_per_s"] = std::norm(s.alpha());
  }
  j["peak_power_w"] = drive_peak_power(spec);
  j["average_power_w"] = drive_average_power(spec);
  j["intracavity_peak_power_w"] = intracavity;
  return j;
}

}  // namespace

ordered_json SimulationResult::results_json() const {
  ordered_json r;
  r["beta2"] = bwf.probability;
  r["sigma2"] = twf.probability;
  r["purity"] = purity.purity;
  r["purity_trace"] = purity.purity_trace;
  r["post_selection_norm"] = twf.post_selection_norm;
  r["acacac_share"] =
      twf.probability > 0.0 ? twf.channel(Channel::ac, Channel::ac, Channel::ac) / twf.probability
                            : 0.0;
  r["rate_hz"] = rate.rate;
  r["detected_rate_hz"] = rate.detected_rate;
  r["repetition_rate_hz"] = rate.repetition_rate;
  r["escape_efficiency_product"] = rate.efficiency_product;
  r["external_loss_db"] = rate.loss_db;
  r["two_pair_bound"] = two_pair_probability_bound(bwf.probability);

  ordered_json bp = ordered_json::object();
  for (const auto& [name, p] : channel_probabilities(bwf).entries) bp[name] = p;
  ordered_json tp = ordered_json::object();
  for (const auto& [name, p] : channel_probabilities(twf).entries) tp[name] = p;
  r["pair_channel_probabilities"] = bp;
  r["triplet_channel_probabilities"] = tp;

  ordered_json e;
  e["delta1_rad_per_s"] = energy.delta1;
  e["delta2_rad_per_s"] = energy.delta2;
  e["delta1_linewidths"] = energy.delta1_linewidths;
  e["delta2_linewidths"] = energy.delta2_linewidths;
  e["min_linewidth_rad_per_s"] = energy.min_linewidth;
  e["conserving_idler_wavelength_nm"] = energy.idler_wavelength * 1e9;
  ordered_json wl = ordered_json::object();
  for (Band b : kBands) wl[std::string(to_string(b))] = device->band(b).wavelength * 1e9;
  e["band_wavelength_nm"] = wl;
  r["energy"] = e;

  r["pumps"] = ordered_json{{"P1", pump_json(pump1_spec, pump1, p1_intracavity_peak)},
                            {"P2", pump_json(pump2_spec, pump2, p2_intracavity_peak)}};

  ordered_json c;
  c["grid_n"] = settings.n;
  c["grid_span_linewidths"] = settings.span;
  c["idler_n"] = settings.idler_n;
  c["idler_span_linewidths"] = settings.idler_span;
  c["epsilon_linewidths"] = twf.epsilon;
  c["epsilon_drift"] = twf.epsilon_drift;
  c["epsilon_checked"] = settings.check_epsilon;
  c["pump1_truncation"] = bwf.convolution->sampling().truncation();
  c["pump1_nodes"] = bwf.convolution->sampling().k().size();
  c["table_points"] = twf.table_points;
  c["evaluation"] = settings.evaluation == Evaluation::exact ? "exact" : "tabulated";
  c["idler_rule"] = settings.idler_rule == IdlerRule::contour ? "contour" : "quadrature";
  if (oracle_deviation >= 0.0) c["oracle_relative_deviation"] = oracle_deviation;
  r["convergence"] = c;
  return r;
}

SimulationResult simulate(const SimulationConfig& cfg, int threads, bool oracle) {
  validate(cfg);
  SimulationResult out;
  out.config = cfg;
  out.device = std::make_shared<const Device>(build_device(cfg));
  const Device& dev = *out.device;
  out.settings = grid_settings(cfg, threads);
  if (oracle) {
    // oracle: exact evaluation, quadrature idler rule
    out.settings.evaluation = Evaluation::exact;
    out.settings.idler_rule = IdlerRule::quadrature;
  }
  out.pump1_spec = build_pump(cfg.pump1);
  out.pump2_spec = build_pump(cfg.pump2);
  const RingResonance& r1 = dev.require(1, Band::P1);
  const RingResonance& r2 = dev.require(2, Band::P2);
  out.pump1 = amplitude_from_drive(out.pump1_spec, dev.band(Band::P1), r1.omega);
  out.pump2 = amplitude_from_drive(out.pump2_spec, dev.band(Band::P2), r2.omega);
  out.energy = check_energy_conservation(dev);
  out.p1_intracavity_peak = intracavity_peak_power(r1, out.pump1_spec, dev.band(Band::P1));
  out.p2_intracavity_peak = intracavity_peak_power(r2, out.pump2_spec, dev.band(Band::P2));

  out.bwf = compute_bwf(dev, out.pump1, out.settings);
  out.twf = compute_twf(dev, out.pump2, out.bwf, out.settings);
  if (!(out.twf.probability > 0.0))
    throw ConvergenceError("triplet probability vanishes; check pump drives and couplings");

  if (oracle) {
    std::vector<cd> brute = brute_force_twf(dev, out.pump2, out.bwf, out.twf, Channel::ac,
                                            Channel::ac, Channel::ac, out.settings);
    const std::vector<cd> fact = out.twf.raw(Channel::ac, Channel::ac, Channel::ac);
    double dev_max = 0.0;
    for (std::size_t i = 0; i < brute.size(); ++i)
      dev_max = std::max(dev_max, std::abs(brute[i] - fact[i]));
    out.oracle_deviation = dev_max / max_abs(fact);
    const Tensor3View raw = view_of(brute, out.twf.s1, out.twf.s2, out.twf.s3);
    const double inv = 1.0 / std::sqrt(raw.norm());
    for (cd& x : brute) x *= inv;
    out.psi = std::move(brute);
  } else {
    out.psi = out.twf.post_selected();
  }

  out.purity = purity(view_of(out.psi, out.twf.s1, out.twf.s2, out.twf.s3));
  out.rate = triplet_rate(out.twf.probability, dev, out.pump1_spec.repetition_rate,
                          cfg.external_loss_db);
  out.warnings = out.bwf.warnings;
  out.warnings.insert(out.warnings.end(), out.twf.warnings.begin(), out.twf.warnings.end());
  if (!out.energy.aligned(0.1)) out.warnings.push_back("band centers violate energy conservation by more than 0.1 linewidth");
  return out;
}

void write_bundle(const SimulationResult& res, const fs::path& dir, ordered_json* manifest,
                  double elapsed_s) {
  ArrayWriter w(dir);
  const TriphotonAmplitude& t = res.twf;
  const std::size_t n1 = t.s1.k.size();
  const std::size_t n2 = t.s2.k.size();
  const std::size_t n3 = t.s3.k.size();
  const Tensor3View view = view_of(res.psi, t.s1, t.s2, t.s3);
  const ProjectionBundle proj =
      projections_and_isosurface(view, {&t.s1, &t.s2, &t.s3}, res.config.isosurface_threshold);
  auto abort_cleanup = [&] {
    std::error_code ec;
    for (const fs::path& p : w.files()) fs::remove(p, ec);
  };
  try {
    w.write("psi_acacac", std::span<const cd>(res.psi), {n1, n2, n3}, {"x1", "x2", "x3"});
    w.write("density", std::span<const double>(proj.density), {n1, n2, n3}, {"x1", "x2", "x3"});
    w.write("marginal_1", std::span<const double>(proj.marginal[0]), {n2, n3}, {"x2", "x3"});
    w.write("marginal_2", std::span<const double>(proj.marginal[1]), {n1, n3}, {"x1", "x3"});
    w.write("marginal_3", std::span<const double>(proj.marginal[2]), {n1, n2}, {"x1", "x2"});
    w.write("isosurface_mask", std::span<const std::uint8_t>(proj.mask), {n1, n2, n3},
            {"x1", "x2", "x3"});
    w.write("x1", std::span<const double>(proj.x[0]), {n1});
    w.write("x2", std::span<const double>(proj.x[1]), {n2});
    w.write("x3", std::span<const double>(proj.x[2]), {n3});
    const std::vector<cd> bwf = res.bwf.amplitude(Channel::ac, Channel::ac);
    w.write("bwf_acac", std::span<const cd>(bwf), {res.bwf.signal.k.size(), res.bwf.idler.k.size()},
            {"x_S1", "x_I"});
    for (int a = 0; a < 3; ++a)
      w.write("schmidt_" + std::to_string(a + 1), std::span<const double>(res.purity.schmidt[a]),
              {res.purity.schmidt[a].size()});

    ordered_json m;
    m["schema_version"] = 1;
    m["generator"] = "tripletsim";
    m["config"] = to_json(res.config);
    m["arrays"] = w.catalog();
    ordered_json axes;
    const char* bands[3] = {"S1", "S2", "S3"};
    const KGrid* grids[3] = {&t.s1, &t.s2, &t.s3};
    for (int a = 0; a < 3; ++a) {
      ordered_json ax;
      ax["band"] = bands[a];
      ax["array"] = "x" + std::to_string(a + 1);
      ax["linewidth_rad_per_s"] = grids[a]->linewidth;
      ax["group_velocity_m_per_s"] = grids[a]->group_velocity;
      ax["span_linewidths"] = grids[a]->span;
      axes["x" + std::to_string(a + 1)] = ax;
    }
    m["axes"] = axes;
    m["isosurface_threshold"] = proj.threshold;
    m["max_density"] = proj.max_density;
    m["results"] = res.results_json();
    m["warnings"] = res.warnings;
    m["timing_s"] = elapsed_s;
    const fs::path path = dir / "manifest.json";
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << m.dump(2) << "\n";
    if (!out) throw ConfigError("short write to " + path.string());
    if (manifest) *manifest = std::move(m);
  } catch (...) {
    abort_cleanup();
    std::error_code ec;
    fs::remove(dir / "manifest.json", ec);
    throw;
  }
}

ordered_json run(const SimulationConfig& cfg, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const fs::path dir = options.out_dir.empty() ? fs::path(cfg.output_dir) : options.out_dir;
  SimulationResult res = simulate(cfg, options.threads, options.oracle);
  const bool created = !fs::exists(dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string());
  ordered_json manifest;
  try {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_bundle(res, dir, &manifest, elapsed);
  } catch (...) {
    if (created) fs::remove_all(dir, ec);
    throw;
  }
  return manifest;
}

ordered_json SweepTable::to_json() const {
  ordered_json j;
  j["axis"] = axis;
  ordered_json rows_json = ordered_json::array();
  for (const SweepRow& r : rows) {
    ordered_json e;
    e["setting"] = r.setting;
    e["value"] = r.value;
    e["beta2"] = r.beta2;
    e["sigma2"] = r.sigma2;
    e["purity"] = r.purity;
    e["sigma2_drift"] = r.sigma2_drift;
    e["purity_drift"] = r.purity_drift;
    rows_json.push_back(e);
  }
  j["rows"] = rows_json;
  return j;
}

SweepTable convergence_sweep(const SimulationConfig& cfg, std::string_view axis, int threads) {
  std::vector<SimulationConfig> variants;
  std::vector<double> values;
  if (axis == "grid_n") {
    for (int n : {cfg.grid.n / 2, cfg.grid.n, cfg.grid.n * 2}) {
      SimulationConfig c = cfg;
      c.grid.n = n;
      variants.push_back(c);
      values.push_back(n);
    }
  } else if (axis == "grid_span") {
    for (double s : {cfg.grid.span_linewidths, 2.0 * cfg.grid.span_linewidths}) {
      SimulationConfig c = cfg;
      c.grid.span_linewidths = s;
      // keep the point density fixed when widening the window
      c.grid.n = static_cast<int>(std::lround((cfg.grid.n - 1) * s / cfg.grid.span_linewidths)) + 1;
      variants.push_back(c);
      values.push_back(s);
    }
  } else if (axis == "epsilon" || axis == "eps") {
    for (double e : {cfg.epsilon_linewidths, 0.5 * cfg.epsilon_linewidths}) {
      SimulationConfig c = cfg;
      c.epsilon_linewidths = e;
      c.check_epsilon = false;
      variants.push_back(c);
      values.push_back(e);
    }
  } else {
    throw ConfigError("unknown sweep axis '" + std::string(axis) +
                      "' (expected grid_n, grid_span or epsilon)");
  }
  SweepTable table;
  table.axis = std::string(axis);
  for (std::size_t i = 0; i < variants.size(); ++i) {
    const SimulationResult r = simulate(variants[i], threads, false);
    SweepRow row;
    row.setting = table.axis;
    row.value = values[i];
    row.beta2 = r.bwf.probability;
    row.sigma2 = r.twf.probability;
    row.purity = r.purity.purity;
    if (!table.rows.empty()) {
      const SweepRow& prev = table.rows.back();
      row.sigma2_drift = std::abs(row.sigma2 - prev.sigma2) / prev.sigma2;
      for (int a = 0; a < 3; ++a)
        row.purity_drift = std::max(row.purity_drift, std::abs(row.purity[a] - prev.purity[a]));
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace tripletsim
