#include "tripletsim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "tripletsim/errors.hpp"

namespace tripletsim {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ResonanceConfig resonance(int ring, Band band, double eta) {
  ResonanceConfig r;
  r.ring = ring;
  r.band = band;
  r.escape_efficiency = eta;
  return r;
}

PumpConfig gaussian_pump(Band band, double fwhm_ps, double rep_mhz) {
  PumpConfig p;
  p.band = band;
  p.shape = "gaussian";
  p.fwhm_ps = fwhm_ps;
  p.repetition_rate_mhz = rep_mhz;
  return p;
}

}  // namespace

SimulationConfig build_preset(std::string_view id) {
  SimulationConfig c;
  c.preset = std::string(id);
  c.bands[index(Band::P1)].wavelength_nm = 1546.83;
  c.bands[index(Band::S1)].wavelength_nm = 1541.60;
  c.bands[index(Band::P2)].wavelength_nm = 1584.29;
  c.bands[index(Band::S2)].wavelength_nm = 1562.68;

  if (id == "A" || id == "B") {
    for (Band b : {Band::P1, Band::S1, Band::I}) c.resonances.push_back(resonance(1, b, 0.5));
    for (Band b : {Band::P2, Band::S2, Band::S3, Band::I})
      c.resonances.push_back(resonance(2, b, 0.5));
    c.pump1 = gaussian_pump(Band::P1, 300.0, 10.0);
    c.pump1.pulse_energy_pj = 0.17;
    if (id == "A") {
      c.pump2.band = Band::P2;
      c.pump2.shape = "cw";
      c.pump2.cw_power_mw = 1.4;
    } else {
      c.pump2 = gaussian_pump(Band::P2, 300.0, 10.0);
      c.pump2.pulse_energy_pj = 36.7;
    }
  } else if (id == "C") {
    c.resonances = {resonance(1, Band::P1, 0.95), resonance(1, Band::S1, 0.9),
                    resonance(1, Band::I, 0.9),   resonance(2, Band::P2, 0.85),
                    resonance(2, Band::S2, 0.5),  resonance(2, Band::S3, 0.5),
                    resonance(2, Band::I, 0.85)};
    c.pump1 = gaussian_pump(Band::P1, 50.0, 10.0);
    c.pump1.peak_power_mw = 9.74;
    c.pump2 = gaussian_pump(Band::P2, 100.0, 10.0);
    c.pump2.peak_power_mw = 190.0;
  } else {
    throw ConfigError("unknown preset '" + std::string(id) + "' (expected A, B or C)");
  }
  c.output_dir = "out_" + std::string(id);
  return c;
}

namespace {

template <class T>
void put_opt(ordered_json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

ordered_json pump_json(const PumpConfig& p) {
  ordered_json j;
  j["band"] = std::string(to_string(p.band));
  j["shape"] = p.shape;
  put_opt(j, "fwhm_ps", p.fwhm_ps);
  put_opt(j, "pulse_energy_pj", p.pulse_energy_pj);
  put_opt(j, "peak_power_mw", p.peak_power_mw);
  put_opt(j, "cw_power_mw", p.cw_power_mw);
  j["repetition_rate_mhz"] = p.repetition_rate_mhz;
  j["detuning_rad_per_s"] = p.detuning_rad_per_s;
  return j;
}

// Strict object reader: every key must be consumed.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail("expected an object");
  }

  template <class T>
  T req(const char* key) {
    if (!j_.contains(key)) fail(std::string("missing key '") + key + "'");
    return take<T>(key);
  }

  template <class T>
  T opt(const char* key, T fallback) {
    return j_.contains(key) ? take<T>(key) : fallback;
  }

  template <class T>
  std::optional<T> maybe(const char* key) {
    if (!j_.contains(key)) return std::nullopt;
    return take<T>(key);
  }

  const json& sub(const char* key) {
    if (!j_.contains(key)) fail(std::string("missing key '") + key + "'");
    seen_.insert(key);
    return j_.at(key);
  }

  bool has(const char* key) const { return j_.contains(key); }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) fail("unknown key '" + k + "'");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(where_ + ": " + msg);
  }

 private:
  template <class T>
  T take(const char* key) {
    seen_.insert(key);
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      fail(std::string("bad value for '") + key + "'");
    }
  }

  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

Band band_from(const std::string& s, const std::string& where) {
  try {
    return parse_band(s);
  } catch (const DomainError&) {
    throw ConfigError(where + ": unknown band '" + s + "'");
  }
}

PumpConfig pump_from(const json& j, const std::string& where) {
  Reader r(j, where);
  PumpConfig p;
  p.band = band_from(r.req<std::string>("band"), where);
  p.shape = r.req<std::string>("shape");
  p.fwhm_ps = r.maybe<double>("fwhm_ps");
  p.pulse_energy_pj = r.maybe<double>("pulse_energy_pj");
  p.peak_power_mw = r.maybe<double>("peak_power_mw");
  p.cw_power_mw = r.maybe<double>("cw_power_mw");
  p.repetition_rate_mhz = r.opt<double>("repetition_rate_mhz", 0.0);
  p.detuning_rad_per_s = r.opt<double>("detuning_rad_per_s", 0.0);
  r.finish();
  return p;
}

}  // namespace

ordered_json to_json(const SimulationConfig& c) {
  ordered_json j;
  j["schema"] = c.schema;
  if (c.preset) j["preset"] = *c.preset;

  ordered_json dev;
  dev["ring1_radius_um"] = c.ring1_radius_um;
  dev["ring2_radius_um"] = c.ring2_radius_um;
  dev["coupling_half_separation_um"] = c.coupling_half_separation_um;
  dev["group_velocity_m_per_s"] = c.group_velocity_m_per_s;
  dev["gamma_nl_per_w_m"] = c.gamma_nl_per_w_m;
  ordered_json bands = ordered_json::object();
  for (Band b : kBands) {
    ordered_json e = ordered_json::object();
    put_opt(e, "wavelength_nm", c.bands[index(b)].wavelength_nm);
    put_opt(e, "group_velocity_m_per_s", c.bands[index(b)].group_velocity_m_per_s);
    bands[std::string(to_string(b))] = e;
  }
  dev["bands"] = bands;
  ordered_json res = ordered_json::array();
  for (const ResonanceConfig& r : c.resonances) {
    ordered_json e;
    e["ring"] = r.ring;
    e["band"] = std::string(to_string(r.band));
    e["q_intrinsic"] = r.q_intrinsic;
    put_opt(e, "q_coupling", r.q_coupling);
    put_opt(e, "escape_efficiency", r.escape_efficiency);
    e["offset_rad_per_s"] = r.offset_rad_per_s;
    res.push_back(e);
  }
  dev["resonances"] = res;
  j["device"] = dev;

  j["pumps"] = ordered_json{{"P1", pump_json(c.pump1)}, {"P2", pump_json(c.pump2)}};

  ordered_json g;
  g["n"] = c.grid.n;
  g["span_linewidths"] = c.grid.span_linewidths;
  g["idler_n"] = c.grid.idler_n;
  g["idler_span_linewidths"] = c.grid.idler_span_linewidths;
  g["pump_n"] = c.grid.pump_n;
  g["pump_span_linewidths"] = c.grid.pump_span_linewidths;
  g["pump_span_sigmas"] = c.grid.pump_span_sigmas;
  g["pump_nodes_per_sigma"] = c.grid.pump_nodes_per_sigma;
  g["oversample"] = c.grid.oversample;
  g["idler_rule"] = c.grid.idler_rule;
  j["grid"] = g;

  j["epsilon_linewidths"] = c.epsilon_linewidths;
  j["check_epsilon"] = c.check_epsilon;
  j["external_loss_db"] = c.external_loss_db;
  j["isosurface_threshold"] = c.isosurface_threshold;
  j["output_dir"] = c.output_dir;
  return j;
}

SimulationConfig config_from_json(const json& j) {
  Reader top(j, "config");
  SimulationConfig c;
  c.schema = top.opt<int>("schema", 1);
  if (c.schema != 1) top.fail("unsupported schema " + std::to_string(c.schema));
  c.preset = top.maybe<std::string>("preset");

  Reader dev(top.sub("device"), "device");
  c.ring1_radius_um = dev.opt<double>("ring1_radius_um", c.ring1_radius_um);
  c.ring2_radius_um = dev.opt<double>("ring2_radius_um", c.ring2_radius_um);
  c.coupling_half_separation_um =
      dev.opt<double>("coupling_half_separation_um", c.coupling_half_separation_um);
  c.group_velocity_m_per_s = dev.opt<double>("group_velocity_m_per_s", c.group_velocity_m_per_s);
  c.gamma_nl_per_w_m = dev.opt<std::array<double, 2>>("gamma_nl_per_w_m", c.gamma_nl_per_w_m);
  {
    const json& bands = dev.sub("bands");
    Reader br(bands, "device.bands");
    for (Band b : kBands) {
      const std::string name(to_string(b));
      if (!br.has(name.c_str())) continue;
      Reader e(br.sub(name.c_str()), "device.bands." + name);
      c.bands[index(b)].wavelength_nm = e.maybe<double>("wavelength_nm");
      c.bands[index(b)].group_velocity_m_per_s = e.maybe<double>("group_velocity_m_per_s");
      e.finish();
    }
    br.finish();
  }
  {
    const json& res = dev.sub("resonances");
    if (!res.is_array()) dev.fail("'resonances' must be an array");
    for (std::size_t i = 0; i < res.size(); ++i) {
      const std::string where = "device.resonances[" + std::to_string(i) + "]";
      Reader e(res[i], where);
      ResonanceConfig r;
      r.ring = e.req<int>("ring");
      r.band = band_from(e.req<std::string>("band"), where);
      r.q_intrinsic = e.opt<double>("q_intrinsic", r.q_intrinsic);
      r.q_coupling = e.maybe<double>("q_coupling");
      r.escape_efficiency = e.maybe<double>("escape_efficiency");
      r.offset_rad_per_s = e.opt<double>("offset_rad_per_s", 0.0);
      e.finish();
      c.resonances.push_back(r);
    }
  }
  dev.finish();

  {
    Reader pumps(top.sub("pumps"), "pumps");
    c.pump1 = pump_from(pumps.sub("P1"), "pumps.P1");
    c.pump2 = pump_from(pumps.sub("P2"), "pumps.P2");
    pumps.finish();
  }

  if (top.has("grid")) {
    Reader g(top.sub("grid"), "grid");
    c.grid.n = g.opt<int>("n", c.grid.n);
    c.grid.span_linewidths = g.opt<double>("span_linewidths", c.grid.span_linewidths);
    c.grid.idler_n = g.opt<int>("idler_n", c.grid.idler_n);
    c.grid.idler_span_linewidths =
        g.opt<double>("idler_span_linewidths", c.grid.idler_span_linewidths);
    c.grid.pump_n = g.opt<int>("pump_n", c.grid.pump_n);
    c.grid.pump_span_linewidths =
        g.opt<double>("pump_span_linewidths", c.grid.pump_span_linewidths);
    c.grid.pump_span_sigmas = g.opt<double>("pump_span_sigmas", c.grid.pump_span_sigmas);
    c.grid.pump_nodes_per_sigma =
        g.opt<double>("pump_nodes_per_sigma", c.grid.pump_nodes_per_sigma);
    c.grid.oversample = g.opt<int>("oversample", c.grid.oversample);
    c.grid.idler_rule = g.opt<std::string>("idler_rule", c.grid.idler_rule);
    g.finish();
  }
  c.epsilon_linewidths = top.opt<double>("epsilon_linewidths", c.epsilon_linewidths);
  c.check_epsilon = top.opt<bool>("check_epsilon", c.check_epsilon);
  c.external_loss_db = top.opt<std::array<double, 3>>("external_loss_db", c.external_loss_db);
  c.isosurface_threshold = top.opt<double>("isosurface_threshold", c.isosurface_threshold);
  c.output_dir = top.opt<std::string>("output_dir", c.output_dir);
  top.finish();
  return c;
}

std::string serialize(const SimulationConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

SimulationConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void save_config(const SimulationConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file " + path.string());
  out << serialize(cfg);
}

std::array<BandSpec, 6> resolve_bands(const SimulationConfig& cfg) {
  std::array<double, 6> lambda{};
  auto given = [&](Band b) { return cfg.bands[index(b)].wavelength_nm; };
  for (Band b : {Band::P1, Band::S1, Band::P2, Band::S2})
    if (!given(b)) throw ConfigError("band " + std::string(to_string(b)) + " needs wavelength_nm");
  for (Band b : kBands)
    if (given(b)) {
      if (!(*given(b) > 0.0)) throw ConfigError("wavelengths must be positive");
      lambda[index(b)] = *given(b) * 1e-9;
    }
  try {
    if (!given(Band::I))
      lambda[index(Band::I)] =
          conserving_idler_wavelength(lambda[index(Band::P1)], lambda[index(Band::S1)]);
    if (!given(Band::S3)) {
      const double inv = 1.0 / lambda[index(Band::I)] + 1.0 / lambda[index(Band::P2)] -
                         1.0 / lambda[index(Band::S2)];
      if (!(inv > 0.0)) throw ConfigError("no positive S3 frequency conserves energy");
      lambda[index(Band::S3)] = 1.0 / inv;
    }
    std::array<BandSpec, 6> out;
    for (Band b : kBands) {
      const double v =
          cfg.bands[index(b)].group_velocity_m_per_s.value_or(cfg.group_velocity_m_per_s);
      out[index(b)] = BandSpec::from_wavelength(lambda[index(b)], v);
    }
    return out;
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

Device build_device(const SimulationConfig& cfg) {
  const auto bands = resolve_bands(cfg);
  std::vector<ResonanceSpec> res;
  for (const ResonanceConfig& r : cfg.resonances) {
    ResonanceSpec s;
    s.ring = r.ring;
    s.band = r.band;
    s.q_intrinsic = r.q_intrinsic;
    s.omega_offset = r.offset_rad_per_s;
    if (r.q_coupling.has_value() == r.escape_efficiency.has_value())
      throw ConfigError("resonance " + std::string(to_string(r.band)) + " in ring " +
                        std::to_string(r.ring) +
                        " needs exactly one of q_coupling and escape_efficiency");
    if (r.q_coupling) {
      s.q_coupling = *r.q_coupling;
    } else {
      const double eta = *r.escape_efficiency;
      if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("escape_efficiency must lie in (0, 1)");
      s.q_coupling = r.q_intrinsic * (1.0 - eta) / eta;
    }
    res.push_back(s);
  }
  DeviceGeometry g;
  g.ring1_radius = cfg.ring1_radius_um * 1e-6;
  g.ring2_radius = cfg.ring2_radius_um * 1e-6;
  g.coupling_half_separation = cfg.coupling_half_separation_um * 1e-6;
  try {
    return Device(g, bands, res, cfg.gamma_nl_per_w_m);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

PumpSpec build_pump(const PumpConfig& p) {
  PumpSpec s;
  s.band = p.band;
  s.repetition_rate = p.repetition_rate_mhz * 1e6;
  s.detuning = p.detuning_rad_per_s;
  const std::string where = "pump " + std::string(to_string(p.band));
  const int drives = int(p.pulse_energy_pj.has_value()) + int(p.peak_power_mw.has_value()) +
                     int(p.cw_power_mw.has_value());
  if (drives != 1) throw ConfigError(where + " needs exactly one drive quantity");
  if (p.shape == "gaussian") {
    if (!p.fwhm_ps) throw ConfigError(where + " is Gaussian but has no fwhm_ps");
    s.shape = GaussianPulse{*p.fwhm_ps * 1e-12};
  } else if (p.shape == "cw") {
    if (p.fwhm_ps) throw ConfigError(where + " is CW but sets fwhm_ps");
    s.shape = ContinuousWave{};
  } else {
    throw ConfigError(where + " has unknown shape '" + p.shape + "'");
  }
  if (p.pulse_energy_pj) s.drive = PulseEnergy{*p.pulse_energy_pj * 1e-12};
  if (p.peak_power_mw) s.drive = PeakPower{*p.peak_power_mw * 1e-3};
  if (p.cw_power_mw) s.drive = CwPower{*p.cw_power_mw * 1e-3};
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return s;
}

GridSettings grid_settings(const SimulationConfig& cfg, int threads) {
  GridSettings s;
  s.n = cfg.grid.n;
  s.span = cfg.grid.span_linewidths;
  s.idler_n = cfg.grid.idler_n;
  s.idler_span = cfg.grid.idler_span_linewidths;
  s.pump_n = cfg.grid.pump_n;
  s.pump_span_linewidths = cfg.grid.pump_span_linewidths;
  s.pump_span_sigmas = cfg.grid.pump_span_sigmas;
  s.pump_nodes_per_sigma = cfg.grid.pump_nodes_per_sigma;
  s.oversample = cfg.grid.oversample;
  if (cfg.grid.idler_rule == "contour")
    s.idler_rule = IdlerRule::contour;
  else if (cfg.grid.idler_rule == "quadrature")
    s.idler_rule = IdlerRule::quadrature;
  else
    throw ConfigError("grid.idler_rule must be 'contour' or 'quadrature'");
  s.epsilon = cfg.epsilon_linewidths;
  s.check_epsilon = cfg.check_epsilon;
  s.threads = threads;
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return s;
}

void validate(const SimulationConfig& cfg) {
  const Device dev = build_device(cfg);
  if (cfg.pump1.band != Band::P1) throw ConfigError("pumps.P1 must drive band P1");
  if (cfg.pump2.band != Band::P2) throw ConfigError("pumps.P2 must drive band P2");
  const PumpSpec p1 = build_pump(cfg.pump1);
  build_pump(cfg.pump2);
  if (!p1.pulsed()) throw ConfigError("pump P1 must be pulsed (probabilities are per P1 pulse)");
  grid_settings(cfg);
  for (double db : cfg.external_loss_db)
    if (!(db >= 0.0)) throw ConfigError("external_loss_db entries must be >= 0");
  if (!(cfg.isosurface_threshold > 0.0) || cfg.isosurface_threshold > 1.0)
    throw ConfigError("isosurface_threshold must lie in (0, 1]");
  (void)dev;
}

}  // namespace tripletsim
