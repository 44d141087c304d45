#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tripletsim/device.hpp"
#include "tripletsim/pump.hpp"
#include "tripletsim/wavefunctions.hpp"

namespace tripletsim {

struct BandConfig {
  std::optional<double> wavelength_nm;  // I and S3 default to exact energy conservation
  std::optional<double> group_velocity_m_per_s;
  bool operator==(const BandConfig&) const = default;
};

struct ResonanceConfig {
  int ring = 1;
  Band band = Band::P1;
  double q_intrinsic = 1e6;
  std::optional<double> q_coupling;
  std::optional<double> escape_efficiency;  // ac channel
  double offset_rad_per_s = 0.0;
  bool operator==(const ResonanceConfig&) const = default;
};

struct PumpConfig {
  Band band = Band::P1;
  std::string shape = "gaussian";  // gaussian | cw
  std::optional<double> fwhm_ps;
  std::optional<double> pulse_energy_pj;
  std::optional<double> peak_power_mw;
  std::optional<double> cw_power_mw;
  double repetition_rate_mhz = 0.0;
  double detuning_rad_per_s = 0.0;
  bool operator==(const PumpConfig&) const = default;
};

struct GridConfig {
  int n = 64;
  double span_linewidths = 8.0;
  int idler_n = 256;
  double idler_span_linewidths = 16.0;
  int pump_n = 256;
  double pump_span_linewidths = 16.0;
  double pump_span_sigmas = 6.0;
  double pump_nodes_per_sigma = 4.0;
  int oversample = 4;
  std::string idler_rule = "contour";  // contour | quadrature
  bool operator==(const GridConfig&) const = default;
};

struct SimulationConfig {
  int schema = 1;
  std::optional<std::string> preset;
  double ring1_radius_um = 20.0;
  double ring2_radius_um = 10.0;
  double coupling_half_separation_um = 50.0;
  double group_velocity_m_per_s = 8.2418e7;
  std::array<double, 2> gamma_nl_per_w_m{250.0, 250.0};
  std::array<BandConfig, 6> bands{};
  std::vector<ResonanceConfig> resonances;
  PumpConfig pump1;
  PumpConfig pump2;
  GridConfig grid;
  double epsilon_linewidths = 1e-3;
  bool check_epsilon = true;
  std::array<double, 3> external_loss_db{0.0, 0.0, 0.0};
  double isosurface_threshold = 0.1;
  std::string output_dir = "out";
  bool operator==(const SimulationConfig&) const = default;
};

SimulationConfig build_preset(std::string_view id);

nlohmann::ordered_json to_json(const SimulationConfig& cfg);
SimulationConfig config_from_json(const nlohmann::json& j);
std::string serialize(const SimulationConfig& cfg);
SimulationConfig parse_config(std::string_view text);
SimulationConfig load_config(const std::filesystem::path& path);
void save_config(const SimulationConfig& cfg, const std::filesystem::path& path);

std::array<BandSpec, 6> resolve_bands(const SimulationConfig& cfg);
Device build_device(const SimulationConfig& cfg);
PumpSpec build_pump(const PumpConfig& pump);
GridSettings grid_settings(const SimulationConfig& cfg, int threads = 1);
// Full structural and physical validation; throws ConfigError.
void validate(const SimulationConfig& cfg);

}  // namespace tripletsim
