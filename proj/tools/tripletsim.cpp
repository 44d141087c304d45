#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "tripletsim/config.hpp"
#include "tripletsim/errors.hpp"
#include "tripletsim/io.hpp"
#include "tripletsim/kernels.hpp"
#include "tripletsim/pipeline.hpp"

using namespace tripletsim;

namespace {

constexpr int kConfigExit = 2;
constexpr int kConvergenceExit = 3;

struct Source {
  std::string config;
  std::string preset;
  std::optional<int> grid_n;
  std::optional<double> grid_span;
  std::optional<double> epsilon;

  void attach(CLI::App* app, bool overrides) {
    auto* c = app->add_option("--config", config, "simulation config (JSON)");
    auto* p = app->add_option("--preset", preset, "built-in configuration A, B or C")
                  ->check(CLI::IsMember({"A", "B", "C"}));
    c->excludes(p);
    if (!overrides) return;
    app->add_option("--grid-n", grid_n, "points per output axis");
    app->add_option("--grid-span", grid_span, "half-width of each axis in linewidths");
    app->add_option("--epsilon", epsilon, "resolvent regularization in idler linewidths");
  }

  SimulationConfig load() const {
    if (config.empty() && preset.empty()) throw ConfigError("pass --config PATH or --preset ID");
    SimulationConfig cfg = config.empty() ? build_preset(preset) : load_config(config);
    if (grid_n) cfg.grid.n = *grid_n;
    if (grid_span) cfg.grid.span_linewidths = *grid_span;
    if (epsilon) cfg.epsilon_linewidths = *epsilon;
    return cfg;
  }
};

std::vector<Band> parse_bands(const std::string& list) {
  std::vector<Band> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(parse_band(item));
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  if (out.size() != 4) throw ConfigError("--bands needs four comma-separated bands");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"photon-triplet generation in cascaded microring sources"};
  app.require_subcommand(1);

  auto* preset_cmd = app.add_subcommand("preset", "print a built-in configuration");
  std::string preset_id;
  std::string preset_out;
  preset_cmd->add_option("id", preset_id, "A, B or C")->required()->check(CLI::IsMember({"A", "B", "C"}));
  preset_cmd->add_option("--out", preset_out, "write to file instead of stdout");

  auto* run_cmd = app.add_subcommand("run", "simulate and export a manifest bundle");
  Source run_src;
  run_src.attach(run_cmd, true);
  std::string run_out;
  bool oracle = false;
  int threads = 1;
  run_cmd->add_option("--out", run_out, "output directory (defaults to the config's)");
  run_cmd->add_flag("--oracle", oracle, "evaluate the post-selected state by direct quadrature");
  run_cmd->add_option("--threads", threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  auto* check_cmd = app.add_subcommand("check", "validate a config and report energy conservation");
  Source check_src;
  check_src.attach(check_cmd, false);

  auto* sweep_cmd = app.add_subcommand("sweep", "convergence sweep over one numerical setting");
  Source sweep_src;
  sweep_src.attach(sweep_cmd, true);
  std::string axis = "grid_n";
  int sweep_threads = 1;
  sweep_cmd->add_option("--axis", axis, "grid_n, grid_span or epsilon")
      ->check(CLI::IsMember({"grid_n", "grid_span", "epsilon"}));
  sweep_cmd->add_option("--threads", sweep_threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  auto* gamma_cmd = app.add_subcommand("gamma-nl", "nonlinear parameter from mode profiles");
  std::string modes;
  std::string band_list = "S1,I,P1,P1";
  double chi3 = 0.0;
  bool normalize = false;
  gamma_cmd->add_option("--modes", modes, "mode-profile manifest")->required();
  gamma_cmd->add_option("--bands", band_list, "four bands u1,u2,u3,u4");
  gamma_cmd->add_option("--chi3", chi3, "chi3 component in m^2/V^2")->required();
  gamma_cmd->add_flag("--normalize", normalize, "rescale modes to unit normalization");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*preset_cmd) {
      const SimulationConfig cfg = build_preset(preset_id);
      if (preset_out.empty())
        std::cout << serialize(cfg);
      else
        save_config(cfg, preset_out);
    } else if (*run_cmd) {
      const SimulationConfig cfg = run_src.load();
      RunOptions opt;
      opt.out_dir = run_out;
      opt.threads = threads;
      opt.oracle = oracle;
      const auto manifest = run(cfg, opt);
      for (const auto& w : manifest["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
      std::cout << manifest["results"].dump(2) << "\n";
    } else if (*check_cmd) {
      const SimulationConfig cfg = check_src.load();
      validate(cfg);
      const Device dev = build_device(cfg);
      const EnergyReport e = check_energy_conservation(dev);
      nlohmann::ordered_json j;
      j["valid"] = true;
      j["delta1_linewidths"] = e.delta1_linewidths;
      j["delta2_linewidths"] = e.delta2_linewidths;
      j["min_linewidth_rad_per_s"] = e.min_linewidth;
      j["conserving_idler_wavelength_nm"] = e.idler_wavelength * 1e9;
      j["aligned"] = e.aligned();
      nlohmann::ordered_json wl;
      for (Band b : kBands) wl[std::string(to_string(b))] = dev.band(b).wavelength * 1e9;
      j["band_wavelength_nm"] = wl;
      std::cout << j.dump(2) << "\n";
    } else if (*sweep_cmd) {
      const SimulationConfig cfg = sweep_src.load();
      std::cout << convergence_sweep(cfg, axis, sweep_threads).to_json().dump(2) << "\n";
    } else if (*gamma_cmd) {
      const ModeProfileGrid grid = load_mode_profiles(modes, normalize);
      const auto b = parse_bands(band_list);
      const GammaNl g = gamma_nl(grid, {b[0], b[1], b[2], b[3]}, chi3);
      nlohmann::ordered_json j;
      j["gamma_nl_per_w_m"] = g.value;
      j["imag_residual"] = g.imag_residual;
      std::cout << j.dump(2) << "\n";
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    if (!e.diagnostics().empty()) std::cerr << "  " << e.diagnostics() << "\n";
    return kConvergenceExit;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigExit;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return EXIT_FAILURE;
  }
  return 0;
}
