#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tripletsim/analysis.hpp"
#include "tripletsim/config.hpp"
#include "tripletsim/wavefunctions.hpp"

namespace tripletsim {

struct SimulationResult {
  SimulationConfig config;
  std::shared_ptr<const Device> device;
  GridSettings settings;
  PumpSpec pump1_spec;
  PumpSpec pump2_spec;
  PumpSpectrum pump1;
  PumpSpectrum pump2;
  EnergyReport energy;
  BiphotonAmplitude bwf;
  TriphotonAmplitude twf;
  std::vector<cd> psi;  // post-selected ac,ac,ac amplitude, unit norm
  PurityReport purity;
  RateReport rate;
  double p1_intracavity_peak = 0.0;
  double p2_intracavity_peak = 0.0;
  double oracle_deviation = -1.0;  // set when the brute-force path ran
  std::vector<std::string> warnings;

  nlohmann::ordered_json results_json() const;
};

SimulationResult simulate(const SimulationConfig& cfg, int threads = 1, bool oracle = false);

struct RunOptions {
  std::filesystem::path out_dir;
  int threads = 1;
  bool oracle = false;
};

// Runs the pipeline and writes manifest.json plus raw arrays; returns the manifest.
nlohmann::ordered_json run(const SimulationConfig& cfg, const RunOptions& options);
void write_bundle(const SimulationResult& result, const std::filesystem::path& dir,
                  nlohmann::ordered_json* manifest, double elapsed_s = 0.0);

struct SweepRow {
  std::string setting;
  double value = 0.0;
  double beta2 = 0.0;
  double sigma2 = 0.0;
  std::array<double, 3> purity{};
  double sigma2_drift = 0.0;  // relative to the previous row
  double purity_drift = 0.0;  // max absolute change
};

struct SweepTable {
  std::string axis;
  std::vector<SweepRow> rows;
  nlohmann::ordered_json to_json() const;
};

SweepTable convergence_sweep(const SimulationConfig& cfg, std::string_view axis, int threads = 1);

}  // namespace tripletsim
