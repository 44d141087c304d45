#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tripletsim/constants.hpp"
#include "tripletsim/kernels.hpp"

namespace tripletsim {

// Writes raw little-endian arrays into a directory and records a catalog entry per file.
class ArrayWriter {
 public:
  explicit ArrayWriter(std::filesystem::path dir);

  void write(const std::string& name, std::span<const cd> data, std::vector<std::size_t> shape,
             std::vector<std::string> axes = {});
  void write(const std::string& name, std::span<const double> data,
             std::vector<std::size_t> shape, std::vector<std::string> axes = {});
  void write(const std::string& name, std::span<const std::uint8_t> data,
             std::vector<std::size_t> shape, std::vector<std::string> axes = {});

  const nlohmann::ordered_json& catalog() const { return catalog_; }
  const std::vector<std::filesystem::path>& files() const { return files_; }

 private:
  void emit(const std::string& name, const void* bytes, std::size_t count, std::size_t width,
            const char* dtype, std::vector<std::size_t> shape, std::vector<std::string> axes);
  std::filesystem::path dir_;
  nlohmann::ordered_json catalog_ = nlohmann::ordered_json::array();
  std::vector<std::filesystem::path> files_;
};

std::vector<cd> read_complex_array(const std::filesystem::path& path, std::size_t count);
std::vector<double> read_real_array(const std::filesystem::path& path, std::size_t count);

// Mode-profile bundle: JSON manifest with raw complex128 ex/ey/ez arrays of shape [nx, nz]
// and float64 eps (optionally vp_over_vg, chi_mask).
ModeProfileGrid load_mode_profiles(const std::filesystem::path& manifest, bool normalize);
void save_mode_profiles(const ModeProfileGrid& grid, const std::filesystem::path& manifest);

}  // namespace tripletsim
