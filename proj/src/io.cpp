#include "tripletsim/io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "tripletsim/errors.hpp"

namespace tripletsim {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void to_little_endian(std::vector<char>& buf, std::size_t width) {
  if constexpr (std::endian::native == std::endian::little) return;
  for (std::size_t off = 0; off + width <= buf.size(); off += width)
    std::reverse(buf.begin() + static_cast<std::ptrdiff_t>(off),
                 buf.begin() + static_cast<std::ptrdiff_t>(off + width));
}

std::vector<char> read_bytes(const fs::path& path, std::size_t expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open array file " + path.string());
  std::vector<char> buf(expected);
  in.read(buf.data(), static_cast<std::streamsize>(expected));
  if (static_cast<std::size_t>(in.gcount()) != expected || in.peek() != EOF)
    throw ConfigError("array file " + path.string() + " does not have " +
                      std::to_string(expected) + " bytes");
  return buf;
}

}  // namespace

ArrayWriter::ArrayWriter(fs::path dir) : dir_(std::move(dir)) {}

void ArrayWriter::emit(const std::string& name, const void* bytes, std::size_t count,
                       std::size_t width, const char* dtype, std::vector<std::size_t> shape,
                       std::vector<std::string> axes) {
  std::size_t expect = 1;
  for (std::size_t s : shape) expect *= s;
  const std::size_t scalar = std::strcmp(dtype, "complex128") == 0 ? 2 : 1;
  if (expect * scalar != count) throw DomainError("array " + name + " does not match its shape");
  std::vector<char> buf(count * width);
  std::memcpy(buf.data(), bytes, buf.size());
  to_little_endian(buf, width);
  const std::string file = name + ".bin";
  const fs::path path = dir_ / file;
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    files_.push_back(path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw ConfigError("short write to " + path.string());
  }
  ordered_json e;
  e["name"] = name;
  e["file"] = file;
  e["dtype"] = dtype;
  e["byte_order"] = "little";
  e["order"] = "row-major";
  e["shape"] = shape;
  if (!axes.empty()) e["axes"] = axes;
  e["bytes"] = buf.size();
  catalog_.push_back(e);
}

void ArrayWriter::write(const std::string& name, std::span<const cd> data,
                        std::vector<std::size_t> shape, std::vector<std::string> axes) {
  emit(name, data.data(), data.size() * 2, sizeof(double), "complex128", std::move(shape),
       std::move(axes));
}

void ArrayWriter::write(const std::string& name, std::span<const double> data,
                        std::vector<std::size_t> shape, std::vector<std::string> axes) {
  emit(name, data.data(), data.size(), sizeof(double), "float64", std::move(shape),
       std::move(axes));
}

void ArrayWriter::write(const std::string& name, std::span<const std::uint8_t> data,
                        std::vector<std::size_t> shape, std::vector<std::string> axes) {
  emit(name, data.data(), data.size(), 1, "uint8", std::move(shape), std::move(axes));
}

std::vector<cd> read_complex_array(const fs::path& path, std::size_t count) {
  std::vector<char> buf = read_bytes(path, count * 2 * sizeof(double));
  to_little_endian(buf, sizeof(double));
  std::vector<cd> out(count);
  std::memcpy(out.data(), buf.data(), buf.size());
  return out;
}

std::vector<double> read_real_array(const fs::path& path, std::size_t count) {
  std::vector<char> buf = read_bytes(path, count * sizeof(double));
  to_little_endian(buf, sizeof(double));
  std::vector<double> out(count);
  std::memcpy(out.data(), buf.data(), buf.size());
  return out;
}

ModeProfileGrid load_mode_profiles(const fs::path& manifest, bool normalize) {
  std::ifstream in(manifest);
  if (!in) throw ConfigError("cannot open mode manifest " + manifest.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("mode manifest is not valid JSON: " + std::string(e.what()));
  }
  const fs::path dir = manifest.parent_path();
  ModeProfileGrid g;
  try {
    g.nx = j.at("nx").get<int>();
    g.nz = j.at("nz").get<int>();
    g.dx = j.at("dx_m").get<double>();
    g.dz = j.at("dz_m").get<double>();
    if (g.nx <= 0 || g.nz <= 0) throw ConfigError("mode grid dimensions must be positive");
    const std::size_t cells = g.cells();
    g.eps = read_real_array(dir / j.at("eps").get<std::string>(), cells);
    if (j.contains("vp_over_vg"))
      g.vp_over_vg = read_real_array(dir / j.at("vp_over_vg").get<std::string>(), cells);
    if (j.contains("chi_mask"))
      g.chi_mask = read_real_array(dir / j.at("chi_mask").get<std::string>(), cells);
    for (const json& m : j.at("modes")) {
      ModeField f;
      f.band = parse_band(m.at("band").get<std::string>());
      f.omega = m.contains("wavelength_nm")
                    ? angular_frequency_from_wavelength(m.at("wavelength_nm").get<double>() * 1e-9)
                    : m.at("omega_rad_per_s").get<double>();
      f.group_velocity = m.at("group_velocity_m_per_s").get<double>();
      f.e.assign(cells, Vec3c{});
      const char* comp[3] = {"ex", "ey", "ez"};
      for (int c = 0; c < 3; ++c) {
        if (!m.contains(comp[c])) continue;
        const auto data = read_complex_array(dir / m.at(comp[c]).get<std::string>(), cells);
        for (std::size_t i = 0; i < cells; ++i) f.e[i][c] = data[i];
      }
      g.modes.push_back(std::move(f));
    }
  } catch (const json::exception& e) {
    throw ConfigError("malformed mode manifest: " + std::string(e.what()));
  } catch (const DomainError& e) {
    throw ConfigError("malformed mode manifest: " + std::string(e.what()));
  }
  try {
    g.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (normalize) {
    normalize_modes(g);
  } else {
    for (const ModeField& m : g.modes) {
      const double n = mode_normalization(g, m.band);
      if (std::abs(n - 1.0) > 1e-3) {
        std::ostringstream s;
        s << "mode " << to_string(m.band) << " normalization integral is " << n
          << "; pass normalize to rescale";
        throw ConfigError(s.str());
      }
    }
  }
  return g;
}

void save_mode_profiles(const ModeProfileGrid& g, const fs::path& manifest) {
  g.validate();
  const fs::path dir = manifest.parent_path().empty() ? fs::path(".") : manifest.parent_path();
  ArrayWriter w(dir);
  const std::size_t nx = static_cast<std::size_t>(g.nx);
  const std::size_t nz = static_cast<std::size_t>(g.nz);
  ordered_json j;
  j["nx"] = g.nx;
  j["nz"] = g.nz;
  j["dx_m"] = g.dx;
  j["dz_m"] = g.dz;
  w.write("eps", std::span<const double>(g.eps), {nx, nz});
  j["eps"] = "eps.bin";
  if (!g.vp_over_vg.empty()) {
    w.write("vp_over_vg", std::span<const double>(g.vp_over_vg), {nx, nz});
    j["vp_over_vg"] = "vp_over_vg.bin";
  }
  if (!g.chi_mask.empty()) {
    w.write("chi_mask", std::span<const double>(g.chi_mask), {nx, nz});
    j["chi_mask"] = "chi_mask.bin";
  }
  ordered_json modes = ordered_json::array();
  for (const ModeField& m : g.modes) {
    ordered_json e;
    const std::string b(to_string(m.band));
    e["band"] = b;
    e["omega_rad_per_s"] = m.omega;
    e["group_velocity_m_per_s"] = m.group_velocity;
    const char* comp[3] = {"ex", "ey", "ez"};
    for (int c = 0; c < 3; ++c) {
      std::vector<cd> data(m.e.size());
      for (std::size_t i = 0; i < data.size(); ++i) data[i] = m.e[i][c];
      const std::string name = "mode_" + b + "_" + comp[c];
      w.write(name, std::span<const cd>(data), {nx, nz});
      e[comp[c]] = name + ".bin";
    }
    modes.push_back(e);
  }
  j["modes"] = modes;
  std::ofstream out(manifest);
  if (!out) throw ConfigError("cannot write " + manifest.string());
  out << j.dump(2) << "\n";
}

}  // namespace tripletsim
