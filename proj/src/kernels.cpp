#include "tripletsim/kernels.hpp"

#include <cmath>
#include <string>

#include "tripletsim/errors.hpp"

namespace tripletsim {

Chi3Tensor Chi3Tensor::cubic_kleinman(double chi_bar) {
  Chi3Tensor t;
  t.chi_bar_ = chi_bar;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) {
        t.c_[flat(i, i, i, i)] = chi_bar;
        continue;
      }
      t.c_[flat(i, i, j, j)] = chi_bar / 3.0;
      t.c_[flat(i, j, i, j)] = chi_bar / 3.0;
      t.c_[flat(i, j, j, i)] = chi_bar / 3.0;
    }
  return t;
}

int Chi3Tensor::nonzero_count() const {
  int n = 0;
  for (double v : c_)
    if (v != 0.0) ++n;
  return n;
}

Chi3Tensor Chi3Tensor::rotated(const Mat3& r) const {
  Chi3Tensor out;
  out.chi_bar_ = chi_bar_;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double s = 0.0;
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
              for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d)
                  s += r[i][a] * r[j][b] * r[k][c] * r[l][d] * c_[flat(a, b, c, d)];
          out.c_[flat(i, j, k, l)] = s;
        }
  return out;
}

cd Chi3Tensor::contract(const Vec3c& a, const Vec3c& b, const Vec3c& c, const Vec3c& d) const {
  cd s{0.0, 0.0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const cd ab = std::conj(a[i]) * std::conj(b[j]);
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          const double x = c_[flat(i, j, k, l)];
          if (x != 0.0) s += x * ab * c[k] * d[l];
        }
    }
  return s;
}

namespace {

cd dot(const Vec3c& a, const Vec3c& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3c conj(const Vec3c& a) { return {std::conj(a[0]), std::conj(a[1]), std::conj(a[2])}; }

}  // namespace

cd isotropic_contract(double chi_bar, const Vec3c& a, const Vec3c& b, const Vec3c& c,
                      const Vec3c& d) {
  const Vec3c ac = conj(a);
  const Vec3c bc = conj(b);
  return chi_bar / 3.0 * (dot(ac, bc) * dot(c, d) + dot(ac, c) * dot(bc, d) + dot(ac, d) * dot(bc, c));
}

Mat3 rotation_about_z(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return Mat3{{{c, -s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}}};
}

const ModeField& ModeProfileGrid::mode(Band b) const {
  for (const ModeField& m : modes)
    if (m.band == b) return m;
  throw DomainError("mode profile for band " + std::string(to_string(b)) + " is missing");
}

void ModeProfileGrid::validate() const {
  if (nx <= 0 || nz <= 0) throw DomainError("mode grid needs positive dimensions");
  if (!(dx > 0.0) || !(dz > 0.0)) throw DomainError("mode grid spacings must be positive");
  if (eps.size() != cells()) throw DomainError("permittivity map does not match the grid");
  if (!vp_over_vg.empty() && vp_over_vg.size() != cells())
    throw DomainError("velocity-ratio map does not match the grid");
  if (!chi_mask.empty() && chi_mask.size() != cells())
    throw DomainError("nonlinear mask does not match the grid");
  for (const ModeField& m : modes) {
    if (m.e.size() != cells())
      throw DomainError("field samples for band " + std::string(to_string(m.band)) +
                        " do not match the grid");
    if (!(m.omega > 0.0) || !(m.group_velocity > 0.0))
      throw DomainError("mode frequency and group velocity must be positive");
  }
}

double mode_normalization(const ModeProfileGrid& grid, Band band) {
  grid.validate();
  const ModeField& m = grid.mode(band);
  double s = 0.0;
  for (std::size_t c = 0; c < grid.cells(); ++c) {
    const double ratio = grid.vp_over_vg.empty() ? 1.0 : grid.vp_over_vg[c];
    const double e2 = std::norm(m.e[c][0]) + std::norm(m.e[c][1]) + std::norm(m.e[c][2]);
    s += ratio * grid.eps[c] * e2;
  }
  return kEpsilon0 * s * grid.dx * grid.dz;
}

void normalize_modes(ModeProfileGrid& grid) {
  for (ModeField& m : grid.modes) {
    const double n = mode_normalization(grid, m.band);
    if (!(n > 0.0)) throw DomainError("cannot normalize a vanishing mode");
    const double scale = 1.0 / std::sqrt(n);
    for (Vec3c& e : m.e)
      for (cd& x : e) x *= scale;
  }
}

GammaNl gamma_nl(const ModeProfileGrid& grid, const std::array<Band, 4>& bands,
                 double chi_bar) {
  grid.validate();
  const ModeField& m1 = grid.mode(bands[0]);
  const ModeField& m2 = grid.mode(bands[1]);
  const ModeField& m3 = grid.mode(bands[2]);
  const ModeField& m4 = grid.mode(bands[3]);
  const Chi3Tensor unit = Chi3Tensor::cubic_kleinman(1.0);
  cd overlap{0.0, 0.0};
  for (std::size_t c = 0; c < grid.cells(); ++c) {
    const double mask = grid.chi_mask.empty() ? 1.0 : grid.chi_mask[c];
    if (mask == 0.0) continue;
    overlap += mask * unit.contract(m1.e[c], m2.e[c], m3.e[c], m4.e[c]);
  }
  overlap *= grid.dx * grid.dz;
  const cd g = 3.0 * chi_bar * kEpsilon0 * std::sqrt(m3.omega * m4.omega) /
               (4.0 * m3.group_velocity * m4.group_velocity) * overlap;
  GammaNl out;
  out.value = g.real();
  out.imag_residual = g.real() != 0.0 ? std::abs(g.imag()) / std::abs(g.real()) : 0.0;
  return out;
}

double k1_prefactor(const Device& dev) {
  const double vp = dev.band(Band::P1).group_velocity;
  return kHbar * kHbar * std::sqrt(dev.band(Band::S1).omega * dev.band(Band::I).omega) * vp *
         vp * dev.circumference(1) * dev.gamma_nl(1) / (4.0 * kPi * kPi);
}

double k2_prefactor(const Device& dev) {
  return kHbar * kHbar * std::sqrt(dev.band(Band::S2).omega * dev.band(Band::S3).omega) *
         dev.band(Band::I).group_velocity * dev.band(Band::P2).group_velocity *
         dev.circumference(2) * dev.gamma_nl(2) / (2.0 * kPi * kPi);
}

namespace {

void require_hosted(const Device& dev, int ring, std::initializer_list<Band> bands) {
  for (Band b : bands) dev.require(ring, b);
}

cd out_conj(const Device& dev, Band b, Channel c, int ring, double k) {
  return std::conj(asymptotic_coefficient(dev, b, Direction::out, c, ring, k));
}

cd in_ac(const Device& dev, Band b, int ring, double k) {
  return asymptotic_coefficient(dev, b, Direction::in, Channel::ac, ring, k);
}

}  // namespace

cd k1_direct(const Device& dev, Channel signal, Channel idler, double k1, double k2,
             double k3, double k4) {
  require_hosted(dev, 1, {Band::S1, Band::I, Band::P1});
  return k1_prefactor(dev) * out_conj(dev, Band::S1, signal, 1, k1) *
         out_conj(dev, Band::I, idler, 1, k2) * in_ac(dev, Band::P1, 1, k3) *
         in_ac(dev, Band::P1, 1, k4);
}

cd k2_direct(const Device& dev, Channel idler, Channel s2, Channel s3, double k1, double k2,
             double k3, double k4) {
  require_hosted(dev, 2, {Band::S2, Band::S3, Band::I, Band::P2});
  return k2_prefactor(dev) * out_conj(dev, Band::S2, s2, 2, k1) *
         out_conj(dev, Band::S3, s3, 2, k2) *
         asymptotic_coefficient(dev, Band::I, Direction::out, idler, 2, k3) *
         in_ac(dev, Band::P2, 2, k4);
}

cd KernelFactors::evaluate(const std::array<Channel, 4>& channels,
                           const std::array<std::size_t, 4>& index) const {
  cd v{prefactor, 0.0};
  for (int s = 0; s < 4; ++s) {
    const auto& p = profile[s][tripletsim::index(channels[s])];
    if (p.empty()) throw DomainError("kernel slot has no profile for this channel");
    v *= p.at(index[s]);
  }
  return v;
}

namespace {

std::vector<cd> sample(std::span<const double> k, auto&& f) {
  std::vector<cd> out(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) out[i] = f(k[i]);
  return out;
}

}  // namespace

KernelFactors k1_profile(const Device& dev, const std::array<std::span<const double>, 4>& k) {
  require_hosted(dev, 1, {Band::S1, Band::I, Band::P1});
  KernelFactors f;
  f.prefactor = k1_prefactor(dev);
  f.bands = {Band::S1, Band::I, Band::P1, Band::P1};
  for (Channel c : kChannels) {
    f.profile[0][index(c)] = sample(k[0], [&](double q) { return out_conj(dev, Band::S1, c, 1, q); });
    f.profile[1][index(c)] = sample(k[1], [&](double q) { return out_conj(dev, Band::I, c, 1, q); });
  }
  f.profile[2][index(Channel::ac)] = sample(k[2], [&](double q) { return in_ac(dev, Band::P1, 1, q); });
  f.profile[3][index(Channel::ac)] = sample(k[3], [&](double q) { return in_ac(dev, Band::P1, 1, q); });
  return f;
}

KernelFactors k2_profile(const Device& dev, const std::array<std::span<const double>, 4>& k) {
  require_hosted(dev, 2, {Band::S2, Band::S3, Band::I, Band::P2});
  KernelFactors f;
  f.prefactor = k2_prefactor(dev);
  f.bands = {Band::S2, Band::S3, Band::I, Band::P2};
  for (Channel c : kChannels) {
    f.profile[0][index(c)] = sample(k[0], [&](double q) { return out_conj(dev, Band::S2, c, 2, q); });
    f.profile[1][index(c)] = sample(k[1], [&](double q) { return out_conj(dev, Band::S3, c, 2, q); });
    f.profile[2][index(c)] = sample(k[2], [&](double q) {
      return asymptotic_coefficient(dev, Band::I, Direction::out, c, 2, q);
    });
  }
  f.profile[3][index(Channel::ac)] = sample(k[3], [&](double q) { return in_ac(dev, Band::P2, 2, q); });
  return f;
}

}  // namespace tripletsim
