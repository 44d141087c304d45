#pragma once

#include <array>
#include <span>
#include <vector>

#include "tripletsim/device.hpp"

namespace tripletsim {

using Vec3c = std::array<cd, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

class Chi3Tensor {
 public:
  // 4-bar-3m cubic class under Kleinman symmetry: one independent component.
  static Chi3Tensor cubic_kleinman(double chi_bar);

  double chi_bar() const { return chi_bar_; }
  double operator()(int i, int j, int k, int l) const { return c_[flat(i, j, k, l)]; }
  int nonzero_count() const;
  Chi3Tensor rotated(const Mat3& r) const;

  // sum chi_ijkl conj(a_i) conj(b_j) c_k d_l
  cd contract(const Vec3c& a, const Vec3c& b, const Vec3c& c, const Vec3c& d) const;

 private:
  static int flat(int i, int j, int k, int l) { return ((i * 3 + j) * 3 + k) * 3 + l; }
  double chi_bar_ = 0.0;
  std::array<double, 81> c_{};
};

// (chi/3) [(a*.b*)(c.d) + (a*.c)(b*.d) + (a*.d)(b*.c)]
cd isotropic_contract(double chi_bar, const Vec3c& a, const Vec3c& b, const Vec3c& c,
                      const Vec3c& d);

Mat3 rotation_about_z(double angle);

struct ModeField {
  Band band = Band::P1;
  double omega = 0.0;
  double group_velocity = 0.0;
  std::vector<Vec3c> e;  // row-major [nx, nz], cell centers
};

struct ModeProfileGrid {
  int nx = 0;
  int nz = 0;
  double dx = 0.0;
  double dz = 0.0;
  std::vector<double> eps;         // relative permittivity
  std::vector<double> vp_over_vg;  // local phase/group velocity ratio
  std::vector<double> chi_mask;    // 1 inside the nonlinear material
  std::vector<ModeField> modes;

  std::size_t cells() const { return static_cast<std::size_t>(nx) * nz; }
  const ModeField& mode(Band b) const;
  void validate() const;
};

// integral of (vp/vg) eps0 eps |e|^2 dA; equals 1 for normalized modes
double mode_normalization(const ModeProfileGrid& grid, Band band);
void normalize_modes(ModeProfileGrid& grid);

struct GammaNl {
  double value = 0.0;          // (W m)^-1
  double imag_residual = 0.0;  // |Im| / |Re|
};

GammaNl gamma_nl(const ModeProfileGrid& grid, const std::array<Band, 4>& bands,
                 double chi_bar);

// C1 = hbar^2 sqrt(w_S1 w_I) v_P1^2 L1 gamma1 / (4 pi^2)
double k1_prefactor(const Device& dev);
// C2 = hbar^2 sqrt(w_S2 w_S3) v_I v_P2 L2 gamma2 / (2 pi^2)
double k2_prefactor(const Device& dev);

// K1^{l l'}(k_S1, k_I, k_P1, k_P1')
cd k1_direct(const Device& dev, Channel signal, Channel idler, double k1, double k2,
             double k3, double k4);
// K2^{nu m m'}(k_S2, k_S3, k_I, k_P2); nu is the annihilated idler channel
cd k2_direct(const Device& dev, Channel idler, Channel s2, Channel s3, double k1, double k2,
             double k3, double k4);

// Per-slot sampled coefficient profiles; created photons enter conjugated.
struct KernelFactors {
  double prefactor = 0.0;
  std::array<Band, 4> bands{};
  std::array<std::array<std::vector<cd>, 3>, 4> profile;

  cd evaluate(const std::array<Channel, 4>& channels,
              const std::array<std::size_t, 4>& index) const;
};

KernelFactors k1_profile(const Device& dev, const std::array<std::span<const double>, 4>& k);
KernelFactors k2_profile(const Device& dev, const std::array<std::span<const double>, 4>& k);

}  // namespace tripletsim
