#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "tripletsim/errors.hpp"
#include "tripletsim/kernels.hpp"

using namespace tripletsim;
using testing::kV;
using testing::rel;

namespace {

Vec3c random_vec(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return {cd(n(rng), n(rng)), cd(n(rng), n(rng)), cd(n(rng), n(rng))};
}

Mat3 multiply(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

Mat3 rotation_about_x(double t) {
  return Mat3{{{1.0, 0.0, 0.0}, {0.0, std::cos(t), -std::sin(t)}, {0.0, std::sin(t), std::cos(t)}}};
}

Vec3c apply(const Mat3& r, const Vec3c& v) {
  Vec3c o{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) o[i] += r[i][j] * v[j];
  return o;
}

// uniform y-polarized field in a rectangular core, zero in the cladding
ModeProfileGrid box_grid(double n_core, int nx, int nz, int cx, int cz) {
  ModeProfileGrid g;
  g.nx = nx;
  g.nz = nz;
  g.dx = 20e-9;
  g.dz = 15e-9;
  g.eps.assign(g.cells(), 1.444 * 1.444);
  g.chi_mask.assign(g.cells(), 0.0);
  const auto bands = testing::nominal_bands();
  for (Band b : {Band::S1, Band::I, Band::P1}) {
    ModeField m;
    m.band = b;
    m.omega = bands[index(b)].omega;
    m.group_velocity = kV;
    m.e.assign(g.cells(), Vec3c{});
    g.modes.push_back(m);
  }
  const int x0 = (nx - cx) / 2, z0 = (nz - cz) / 2;
  for (int i = x0; i < x0 + cx; ++i)
    for (int j = z0; j < z0 + cz; ++j) {
      const std::size_t c = static_cast<std::size_t>(i) * nz + j;
      g.eps[c] = n_core * n_core;
      g.chi_mask[c] = 1.0;
      for (ModeField& m : g.modes) m.e[c] = {0.0, 1.0, 0.0};
    }
  normalize_modes(g);
  return g;
}

}  // namespace

TEST_CASE("cubic Kleinman tensor") {
  const Chi3Tensor t = Chi3Tensor::cubic_kleinman(2.0e-19);
  CHECK(t.nonzero_count() == 21);
  CHECK(t(0, 0, 0, 0) == 2.0e-19);
  CHECK(rel(t(0, 0, 1, 1), 2.0e-19 / 3.0) < 1e-15);
  CHECK(rel(t(1, 2, 1, 2), 2.0e-19 / 3.0) < 1e-15);
  CHECK(t(0, 1, 1, 1) == 0.0);
  // full permutation symmetry
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          CHECK(t(i, j, k, l) == t(j, i, k, l));
          CHECK(t(i, j, k, l) == t(k, l, i, j));
          CHECK(t(i, j, k, l) == t(i, k, j, l));
        }
}

TEST_CASE("tensor rotation invariance") {
  const double chi = 1.0;
  const Chi3Tensor t = Chi3Tensor::cubic_kleinman(chi);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat3 r = multiply(rotation_about_z(ang(rng)), rotation_about_x(ang(rng)));
    const Chi3Tensor tr = t.rotated(r);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) worst = std::max(worst, std::abs(tr(i, j, k, l) - t(i, j, k, l)));
    CHECK(worst < 1e-12 * chi);

    const Vec3c a = random_vec(rng), b = random_vec(rng), c = random_vec(rng), d = random_vec(rng);
    const cd base = t.contract(a, b, c, d);
    const cd rot = t.contract(apply(r, a), apply(r, b), apply(r, c), apply(r, d));
    CHECK(std::abs(rot - base) < 1e-12 * std::abs(base));
    CHECK(std::abs(isotropic_contract(chi, a, b, c, d) - base) < 1e-12 * std::abs(base));
  }
  // co-polarized fields in the chip plane
  for (double th : {0.1, 0.9, 2.4}) {
    const Vec3c e{cd(std::cos(th)), cd(std::sin(th)), cd(0.0)};
    CHECK(std::abs(t.contract(e, e, e, e) - cd(chi)) < 1e-12);
  }
}

TEST_CASE("nonlinear parameter of a uniform box") {
  const double n = 3.48, chi = 2.2e-19;
  const ModeProfileGrid g = box_grid(n, 40, 30, 24, 14);
  for (Band b : {Band::S1, Band::I, Band::P1}) CHECK(std::abs(mode_normalization(g, b) - 1.0) < 1e-12);
  const double area = 24 * 14 * g.dx * g.dz;
  const double w = g.mode(Band::P1).omega;
  const double expect = 3.0 * chi * w / (4.0 * kEpsilon0 * kV * kV * std::pow(n, 4) * area);
  const GammaNl got = gamma_nl(g, {Band::S1, Band::I, Band::P1, Band::P1}, chi);
  CHECK(rel(got.value, expect) < 1e-10);
  CHECK(got.imag_residual == 0.0);
  CHECK(rel(gamma_nl(g, {Band::S1, Band::I, Band::P1, Band::P1}, 2.0 * chi).value,
            2.0 * got.value) < 1e-14);
  // a quarter-area core quadruples gamma
  const ModeProfileGrid small = box_grid(n, 40, 30, 12, 7);
  CHECK(rel(gamma_nl(small, {Band::S1, Band::I, Band::P1, Band::P1}, chi).value, 4.0 * expect) < 1e-10);
}

TEST_CASE("gamma converges under grid refinement") {
  // smooth Gaussian mode sampled at two resolutions
  auto make = [](int nx) {
    ModeProfileGrid g;
    g.nx = nx;
    g.nz = nx;
    g.dx = g.dz = 4e-6 / nx;
    g.eps.assign(g.cells(), 12.0);
    ModeField m;
    m.band = Band::P1;
    m.omega = 1.2e15;
    m.group_velocity = kV;
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < nx; ++j) {
        const double x = (i + 0.5) * g.dx - 2e-6, z = (j + 0.5) * g.dz - 2e-6;
        m.e.push_back({0.0, std::exp(-(x * x + z * z) / (0.5e-6 * 0.5e-6)), 0.0});
      }
    g.modes.push_back(m);
    normalize_modes(g);
    return gamma_nl(g, {Band::P1, Band::P1, Band::P1, Band::P1}, 1e-19).value;
  };
  const double coarse = make(40), fine = make(80);
  CHECK(rel(coarse, fine) < 1e-6);
}

TEST_CASE("mode grid validation") {
  ModeProfileGrid g = box_grid(3.48, 10, 10, 4, 4);
  g.eps.pop_back();
  CHECK_THROWS_AS(g.validate(), DomainError);
  ModeProfileGrid h = box_grid(3.48, 10, 10, 4, 4);
  CHECK_THROWS_AS(gamma_nl(h, {Band::S2, Band::I, Band::P1, Band::P1}, 1.0), DomainError);
  h.modes[0].e.resize(3);
  CHECK_THROWS_AS(gamma_nl(h, {Band::S1, Band::I, Band::P1, Band::P1}, 1.0), DomainError);
}

TEST_CASE("kernel prefactors") {
  const auto dev = testing::nominal_device();
  const auto& b = dev.band(Band::P1);
  const double c1 = kHbar * kHbar * std::sqrt(dev.band(Band::S1).omega * dev.band(Band::I).omega) *
                    b.group_velocity * b.group_velocity * dev.circumference(1) * 250.0 / (4.0 * kPi * kPi);
  CHECK(rel(k1_prefactor(dev), c1) < 1e-15);
  // both rings share v, so C2 / C1 reduces to geometry and frequencies
  const double ratio = 2.0 * std::sqrt(dev.band(Band::S2).omega * dev.band(Band::S3).omega /
                                       (dev.band(Band::S1).omega * dev.band(Band::I).omega)) *
                       dev.circumference(2) / dev.circumference(1);
  CHECK(rel(k2_prefactor(dev) / k1_prefactor(dev), ratio) < 1e-14);
}

TEST_CASE("K1 factorization and magnitudes") {
  const auto dev = testing::preset_device("C");
  const double gi = dev.require(1, Band::I).decay_total();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> x(-6.0, 6.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::array<double, 4> k{};
    const Band bands[4] = {Band::S1, Band::I, Band::P1, Band::P1};
    for (int s = 0; s < 4; ++s) k[s] = dev.band(bands[s]).reference_wavenumber + x(rng) * gi / kV;
    const KernelFactors f = k1_profile(dev, {std::span<const double>(&k[0], 1), std::span<const double>(&k[1], 1),
                                             std::span<const double>(&k[2], 1), std::span<const double>(&k[3], 1)});
    for (Channel a : kChannels)
      for (Channel b : kChannels) {
        const cd direct = k1_direct(dev, a, b, k[0], k[1], k[2], k[3]);
        const cd fact = f.evaluate({a, b, Channel::ac, Channel::ac}, {0, 0, 0, 0});
        CHECK(std::abs(direct - fact) <= 1e-14 * std::abs(direct));
        // S1 lives in ring 1 only; the idler can still be lost in ring 2
        if (a == Channel::ph2) CHECK(direct == cd{});
        if (a != Channel::ph2 && b == Channel::ph2) CHECK(std::abs(direct) > 0.0);
      }
  }

  const std::array<double, 4> k{dev.band(Band::S1).reference_wavenumber, dev.band(Band::I).reference_wavenumber,
                                  dev.band(Band::P1).reference_wavenumber, dev.band(Band::P1).reference_wavenumber};
  SUBCASE("on resonance") {
    auto f = [&](int ring, Band b, Sign s) {
      return std::abs(field_enhancement(dev.require(ring, b), Channel::ac, s, dev.band(b).reference_wavenumber));
    };
    // the idler leaves ring 1 through ring 2's coupling region: factor |1 - 2 eta2| on resonance
    const RingResonance& i2 = dev.require(2, Band::I);
    const double pass = std::abs(1.0 - 2.0 * i2.efficiency(Channel::ac));
    const double expect = k1_prefactor(dev) * f(1, Band::S1, Sign::plus) * f(1, Band::I, Sign::plus) * pass *
                          f(1, Band::P1, Sign::minus) * f(1, Band::P1, Sign::minus);
    CHECK(rel(std::abs(k1_direct(dev, Channel::ac, Channel::ac, k[0], k[1], k[2], k[3])), expect) < 1e-12);
    CHECK(std::abs(k1_direct(dev, Channel::ac, Channel::ph1, k[0], k[1], k[2], k[3])) > 0.0);
  }
  SUBCASE("zero nonlinearity") {
    auto cfg = build_preset("C");
    cfg.gamma_nl_per_w_m = {0.0, 250.0};
    const Device d = build_device(cfg);
    CHECK(k1_direct(d, Channel::ac, Channel::ac, k[0], k[1], k[2], k[3]) == cd{});
    CHECK(k2_direct(d, Channel::ac, Channel::ac, Channel::ac, 0.0, 0.0, 0.0, 0.0) != cd{});
  }
}

TEST_CASE("K2 idler channels and magnitude") {
  const auto dev = testing::preset_device("C");
  const double g = dev.require(2, Band::S2).decay_total();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> x(-4.0, 4.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::array<double, 4> k{};
    const Band bands[4] = {Band::S2, Band::S3, Band::I, Band::P2};
    for (int s = 0; s < 4; ++s) k[s] = dev.band(bands[s]).reference_wavenumber + x(rng) * g / kV;
    int nonzero = 0;
    for (Channel nu : kChannels) {
      const cd v = k2_direct(dev, nu, Channel::ac, Channel::ac, k[0], k[1], k[2], k[3]);
      if (v != cd{}) ++nonzero;
      if (nu == Channel::ph1) CHECK(v == cd{});
    }
    CHECK(nonzero == 2);
    const KernelFactors f = k2_profile(dev, {std::span<const double>(&k[0], 1), std::span<const double>(&k[1], 1),
                                             std::span<const double>(&k[2], 1), std::span<const double>(&k[3], 1)});
    for (Channel nu : kChannels)
      for (Channel m : kChannels) {
        const cd direct = k2_direct(dev, nu, m, Channel::ac, k[0], k[1], k[2], k[3]);
        CHECK(std::abs(direct - f.evaluate({m, Channel::ac, nu, Channel::ac}, {0, 0, 0, 0})) <=
              1e-14 * std::abs(direct));
      }
  }
  auto f = [&](Band b, Sign s) {
    return std::abs(field_enhancement(dev.require(2, b), Channel::ac, s, dev.band(b).reference_wavenumber));
  };
  const double expect = k2_prefactor(dev) * f(Band::S2, Sign::plus) * f(Band::S3, Sign::plus) *
                        f(Band::I, Sign::plus) * f(Band::P2, Sign::minus);
  const cd got = k2_direct(dev, Channel::ac, Channel::ac, Channel::ac, dev.band(Band::S2).reference_wavenumber,
                           dev.band(Band::S3).reference_wavenumber, dev.band(Band::I).reference_wavenumber,
                           dev.band(Band::P2).reference_wavenumber);
  CHECK(rel(std::abs(got), expect) < 1e-12);
}
