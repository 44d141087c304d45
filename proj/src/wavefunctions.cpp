#include "tripletsim/wavefunctions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tripletsim/errors.hpp"
#include "tripletsim/kernels.hpp"

namespace tripletsim {

namespace {

const cd kI{0.0, 1.0};

double linewidth(const Device& dev, int ring, Band b) { return dev.require(ring, b).decay_total(); }

double idler_epsilon(const Device& dev, double epsilon) {
  return epsilon * std::min(linewidth(dev, 1, Band::I), linewidth(dev, 2, Band::I));
}

std::vector<cd> out_profile(const Device& dev, Band b, Channel c, int ring, const KGrid& g) {
  std::vector<cd> out(g.k.size());
  for (std::size_t i = 0; i < g.k.size(); ++i)
    out[i] = std::conj(asymptotic_coefficient(dev, b, Direction::out, c, ring, g.k[i]));
  return out;
}

std::vector<double> weighted_norms(const std::vector<cd>& factor, const KGrid& g) {
  std::vector<double> out(factor.size());
  for (std::size_t i = 0; i < factor.size(); ++i) out[i] = g.weight[i] * std::norm(factor[i]);
  return out;
}

struct Extent {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
};

Extent extent(const std::vector<double>& v) {
  Extent e;
  for (double x : v) {
    e.lo = std::min(e.lo, x);
    e.hi = std::max(e.hi, x);
  }
  return e;
}

}  // namespace

void GridSettings::validate() const {
  if (n < 8) throw DomainError("grid_n must be at least 8");
  if (!(span > 0.0)) throw DomainError("grid_span must be positive");
  if (idler_n < 8) throw DomainError("idler grid needs at least 8 points");
  if (!(idler_span > 0.0)) throw DomainError("idler span must be positive");
  if (pump_n < 8) throw DomainError("pump grid needs at least 8 points");
  if (!(pump_span_linewidths > 0.0) || !(pump_span_sigmas > 0.0))
    throw DomainError("pump spans must be positive");
  if (!(pump_nodes_per_sigma >= 0.0)) throw DomainError("pump nodes per sigma must be >= 0");
  if (oversample < 1) throw DomainError("oversample must be >= 1");
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (threads < 0) throw DomainError("threads must be >= 0");
}

PumpSampling::PumpSampling(const Device& dev, const PumpSpectrum& pump, int ring,
                           const GridSettings& settings)
    : dev_(&dev), pump_(pump), ring_(ring) {
  const RingResonance& res = dev.require(ring, pump.band());
  const BandSpec& band = dev.band(pump.band());
  const double center = pump.center_omega() - band.omega;
  auto din = [&](double k) {
    return asymptotic_coefficient(dev, pump.band(), Direction::in, Channel::ac, ring, k);
  };

  if (pump.cw()) {
    detuning_ = {center};
    k_ = {pump.center_wavenumber()};
    quad_ = {1.0};
    weight_ = {pump.cw_line_amplitude() * din(k_[0])};
    return;
  }

  const double sigma = pump.omega_sigma();
  const double half = std::max(settings.pump_span_linewidths * res.decay_total(),
                               settings.pump_span_sigmas * sigma);
  int n = settings.pump_n;
  if (settings.pump_nodes_per_sigma > 0.0) {
    const double wanted = std::ceil(2.0 * half * settings.pump_nodes_per_sigma / sigma) + 1.0;
    n = static_cast<int>(std::min<double>(std::max<double>(n, wanted), 1 << 18));
  }
  const Quadrature q = Quadrature::trapezoid(center - half, center + half, n);
  const double v = band.group_velocity;
  detuning_ = q.node;
  k_.resize(n);
  quad_.resize(n);
  weight_.resize(n);
  for (int m = 0; m < n; ++m) {
    k_[m] = band.reference_wavenumber + detuning_[m] / v;
    quad_[m] = q.weight[m] / v;
    weight_[m] = quad_[m] * din(k_[m]) * pump.alpha() * pump.phi(k_[m]);
  }
  truncation_ = pump.energy_outside(k_.front(), k_.back());
  if (truncation_ > settings.max_pump_truncation) {
    std::ostringstream d;
    d << "pump " << to_string(pump.band()) << " energy outside grid: " << truncation_
      << " (limit " << settings.max_pump_truncation << ")";
    throw ConvergenceError("pump spectrum truncated by the integration grid", d.str());
  }
}

cd PumpSampling::g(double k) const {
  return asymptotic_coefficient(*dev_, pump_.band(), Direction::in, Channel::ac, ring_, k) *
         pump_.phi(k);
}

double PumpSampling::node_spacing() const {
  if (detuning_.size() < 2) return std::numeric_limits<double>::infinity();
  return detuning_[1] - detuning_[0];
}

PumpConvolution::PumpConvolution(const Device& dev, const PumpSpectrum& pump1,
                                 const GridSettings& settings)
    : dev_(&dev), sampling_([&]() -> PumpSampling {
        if (pump1.band() != Band::P1) throw DomainError("first pump must drive band P1");
        if (pump1.cw()) throw DomainError("pump P1 must be pulsed");
        return PumpSampling(dev, pump1, 1, settings);
      }()) {
  const BandSpec& band = dev.band(Band::P1);
  v_ = band.group_velocity;
  reference_k_ = band.reference_wavenumber;
  // both pump photons enter ring 1 with exp(-i (k - K) a)
  carrier_ = -dev.half_separation() / v_;
  const auto& k = sampling_.k();
  g_nodes_.resize(k.size());
  const double dk = (sampling_.detuning()[1] - sampling_.detuning()[0]) / v_;
  for (std::size_t m = 0; m < k.size(); ++m) {
    const double w = (m == 0 || m + 1 == k.size()) ? 0.5 * dk : dk;
    g_nodes_[m] = w * sampling_.g(k[m]);
  }
}

cd PumpConvolution::operator()(double total_detuning) const {
  const auto& det = sampling_.detuning();
  cd s{0.0, 0.0};
  for (std::size_t m = 0; m < det.size(); ++m)
    s += g_nodes_[m] * sampling_.g(reference_k_ + (total_detuning - det[m]) / v_);
  return s / v_;
}

namespace {

struct IdlerNodes {
  double v = 0.0;
  double reference_k = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> detuning;
  std::vector<double> k;
  std::vector<double> weight;
};

IdlerNodes idler_nodes(const Device& dev, const GridSettings& settings) {
  const BandSpec& band = dev.band(Band::I);
  IdlerNodes nodes;
  nodes.v = band.group_velocity;
  nodes.reference_k = band.reference_wavenumber;
  const double width = std::max(linewidth(dev, 1, Band::I), linewidth(dev, 2, Band::I));
  const double half = settings.idler_span * width;
  const Quadrature q = Quadrature::trapezoid(-half, half, settings.idler_n);
  nodes.lo = -half;
  nodes.hi = half;
  nodes.detuning = q.node;
  nodes.k.resize(q.node.size());
  nodes.weight.resize(q.node.size());
  for (std::size_t m = 0; m < q.node.size(); ++m) {
    nodes.k[m] = nodes.reference_k + q.node[m] / nodes.v;
    nodes.weight[m] = q.weight[m] / nodes.v;
  }
  return nodes;
}

// int dq h(q) / (e - delta_q + i eps) with the pole subtracted analytically
template <class H>
cd resolvent_integral(const IdlerNodes& nodes, double eps, double e, const std::vector<cd>& h_nodes,
                      H&& h) {
  const cd h0 = h(nodes.reference_k + e / nodes.v);
  cd s{0.0, 0.0};
  for (std::size_t m = 0; m < h_nodes.size(); ++m)
    s += nodes.weight[m] * (h_nodes[m] - h0) / cd{e - nodes.detuning[m], eps};
  const cd log_term = std::log(cd{e - nodes.lo, eps}) - std::log(cd{e - nodes.hi, eps});
  return s + h0 * log_term / nodes.v;
}

}  // namespace

IdlerPropagator::IdlerPropagator(const Device& dev, const GridSettings& settings, double epsilon)
    : dev_(&dev), rule_(settings.idler_rule) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  const IdlerNodes nodes = idler_nodes(dev, settings);
  v_ = nodes.v;
  reference_k_ = nodes.reference_k;
  eps_ = idler_epsilon(dev, epsilon);
  lo_ = nodes.lo;
  hi_ = nodes.hi;
  detuning_ = nodes.detuning;
  weight_ = nodes.weight;
  f_.resize(nodes.k.size());
  for (std::size_t m = 0; m < nodes.k.size(); ++m) f_[m] = overlap(nodes.k[m]);
}

cd IdlerPropagator::overlap(double k) const {
  cd s{0.0, 0.0};
  for (Channel nu : kChannels)
    s += std::conj(asymptotic_coefficient(*dev_, Band::I, Direction::out, nu, 1, k)) *
         asymptotic_coefficient(*dev_, Band::I, Direction::out, nu, 2, k);
  return s;
}

cd IdlerPropagator::operator()(double e) const {
  return rule_ == IdlerRule::contour ? closure(e) : quadrature(e);
}

cd IdlerPropagator::quadrature(double e) const {
  const cd f0 = overlap(reference_k_ + e / v_);
  cd s{0.0, 0.0};
  for (std::size_t m = 0; m < f_.size(); ++m)
    s += weight_[m] * (f_[m] - f0) / cd{e - detuning_[m], eps_};
  const cd log_term = std::log(cd{e - lo_, eps_}) - std::log(cd{e - hi_, eps_});
  return s + f0 * log_term / v_;
}

// -(2 pi i / v) F1-(q) F2-(q) exp(2i (q - K) a) at the pole q = K + e / v
cd IdlerPropagator::closure(double e) const {
  auto f_minus = [&](int ring) -> cd {
    const RingResonance& r = dev_->require(ring, Band::I);
    const double g = r.coupling(Channel::ac);
    if (g == 0.0) return {0.0, 0.0};
    const cd denom{r.omega - r.spec.omega - e, -r.decay_total()};
    return g / (std::sqrt(r.circumference) * denom);
  };
  const cd phase = std::polar(1.0, 2.0 * e * dev_->half_separation() / v_);
  return -2.0 * kPi * kI / v_ * f_minus(1) * f_minus(2) * phase;
}


UniformTable::UniformTable(double lo, double hi, double step,
                           const std::function<cd(double)>& f, int threads, double carrier) {
  if (!(step > 0.0) || !(hi >= lo)) throw DomainError("invalid table range");
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 3;
  if (n > (std::size_t{1} << 24)) throw ConvergenceError("interpolation table too large");
  lo_ = lo - step;
  h_ = step;
  carrier_ = carrier;
  v_.resize(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const double x = lo_ + static_cast<double>(i) * h_;
    v_[i] = carrier_ == 0.0 ? f(x) : f(x) * std::polar(1.0, -carrier_ * x);
  });
}

cd UniformTable::operator()(double x) const {
  const double u = (x - lo_) / h_;
  auto i = static_cast<std::ptrdiff_t>(std::floor(u));
  i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(v_.size()) - 2);
  const double t = u - static_cast<double>(i);
  const cd y = v_[i] + t * (v_[i + 1] - v_[i]);
  return carrier_ == 0.0 ? y : y * std::polar(1.0, carrier_ * x);
}

namespace {

// Sum over channel-resolved weighted norms: entry[c] = sum_i u[c][i] |core_i|^2 style
// contractions done axis by axis with pairwise summation.
std::array<double, 9> channel_table_2d(const std::array<std::vector<double>, 3>& u1,
                                       const std::array<std::vector<double>, 3>& u2,
                                       const std::vector<cd>& core, std::size_t n1,
                                       std::size_t n2) {
  std::array<double, 9> out{};
  std::vector<double> terms(n1 * n2);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
          terms[i * n2 + j] = u1[a][i] * u2[b][j] * std::norm(core[i * n2 + j]);
      out[a * 3 + b] = pairwise_sum(terms);
    }
  return out;
}

std::array<double, 27> channel_table_3d(const std::array<std::vector<double>, 3>& u1,
                                        const std::array<std::vector<double>, 3>& u2,
                                        const std::array<std::vector<double>, 3>& u3,
                                        const std::vector<cd>& core, std::size_t n1,
                                        std::size_t n2, std::size_t n3) {
  // q[a][j*n3+k] = sum_i u1[a][i] |core_ijk|^2
  std::array<std::vector<double>, 3> q;
  std::vector<double> col(n1);
  for (int a = 0; a < 3; ++a) {
    q[a].assign(n2 * n3, 0.0);
    for (std::size_t j = 0; j < n2; ++j)
      for (std::size_t k = 0; k < n3; ++k) {
        for (std::size_t i = 0; i < n1; ++i)
          col[i] = u1[a][i] * std::norm(core[(i * n2 + j) * n3 + k]);
        q[a][j * n3 + k] = pairwise_sum(col);
      }
  }
  std::array<double, 27> out{};
  std::vector<double> terms(n2 * n3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        for (std::size_t j = 0; j < n2; ++j)
          for (std::size_t k = 0; k < n3; ++k)
            terms[j * n3 + k] = u2[b][j] * u3[c][k] * q[a][j * n3 + k];
        out[(a * 3 + b) * 3 + c] = pairwise_sum(terms);
      }
  return out;
}

template <std::size_t N>
double total(const std::array<double, N>& table) {
  return pairwise_sum(std::span<const double>(table.data(), table.size()));
}

}  // namespace

double BiphotonAmplitude::beta() const { return std::sqrt(probability); }

std::vector<cd> BiphotonAmplitude::raw(Channel signal_ch, Channel idler_ch) const {
  const auto& a = signal_factor[index(signal_ch)];
  const auto& b = idler_factor[index(idler_ch)];
  const std::size_t n2 = b.size();
  std::vector<cd> out(core.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < n2; ++j) out[i * n2 + j] = a[i] * b[j] * core[i * n2 + j];
  return out;
}

std::vector<cd> BiphotonAmplitude::amplitude(Channel signal_ch, Channel idler_ch) const {
  if (!(probability > 0.0))
    throw DomainError("pair probability vanishes; the biphoton wavefunction is undefined");
  std::vector<cd> out = raw(signal_ch, idler_ch);
  const double inv = 1.0 / beta();
  for (cd& x : out) x *= inv;
  return out;
}

double TriphotonAmplitude::sigma() const { return std::sqrt(probability); }

std::vector<cd> TriphotonAmplitude::raw(Channel a, Channel b, Channel c) const {
  const auto& f1 = s1_factor[index(a)];
  const auto& f2 = s2_factor[index(b)];
  const auto& f3 = s3_factor[index(c)];
  const std::size_t n2 = f2.size();
  const std::size_t n3 = f3.size();
  std::vector<cd> out(core.size());
  for (std::size_t i = 0; i < f1.size(); ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      const cd ab = f1[i] * f2[j];
      for (std::size_t k = 0; k < n3; ++k) {
        const std::size_t at = (i * n2 + j) * n3 + k;
        out[at] = ab * f3[k] * core[at];
      }
    }
  return out;
}

std::vector<cd> TriphotonAmplitude::amplitude(Channel a, Channel b, Channel c) const {
  if (!(probability > 0.0))
    throw DomainError("triplet probability vanishes; the triphoton wavefunction is undefined");
  std::vector<cd> out = raw(a, b, c);
  const double inv = 1.0 / sigma();
  for (cd& x : out) x *= inv;
  return out;
}

std::vector<cd> TriphotonAmplitude::post_selected() const {
  const double p = channel(Channel::ac, Channel::ac, Channel::ac);
  if (!(p > 0.0)) throw DomainError("the ac,ac,ac amplitude vanishes; nothing to post-select");
  std::vector<cd> out = raw(Channel::ac, Channel::ac, Channel::ac);
  const double inv = 1.0 / std::sqrt(p);
  for (cd& x : out) x *= inv;
  return out;
}

BiphotonAmplitude compute_bwf(const Device& dev, const PumpSpectrum& pump1,
                              const GridSettings& settings) {
  settings.validate();
  BiphotonAmplitude out;
  out.pump1 = pump1;
  out.convolution = std::make_shared<const PumpConvolution>(dev, pump1, settings);
  out.signal = KGrid::make(Band::S1, dev.band(Band::S1), linewidth(dev, 1, Band::S1),
                           settings.n, settings.span);
  out.idler = KGrid::make(Band::I, dev.band(Band::I), linewidth(dev, 1, Band::I), settings.n,
                          settings.span);
  for (Channel c : kChannels) {
    out.signal_factor[index(c)] = out_profile(dev, Band::S1, c, 1, out.signal);
    out.idler_factor[index(c)] = out_profile(dev, Band::I, c, 1, out.idler);
  }
  out.detuning1 =
      2.0 * dev.band(Band::P1).omega - dev.band(Band::S1).omega - dev.band(Band::I).omega;

  const cd pref = 2.0 * kPi * kI * pump1.alpha() * pump1.alpha() * k1_prefactor(dev) / kHbar;
  const std::size_t n1 = out.signal.k.size();
  const std::size_t n2 = out.idler.k.size();
  out.core.resize(n1 * n2);
  const PumpConvolution& conv = *out.convolution;
  parallel_for(n1, settings.threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < n2; ++j)
      out.core[i * n2 + j] =
          pref * conv(out.signal.detuning[i] + out.idler.detuning[j] - out.detuning1);
  });

  std::array<std::vector<double>, 3> u1;
  std::array<std::vector<double>, 3> u2;
  for (int c = 0; c < 3; ++c) {
    u1[c] = weighted_norms(out.signal_factor[c], out.signal);
    u2[c] = weighted_norms(out.idler_factor[c], out.idler);
  }
  out.channel_probability = channel_table_2d(u1, u2, out.core, n1, n2);
  out.probability = total(out.channel_probability);
  if (out.probability > 0.2) {
    std::ostringstream w;
    w << "pair probability " << out.probability
      << " exceeds 0.2; the low-gain treatment is questionable";
    out.warnings.push_back(w.str());
  }
  return out;
}

namespace {

struct TwfContext {
  const Device* dev;
  const BiphotonAmplitude* bwf;
  const PumpSampling* p2;
  const KGrid* g1;
  const KGrid* g2;
  const KGrid* g3;
  double delta1;
  double delta2;
  cd prefactor;
};

std::vector<cd> triphoton_core(const TwfContext& ctx, const IdlerPropagator& idler,
                               const GridSettings& settings, std::size_t* table_points) {
  const KGrid& g1 = *ctx.g1;
  const KGrid& g2 = *ctx.g2;
  const KGrid& g3 = *ctx.g3;
  const std::size_t n1 = g1.k.size();
  const std::size_t n2 = g2.k.size();
  const std::size_t n3 = g3.k.size();
  const auto& d4 = ctx.p2->detuning();
  const auto& c4 = ctx.p2->weight();
  const std::size_t m4 = d4.size();
  const PumpConvolution& conv = *ctx.bwf->convolution;

  std::function<cd(double)> jfun = [&](double w) { return conv(w); };
  std::function<cd(double)> gfun = [&](double e) { return idler(e); };
  UniformTable jtab;
  UniformTable gtab;
  if (settings.evaluation == Evaluation::tabulated) {
    const Extent e1 = extent(g1.detuning);
    const Extent e2 = extent(g2.detuning);
    const Extent e3 = extent(g3.detuning);
    const Extent e4 = extent(d4);
    const double s_lo = e2.lo + e3.lo;
    const double s_hi = e2.hi + e3.hi;
    double step = std::min({g1.domega(), g2.domega(), g3.domega(),
                            0.25 * ctx.dev->min_linewidth()});
    if (!ctx.p2->cw()) step = std::min(step, ctx.p2->node_spacing());
    step /= settings.oversample;
    const double shift = ctx.delta1 + ctx.delta2;
    jtab = UniformTable(e1.lo + s_lo - e4.hi - shift, e1.hi + s_hi - e4.lo - shift, step, jfun,
                        settings.threads, conv.carrier());
    jfun = [&](double w) { return jtab(w); };
    // the contour form is closed; only the quadrature rule is worth tabulating
    if (idler.rule() == IdlerRule::quadrature) {
      gtab = UniformTable(s_lo - e4.hi - ctx.delta2, s_hi - e4.lo - ctx.delta2, step, gfun,
                          settings.threads);
      gfun = [&](double e) { return gtab(e); };
    }
    if (table_points) *table_points = jtab.size() + gtab.size();
  }

  std::vector<cd> core(n1 * n2 * n3);
  parallel_for(n2 * n3, settings.threads, [&](std::size_t jk) {
    const std::size_t j = jk / n3;
    const std::size_t k = jk % n3;
    const double s = g2.detuning[j] + g3.detuning[k];
    std::vector<cd> a(m4);
    std::vector<double> base(m4);
    for (std::size_t m = 0; m < m4; ++m) {
      a[m] = c4[m] * gfun(s - d4[m] - ctx.delta2);
      base[m] = s - d4[m] - ctx.delta1 - ctx.delta2;
    }
    for (std::size_t i = 0; i < n1; ++i) {
      cd h{0.0, 0.0};
      const double t = g1.detuning[i];
      for (std::size_t m = 0; m < m4; ++m) h += a[m] * jfun(t + base[m]);
      core[(i * n2 + j) * n3 + k] = ctx.prefactor * h;
    }
  });
  return core;
}

double triphoton_probability(const TriphotonAmplitude& t, const std::vector<cd>& core,
                             std::array<double, 27>* table) {
  std::array<std::vector<double>, 3> u1;
  std::array<std::vector<double>, 3> u2;
  std::array<std::vector<double>, 3> u3;
  for (int c = 0; c < 3; ++c) {
    u1[c] = weighted_norms(t.s1_factor[c], t.s1);
    u2[c] = weighted_norms(t.s2_factor[c], t.s2);
    u3[c] = weighted_norms(t.s3_factor[c], t.s3);
  }
  const auto tab = channel_table_3d(u1, u2, u3, core, t.s1.k.size(), t.s2.k.size(),
                                    t.s3.k.size());
  if (table) *table = tab;
  return total(tab);
}

}  // namespace

TriphotonAmplitude compute_twf(const Device& dev, const PumpSpectrum& pump2,
                               const BiphotonAmplitude& bwf, const GridSettings& settings) {
  settings.validate();
  if (pump2.band() != Band::P2) throw DomainError("second pump must drive band P2");
  if (!bwf.convolution) throw DomainError("biphoton context is missing its pump convolution");

  TriphotonAmplitude out;
  out.s1 = KGrid::make(Band::S1, dev.band(Band::S1), linewidth(dev, 1, Band::S1), settings.n,
                       settings.span);
  out.s2 = KGrid::make(Band::S2, dev.band(Band::S2), linewidth(dev, 2, Band::S2), settings.n,
                       settings.span);
  out.s3 = KGrid::make(Band::S3, dev.band(Band::S3), linewidth(dev, 2, Band::S3), settings.n,
                       settings.span);
  for (Channel c : kChannels) {
    out.s1_factor[index(c)] = out_profile(dev, Band::S1, c, 1, out.s1);
    out.s2_factor[index(c)] = out_profile(dev, Band::S2, c, 2, out.s2);
    out.s3_factor[index(c)] = out_profile(dev, Band::S3, c, 2, out.s3);
  }

  const PumpSampling p2(dev, pump2, 2, settings);
  const cd alpha1 = bwf.pump1.alpha();
  TwfContext ctx{&dev,
                 &bwf,
                 &p2,
                 &out.s1,
                 &out.s2,
                 &out.s3,
                 bwf.detuning1,
                 dev.band(Band::I).omega + dev.band(Band::P2).omega - dev.band(Band::S2).omega -
                     dev.band(Band::S3).omega,
                 -2.0 * kPi * kI * alpha1 * alpha1 * k1_prefactor(dev) * k2_prefactor(dev) /
                     (kHbar * kHbar)};

  const IdlerPropagator idler(dev, settings, settings.epsilon);
  out.epsilon = settings.epsilon;
  out.core = triphoton_core(ctx, idler, settings, &out.table_points);
  out.probability = triphoton_probability(out, out.core, &out.channel_probability);

  if (settings.idler_rule == IdlerRule::quadrature && settings.check_epsilon &&
      out.probability > 0.0) {
    const IdlerPropagator half(dev, settings, 0.5 * settings.epsilon);
    const std::vector<cd> core_half = triphoton_core(ctx, half, settings, nullptr);
    const double p_half = triphoton_probability(out, core_half, nullptr);
    out.epsilon_drift = std::abs(p_half - out.probability) / out.probability;
    if (out.epsilon_drift > 0.01) {
      std::ostringstream d;
      d << "epsilon=" << settings.epsilon << " |sigma|^2=" << out.probability
        << " ; epsilon=" << 0.5 * settings.epsilon << " |sigma|^2=" << p_half
        << " ; relative drift " << out.epsilon_drift;
      throw ConvergenceError("triplet probability not converged in epsilon", d.str());
    }
  }

  const double acs = out.channel(Channel::ac, Channel::ac, Channel::ac);
  out.post_selection_norm = acs > 0.0 ? std::sqrt(out.probability / acs) : 0.0;
  return out;
}

ProbabilityTable channel_probabilities(const BiphotonAmplitude& amp) {
  ProbabilityTable t;
  t.total = amp.probability;
  for (Channel a : kChannels)
    for (Channel b : kChannels)
      t.entries.emplace_back(std::string(to_string(a)) + "," + std::string(to_string(b)),
                             amp.channel(a, b));
  return t;
}

ProbabilityTable channel_probabilities(const TriphotonAmplitude& amp) {
  ProbabilityTable t;
  t.total = amp.probability;
  for (Channel a : kChannels)
    for (Channel b : kChannels)
      for (Channel c : kChannels)
        t.entries.emplace_back(std::string(to_string(a)) + "," + std::string(to_string(b)) +
                                   "," + std::string(to_string(c)),
                               amp.channel(a, b, c));
  return t;
}

double two_pair_probability_bound(double pair_probability) {
  if (!(pair_probability >= 0.0)) throw DomainError("pair probability must be >= 0");
  return 0.5 * pair_probability * pair_probability;
}

double two_pair_probability_bound(const BiphotonAmplitude& amp) {
  return two_pair_probability_bound(amp.probability);
}

std::vector<cd> brute_force_bwf(const Device& dev, const BiphotonAmplitude& bwf,
                                Channel signal_ch, Channel idler_ch) {
  const PumpSampling& p1 = bwf.convolution->sampling();
  const BandSpec& band = dev.band(Band::P1);
  const double v = band.group_velocity;
  const auto& d3 = p1.detuning();
  const double dk = (d3[1] - d3[0]) / v;
  const cd alpha = bwf.pump1.alpha();
  const cd pref = 2.0 * kPi * kI * alpha * alpha / kHbar;
  const std::size_t n1 = bwf.signal.k.size();
  const std::size_t n2 = bwf.idler.k.size();
  std::vector<cd> out(n1 * n2);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      const double w = bwf.signal.detuning[i] + bwf.idler.detuning[j] - bwf.detuning1;
      cd s{0.0, 0.0};
      for (std::size_t m = 0; m < d3.size(); ++m) {
        const double quad = (m == 0 || m + 1 == d3.size()) ? 0.5 * dk : dk;
        const double k3 = p1.k()[m];
        const double k4 = band.reference_wavenumber + (w - d3[m]) / v;
        s += quad *
             k1_direct(dev, signal_ch, idler_ch, bwf.signal.k[i], bwf.idler.k[j], k3, k4) *
             bwf.pump1.phi(k3) * bwf.pump1.phi(k4);
      }
      out[i * n2 + j] = pref * s / v;
    }
  return out;
}

std::vector<cd> brute_force_twf(const Device& dev, const PumpSpectrum& pump2,
                                const BiphotonAmplitude& bwf, const TriphotonAmplitude& twf,
                                Channel a, Channel b, Channel c, const GridSettings& settings) {
  const PumpSampling& p1 = bwf.convolution->sampling();
  const PumpSampling p2(dev, pump2, 2, settings);
  const IdlerNodes inodes = idler_nodes(dev, settings);
  const double eps = idler_epsilon(dev, settings.epsilon);
  const BandSpec& bp1 = dev.band(Band::P1);
  const BandSpec& bp2 = dev.band(Band::P2);
  const double v1 = bp1.group_velocity;
  const double v2 = bp2.group_velocity;
  const double delta1 = bwf.detuning1;
  const double delta2 = dev.band(Band::I).omega + bp2.omega - dev.band(Band::S2).omega -
                        dev.band(Band::S3).omega;
  const cd alpha1 = bwf.pump1.alpha();
  const cd pref = -2.0 * kPi * kI * alpha1 * alpha1 / (kHbar * kHbar);

  // pump-2 weights without the in-coefficient, which lives inside K2
  std::vector<cd> c4(p2.k().size());
  if (pump2.cw()) {
    c4[0] = pump2.cw_line_amplitude();
  } else {
    const double dk = p2.node_spacing() / v2;
    for (std::size_t m = 0; m < c4.size(); ++m) {
      const double quad = (m == 0 || m + 1 == c4.size()) ? 0.5 * dk : dk;
      c4[m] = quad * pump2.alpha() * pump2.phi(p2.k()[m]);
    }
  }
  const auto& d3 = p1.detuning();
  const double dk3 = (d3[1] - d3[0]) / v1;

  const std::size_t n1 = twf.s1.k.size();
  const std::size_t n2 = twf.s2.k.size();
  const std::size_t n3 = twf.s3.k.size();
  std::vector<cd> out(n1 * n2 * n3);
  parallel_for(n1 * n2 * n3, settings.threads, [&](std::size_t at) {
    const std::size_t i = at / (n2 * n3);
    const std::size_t j = (at / n3) % n2;
    const std::size_t k = at % n3;
    const double q1 = twf.s1.k[i];
    const double p1k = twf.s2.k[j];
    const double p2k = twf.s3.k[k];
    const double s = twf.s2.detuning[j] + twf.s3.detuning[k];
    cd total{0.0, 0.0};
    std::vector<cd> h_nodes(inodes.k.size());
    for (std::size_t m = 0; m < c4.size(); ++m) {
      const double p4 = p2.k()[m];
      const double d4 = p2.detuning()[m];
      const double e = s - d4 - delta2;
      const double w = twf.s1.detuning[i] + s - d4 - delta1 - delta2;
      for (std::size_t n = 0; n < d3.size(); ++n) {
        const double quad3 = (n == 0 || n + 1 == d3.size()) ? 0.5 * dk3 : dk3;
        const double q3 = p1.k()[n];
        const double q4 = bp1.reference_wavenumber + (w - d3[n]) / v1;
        const cd pump_weight = quad3 * bwf.pump1.phi(q3) * bwf.pump1.phi(q4) / v1;
        auto h = [&](double q2) {
          cd acc{0.0, 0.0};
          for (Channel nu : kChannels)
            acc += k1_direct(dev, a, nu, q1, q2, q3, q4) *
                   k2_direct(dev, nu, b, c, p1k, p2k, q2, p4);
          return acc;
        };
        for (std::size_t r = 0; r < h_nodes.size(); ++r) h_nodes[r] = h(inodes.k[r]);
        total += c4[m] * pump_weight * resolvent_integral(inodes, eps, e, h_nodes, h);
      }
    }
    out[at] = pref * total;
  });
  return out;
}

}  // namespace tripletsim
