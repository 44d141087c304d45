#include "tripletsim/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "tripletsim/errors.hpp"

namespace tripletsim {

void Tensor3View::validate() const {
  for (int a = 0; a < 3; ++a)
    if (weight[a].size() != shape[a]) throw DomainError("weights do not match tensor shape");
  if (data.size() != shape[0] * shape[1] * shape[2])
    throw DomainError("tensor data does not match its shape");
}

double Tensor3View::norm() const {
  validate();
  std::vector<double> terms(data.size());
  for (std::size_t i = 0; i < shape[0]; ++i)
    for (std::size_t j = 0; j < shape[1]; ++j)
      for (std::size_t k = 0; k < shape[2]; ++k) {
        const std::size_t at = (i * shape[1] + j) * shape[2] + k;
        terms[at] = weight[0][i] * weight[1][j] * weight[2][k] * std::norm(data[at]);
      }
  return pairwise_sum(terms);
}

Tensor3View view_of(std::span<const cd> data, const KGrid& g1, const KGrid& g2, const KGrid& g3) {
  Tensor3View v;
  v.data = data;
  v.shape = {g1.k.size(), g2.k.size(), g3.k.size()};
  v.weight = {std::span<const double>(g1.weight), std::span<const double>(g2.weight),
              std::span<const double>(g3.weight)};
  v.validate();
  return v;
}

Eigen::MatrixXcd weighted_unfolding(const Tensor3View& psi, int axis) {
  psi.validate();
  if (axis < 1 || axis > 3) throw DomainError("axis must be 1, 2 or 3");
  const int a = axis - 1;
  const int b = (a + 1) % 3;
  const int c = (a + 2) % 3;
  const auto rows = static_cast<Eigen::Index>(psi.shape[a]);
  const auto cols = static_cast<Eigen::Index>(psi.shape[b] * psi.shape[c]);
  Eigen::MatrixXcd m(rows, cols);
  std::array<std::size_t, 3> idx{};
  for (std::size_t i = 0; i < psi.shape[a]; ++i)
    for (std::size_t j = 0; j < psi.shape[b]; ++j)
      for (std::size_t k = 0; k < psi.shape[c]; ++k) {
        idx[a] = i;
        idx[b] = j;
        idx[c] = k;
        const std::size_t at = (idx[0] * psi.shape[1] + idx[1]) * psi.shape[2] + idx[2];
        const double w = psi.weight[a][i] * psi.weight[b][j] * psi.weight[c][k];
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j * psi.shape[c] + k)) =
            std::sqrt(w) * psi.data[at];
      }
  return m;
}

Eigen::MatrixXcd reduced_density(const Tensor3View& psi, int axis) {
  const double n = psi.norm();
  if (std::abs(n - 1.0) > 1e-6)
    throw DomainError("reduced_density requires a normalized amplitude (norm " +
                      std::to_string(n) + ")");
  const Eigen::MatrixXcd m = weighted_unfolding(psi, axis);
  return m * m.adjoint();
}

PurityReport purity(const Tensor3View& psi, bool with_trace) {
  psi.validate();
  PurityReport r;
  r.shape = psi.shape;
  for (int axis = 1; axis <= 3; ++axis) {
    const Eigen::MatrixXcd m = weighted_unfolding(psi, axis);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    Eigen::VectorXd s = svd.singularValues();
    std::vector<double> sv(s.data(), s.data() + s.size());
    std::stable_sort(sv.begin(), sv.end(), std::greater<>());
    std::vector<double> s2(sv.size());
    std::vector<double> s4(sv.size());
    for (std::size_t j = 0; j < sv.size(); ++j) {
      s2[j] = sv[j] * sv[j];
      s4[j] = s2[j] * s2[j];
    }
    const double sum2 = pairwise_sum(s2);
    if (!(sum2 > 0.0)) throw DomainError("purity of a vanishing amplitude is undefined");
    r.purity[axis - 1] = pairwise_sum(s4) / (sum2 * sum2);
    const double scale = 1.0 / std::sqrt(sum2);
    for (double& x : sv) x *= scale;
    r.schmidt[axis - 1] = std::move(sv);
    if (with_trace) {
      const Eigen::MatrixXcd rho = m * m.adjoint();
      const double tr = rho.trace().real();
      r.purity_trace[axis - 1] = rho.squaredNorm() / (tr * tr);
    }
  }
  return r;
}

RateReport triplet_rate(double sigma2, const std::array<double, 3>& efficiency,
                        double repetition_rate, const std::array<double, 3>& loss_db) {
  if (!(sigma2 >= 0.0) || !(repetition_rate >= 0.0))
    throw DomainError("triplet_rate requires non-negative inputs");
  RateReport r;
  r.sigma2 = sigma2;
  r.efficiency = efficiency;
  r.efficiency_product = efficiency[0] * efficiency[1] * efficiency[2];
  r.repetition_rate = repetition_rate;
  r.rate = repetition_rate * r.efficiency_product * sigma2;
  r.loss_db = loss_db;
  double total_db = 0.0;
  for (double db : loss_db) {
    if (!(db >= 0.0)) throw DomainError("external losses must be >= 0 dB");
    total_db += db;
  }
  r.detected_rate = r.rate * std::pow(10.0, -total_db / 10.0);
  return r;
}

RateReport triplet_rate(double sigma2, const Device& dev, double repetition_rate,
                        const std::array<double, 3>& loss_db) {
  return triplet_rate(sigma2,
                      {dev.require(1, Band::S1).efficiency(Channel::ac),
                       dev.require(2, Band::S2).efficiency(Channel::ac),
                       dev.require(2, Band::S3).efficiency(Channel::ac)},
                      repetition_rate, loss_db);
}

ProjectionBundle projections_and_isosurface(const Tensor3View& psi,
                                            const std::array<const KGrid*, 3>& grids,
                                            double threshold) {
  psi.validate();
  if (!(threshold > 0.0) || threshold > 1.0) throw DomainError("threshold must lie in (0, 1]");
  ProjectionBundle b;
  b.threshold = threshold;
  std::array<double, 3> jac{};
  std::array<std::vector<double>, 3> wx;
  for (int a = 0; a < 3; ++a) {
    if (!grids[a] || grids[a]->k.size() != psi.shape[a])
      throw DomainError("grid does not match tensor axis");
    b.x[a] = grids[a]->x;
    jac[a] = grids[a]->linewidth / grids[a]->group_velocity;  // dk/dx
    wx[a].resize(psi.shape[a]);
    for (std::size_t i = 0; i < psi.shape[a]; ++i) wx[a][i] = psi.weight[a][i] / jac[a];
  }
  const std::size_t n1 = psi.shape[0];
  const std::size_t n2 = psi.shape[1];
  const std::size_t n3 = psi.shape[2];
  const double j3 = jac[0] * jac[1] * jac[2];
  b.density.resize(psi.data.size());
  for (std::size_t at = 0; at < psi.data.size(); ++at) {
    b.density[at] = std::norm(psi.data[at]) * j3;
    b.max_density = std::max(b.max_density, b.density[at]);
  }
  auto d = [&](std::size_t i, std::size_t j, std::size_t k) {
    return b.density[(i * n2 + j) * n3 + k];
  };

  b.marginal_shape = {{{n2, n3}, {n1, n3}, {n1, n2}}};
  b.marginal[0].assign(n2 * n3, 0.0);
  b.marginal[1].assign(n1 * n3, 0.0);
  b.marginal[2].assign(n1 * n2, 0.0);
  std::vector<double> col;
  col.resize(n1);
  for (std::size_t j = 0; j < n2; ++j)
    for (std::size_t k = 0; k < n3; ++k) {
      for (std::size_t i = 0; i < n1; ++i) col[i] = wx[0][i] * d(i, j, k);
      b.marginal[0][j * n3 + k] = pairwise_sum(col);
    }
  col.resize(n2);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t k = 0; k < n3; ++k) {
      for (std::size_t j = 0; j < n2; ++j) col[j] = wx[1][j] * d(i, j, k);
      b.marginal[1][i * n3 + k] = pairwise_sum(col);
    }
  col.resize(n3);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      for (std::size_t k = 0; k < n3; ++k) col[k] = wx[2][k] * d(i, j, k);
      b.marginal[2][i * n2 + j] = pairwise_sum(col);
    }

  const double level = threshold * b.max_density;
  b.mask.resize(b.density.size());
  for (std::size_t at = 0; at < b.density.size(); ++at)
    b.mask[at] = b.density[at] >= level ? 1 : 0;
  return b;
}

}  // namespace tripletsim
