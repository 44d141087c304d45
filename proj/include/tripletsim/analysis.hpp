#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "tripletsim/device.hpp"
#include "tripletsim/grid.hpp"

namespace tripletsim {

// Row-major 3-axis amplitude with per-axis quadrature weights.
struct Tensor3View {
  std::span<const cd> data;
  std::array<std::size_t, 3> shape{};
  std::array<std::span<const double>, 3> weight;

  void validate() const;
  double norm() const;  // sum w w w |psi|^2
};

Tensor3View view_of(std::span<const cd> data, const KGrid& g1, const KGrid& g2, const KGrid& g3);

// sqrt(w)-weighted mode-`axis` unfolding (axis in 1..3)
Eigen::MatrixXcd weighted_unfolding(const Tensor3View& psi, int axis);
Eigen::MatrixXcd reduced_density(const Tensor3View& psi, int axis);

struct PurityReport {
  std::array<double, 3> purity{};
  std::array<double, 3> purity_trace{};
  std::array<std::vector<double>, 3> schmidt;  // descending, sum of squares 1
  std::array<std::size_t, 3> shape{};
};

PurityReport purity(const Tensor3View& psi, bool with_trace = true);

struct RateReport {
  double sigma2 = 0.0;
  double beta2 = 0.0;
  std::array<double, 3> efficiency{};
  double efficiency_product = 0.0;
  double repetition_rate = 0.0;
  double rate = 0.0;
  std::array<double, 3> loss_db{};
  double detected_rate = 0.0;
};

RateReport triplet_rate(double sigma2, const std::array<double, 3>& efficiency,
                        double repetition_rate, const std::array<double, 3>& loss_db = {});
// efficiencies are the ac escape efficiencies of S1 (ring 1), S2 and S3 (ring 2)
RateReport triplet_rate(double sigma2, const Device& dev, double repetition_rate,
                        const std::array<double, 3>& loss_db = {});

struct ProjectionBundle {
  std::array<std::vector<double>, 3> x;
  std::vector<double> density;                    // |psi|^2 per unit x1 x2 x3
  std::array<std::vector<double>, 3> marginal;    // marginal[i] integrates out axis i
  std::array<std::array<std::size_t, 2>, 3> marginal_shape{};
  std::vector<std::uint8_t> mask;
  double threshold = 0.0;
  double max_density = 0.0;
};

ProjectionBundle projections_and_isosurface(const Tensor3View& psi,
                                            const std::array<const KGrid*, 3>& grids,
                                            double threshold);

}  // namespace tripletsim
