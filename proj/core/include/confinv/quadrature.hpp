#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "confinv/geometry.hpp"

namespace confinv {

// Tensor-product grid over a chart rectangle. Node k enumerates the product
// in row-major order (last dimension fastest).
struct QuadratureGrid {
  std::vector<std::vector<double>> nodes;    // per dimension
  std::vector<std::vector<double>> weights;  // per dimension
  std::vector<int> resolution;

  int dim() const { return int(resolution.size()); }
  long long size() const;
  Eigen::VectorXd node(long long k) const;
  double weight(long long k) const;
  std::string node_label(long long k) const;
};

// Gauss-Legendre nodes and weights on [lo, hi]. Exact for polynomials of
// degree <= 2n-1. Nodes are strictly interior.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n, double lo,
                                                                   double hi);

// Periodic axes get the uniform trapezoidal rule (spectral accuracy for
// smooth periodic integrands), the rest Gauss-Legendre. Requires at least
// 3 points per dimension.
QuadratureGrid build_grid(const std::vector<DomainAxis>& domain,
                          const std::vector<int>& resolution);

// 48x48 for surfaces, 16^4 for 4-manifolds.
std::vector<int> default_resolution(int m);

// Per-dimension cap of 24 for m = 4; higher requests cost more than the
// integrands here can use.
std::vector<int> clamp_resolution(int m, std::vector<int> resolution);

QuadratureGrid default_grid(const Immersion& f);

// Sum of w * integrand(frame) * sqrt(det g) over the grid, evaluated
// serially in node order. Frame failures are rethrown with the node
// location attached.
double integrate(const Immersion& f, const AmbientMetric& amb, const QuadratureGrid& grid,
                 const std::function<double(const PointFrame&)>& integrand);

double surface_area(const Immersion& f, const AmbientMetric& amb,
                    const QuadratureGrid& grid);

}  // namespace confinv
