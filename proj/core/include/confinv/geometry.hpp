#pragma once

#include <Eigen/Dense>

#include "confinv/frame.hpp"
#include "confinv/immersion.hpp"

namespace confinv {

// Full pointwise frame of the immersion at chart point u: induced metric,
// orthonormal normal frame, second fundamental form, mean curvature, its
// traceless part, ambient curvature restricted to the surface, intrinsic
// curvature (Gauss relation) and normal curvature (Ricci relation, codim 2).
// Uses order-2 jets of the components; throws NumericError on rank-deficient
// differentials or a degenerate normal complement.
PointFrame frame_at(const Immersion& f, const AmbientMetric& amb, const Eigen::VectorXd& u);

// Intrinsic curvature tensor computed from the Christoffel symbols of the
// induced metric (order-3 jets), with no reference to the second fundamental
// form; cross-check oracle for the Gauss-relation route in frame_at.
Tensor4 intrinsic_curvature_direct(const Immersion& f, const AmbientMetric& amb,
                                   const Eigen::VectorXd& u);

// Coordinate metric patch given by d x d entry expressions in x1..xd.
struct MetricChart {
  int d = 0;
  std::vector<std::vector<Expr>> g;

  static MetricChart from_entries(int d, const std::vector<std::vector<Expr>>& entries);
};

// Riemann tensor of the chart metric at p, same index layout as PointFrame::R.
Tensor4 metric_chart_curvature(const MetricChart& chart, const Eigen::VectorXd& p);

// Curvature of e^{2 phi} g computed directly from its Christoffel symbols,
// compared against the conformal-change law assembled from the curvature of
// g, the covariant Hessian of phi and |grad phi|^2. Returns the maximum
// componentwise deviation.
double curvature_transform_residual(const MetricChart& chart, const Expr& phi,
                                    const Eigen::VectorXd& p);

// Curvature value R(V1,V2,V3,V4) of the metric e^{2 phi} delta at a point,
// from the conformal-change law with flat base: hess is the plain Hessian of
// phi, grad its gradient, both at the point. Index layout matches
// PointFrame::R (slot pattern (i,j,i,j) is positive on a round sphere).
double conformal_ambient_curvature(const Eigen::VectorXd& V1, const Eigen::VectorXd& V2,
                                   const Eigen::VectorXd& V3, const Eigen::VectorXd& V4,
                                   double phi, const Eigen::VectorXd& grad,
                                   const Eigen::MatrixXd& hess);

} // namespace confinv
