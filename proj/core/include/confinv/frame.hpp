#pragma once

#include <Eigen/Dense>
#include <vector>

#include "confinv/error.hpp"

namespace confinv {

// Dense rank-4 array with per-slot dimensions.
struct Tensor4 {
  int n0 = 0, n1 = 0, n2 = 0, n3 = 0;
  std::vector<double> v;

  void resize(int a, int b, int c, int d) {
    n0 = a; n1 = b; n2 = c; n3 = d;
    v.assign(size_t(a) * b * c * d, 0.0);
  }
  bool empty() const { return v.empty(); }
  double& operator()(int i, int j, int k, int l) {
    return v[size_t(((i * n1 + j) * n2 + k)) * n3 + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return v[size_t(((i * n1 + j) * n2 + k)) * n3 + l];
  }
  Tensor4& operator*=(double c) {
    for (auto& x : v) x *= c;
    return *this;
  }
};

// Pointwise geometric data of an immersed surface, everything downstream
// evaluates against this. Second-fundamental-form components are taken in the
// orthonormal normal frame nu; normal-slot contractions are therefore plain
// delta sums. Curvature layout: R(i,j,k,l) = K (g_ik g_jl - g_il g_jk) on a
// round metric of curvature K, and the Gauss relation reads
// R = Rbar - (h_il.h_jk - h_ik.h_jl).
struct PointFrame {
  int m = 0, n = 0, codim = 0;

  Eigen::VectorXd x;  // ambient position
  Eigen::MatrixXd X;  // n x m tangent vectors, columns = df/du_i
  Eigen::MatrixXd g, ginv;
  double sqrt_det_g = 0.0;
  Eigen::MatrixXd nu;                      // n x codim, orthonormal w.r.t. ambient metric
  std::vector<Eigen::MatrixXd> h, hcirc;   // codim entries, m x m each
  Eigen::VectorXd H;                       // codim entries, H^a = (1/m) tr_g h^a

  Tensor4 R;      // intrinsic curvature, all tangent slots
  Tensor4 Rbar;   // ambient curvature restricted to tangent slots
  Tensor4 Rperp;  // normal curvature: tangent i,j then normal a,b
  double phi = 0.0;  // ambient conformal exponent at x (0 for flat)

  double norm_H2() const {
    double s = 0.0;
    for (int a = 0; a < codim; ++a) s += H[a] * H[a];
    return s;
  }
  double norm_hcirc2() const {
    double s = 0.0;
    for (int a = 0; a < codim; ++a) {
      const Eigen::MatrixXd t = ginv * hcirc[size_t(a)] * ginv;
      s += (t.array() * hcirc[size_t(a)].array()).sum();
    }
    return s;
  }

  // m = 2 scalar invariants
  double det_g() const { return g.determinant(); }
  double K() const { return R(0, 1, 0, 1) / det_g(); }
  double Kbar() const { return Rbar.empty() ? 0.0 : Rbar(0, 1, 0, 1) / det_g(); }
  double Kperp() const {
    if (codim != 2) throw NumericError("Kperp needs codimension 2");
    return Rperp(0, 1, 0, 1) / sqrt_det_g;
  }

  // induced action of a homothety gbar -> t^2 gbar on the stored components
  PointFrame rescaled(double t) const {
    PointFrame f = *this;
    f.g *= t * t;
    f.ginv *= 1.0 / (t * t);
    f.sqrt_det_g = sqrt_det_g;
    for (int k = 0; k < m; ++k) f.sqrt_det_g *= t;
    for (auto& hm : f.h) hm *= t;
    for (auto& hm : f.hcirc) hm *= t;
    f.H *= 1.0 / t;
    f.R *= t * t;
    if (!f.Rbar.empty()) f.Rbar *= t * t;
    // Rperp components in the orthonormal normal gauge are scale-free
    return f;
  }
};

} // namespace confinv
