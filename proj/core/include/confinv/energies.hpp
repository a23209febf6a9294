#pragma once

#include <array>
#include <cstdint>
#include <functional>

#include "confinv/quadrature.hpp"

namespace confinv {

struct EnergyReport {
  double value = 0.0;
  std::vector<int> resolution;
  double estimated_quadrature_error = 0.0;  // |I(grid) - I(half grid)|
  double pointwise_min_integrand = 0.0;
};

// Runs the integrand on the given grid and once more at half resolution
// for the error estimate. The minimum is over integrand values at the
// fine-grid nodes, before the area weight.
EnergyReport integrate_energy(const Immersion& f, const AmbientMetric& amb,
                              const QuadratureGrid& grid,
                              const std::function<double(const PointFrame&)>& integrand);

// int (|H|^2 + ambient sectional curvature on the tangent plane) dmu, m = 2.
EnergyReport willmore(const Immersion& f, const AmbientMetric& amb,
                      const QuadratureGrid& grid);

// int (1/2 |h del|^2 + K) dmu; pointwise equal to the Willmore integrand by
// the Gauss equation, written in conformally covariant pieces.
EnergyReport conformal_willmore_energy(const Immersion& f, const AmbientMetric& amb,
                                       const QuadratureGrid& grid);

// (1/2pi) int K dmu, m = 2. Euler characteristic for closed surfaces.
double euler_from_K(const Immersion& f, const AmbientMetric& amb,
                    const QuadratureGrid& grid);

// (1/2pi) int Kperp dmu for m = 2, codim 2 in flat ambient. Euler number
// of the normal bundle.
double normal_euler_from_Kperp(const Immersion& f, const QuadratureGrid& grid);

// int det_g(h) dmu for hypersurfaces, det_g(h) = det(g^-1 h).
EnergyReport det_h_total(const Immersion& f, const QuadratureGrid& grid);

// (3 / 8 pi^2) int det_g(h) dmu: the degree of the Gauss map, m = 4, n = 5.
double gauss_degree(const Immersion& f, const QuadratureGrid& grid);

// int [det_g(h) - det_g(h del)] dmu, m = 4, n = 5. Vanishes pointwise on
// minimal hypersurfaces.
EnergyReport energy_P4(const Immersion& f, const QuadratureGrid& grid);

// int P_ab dmu with
//   P_ab = det_g(h) + 1/4 Tr(hdel^4) + (1/(4a) - 1/8)|hdel|^4
//          + (1/(4 b^{1/3})) |Tr(hdel^3)|^{4/3}
// for m = 4, n = 5, a, b > 0. The 4/3 power is taken of the absolute value.
EnergyReport energy_Pab(const Immersion& f, double alpha, double beta,
                        const QuadratureGrid& grid);

// Nonnegative remainder term Z(h del) of homogeneity m.
struct ZSpec {
  enum class Kind { PabForm, CNorm };
  Kind kind = Kind::CNorm;
  double alpha = 2.0;  // PabForm
  double beta = 6.0;   // PabForm
  double C = 0.5;      // CNorm: Z = C * |h del|^m

  static ZSpec pab_form(double alpha, double beta);
  static ZSpec c_norm(double C);
};

// int [det_g(h) + Z(h del)] dmu for even m, codim 1.
EnergyReport energy_F(const Immersion& f, const ZSpec& z, const QuadratureGrid& grid);

// Surface area of the unit k-sphere, 2 pi^{(k+1)/2} / Gamma((k+1)/2).
double sphere_area(int k);

// The m = 4 Pfaffian polynomial (|Riem|^2 - 4|Ric|^2 + s^2)/24, indices
// raised with g. Integrates to (4 pi^2 / 3) * Euler characteristic.
double pfaffian4(const Tensor4& R, const Eigen::MatrixXd& g);

// Tr(M^4) - 1/2 (Tr M^2)^2 + 4 det M for traceless symmetric 4x4 M;
// identically zero. Rejects inputs with |trace| >= 1e-10.
double quartic_traceless_residual(const Eigen::MatrixXd& M);

// Residuals of three determinant expansions for symmetric h against SPD g,
// all identically zero:
//   r1: det_g(h) vs the Tr_g(h^k) form,
//   r2: det_g(h) vs the (H, h del) form,
//   r3: det_g(h) - det_g(h del) vs its cubic truncation.
// H = 1/4 Tr_g(h), h del = h - H g.
std::array<double, 3> newton_expansion_residuals(const Eigen::MatrixXd& h,
                                                 const Eigen::MatrixXd& g);

struct CEstimate {
  double C = 0.0;
  Eigen::VectorXd eigs;  // worst-case unit-norm traceless spectrum
  double s = 0.0;        // worst-case shift
};

// Smallest C with det(hdel + s I) + C >= 0 over sampled unit-norm traceless
// spectra of size 2n and s in [-1.5, 1.5] (outside that range the
// determinant is positive). The worst samples are polished by coordinate
// descent. By homogeneity this certifies det(hdel + s I) >= -C |hdel|^{2n}.
CEstimate estimate_C(int n, long long samples, std::uint64_t seed = 42);

}  // namespace confinv
