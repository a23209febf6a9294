#pragma once

#include <string>
#include <vector>

#include "confinv/quadrature.hpp"
#include "confinv/tensor_algebra.hpp"

namespace confinv {

// Composition of elementary Mobius moves of flat R^n, applied left to right.
struct MobiusElement {
  enum class Kind { Translation, Rotation, Dilation, Inversion };
  Kind kind;
  Eigen::VectorXd v;       // translation vector or inversion center
  Eigen::MatrixXd Q;       // rotation matrix
  double lambda = 1.0;     // dilation factor or inversion radius
};

struct MobiusMap {
  int n = 0;
  std::vector<MobiusElement> elements;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
};

// JSON: a list (or {"elements": [...]}) of
//   {"type": "translation", "v": [...]}
//   {"type": "rotation", "matrix": [[...], ...]}
//   {"type": "dilation", "lambda": s}
//   {"type": "inversion", "center": [...], "radius": r}
MobiusMap load_mobius_json(const std::string& path);
MobiusMap parse_mobius_json(const std::string& text);

// Composes the map into the chart expressions; the domain is unchanged.
// Inversions require the surface to stay clear of the center: the minimum
// distance over the default quadrature grid must exceed 1e-6.
Immersion apply_mobius(const Immersion& f, const MobiusMap& map);

// Deviation of the second-fundamental-form data at one point from the
// conformal rescaling law, comparing the frame in `base` against the frame
// in `base` deformed by e^{2 phi}. Normals are sign-aligned first.
struct HLawResidual {
  double r_hcirc = 0.0;  // trace-free part: expect e^{phi} scaling
  double r_H = 0.0;      // mean curvature: expect e^{-phi} (H - dphi(nu))
};
HLawResidual h_transform_residual(const Immersion& f, const AmbientMetric& base,
                                  const Expr& phi, const Eigen::VectorXd& u);

// Pointwise conformal defect e^{m phi(x)} P(deformed frame) - P(base frame).
// Requires P to have uniform weight -m.
double I_operator(const ContractionSum& P, const Expr& phi, const Immersion& f,
                  const AmbientMetric& amb, const Eigen::VectorXd& u);

struct PhiFamilyMember {
  std::string name;
  Expr phi;
};

// Five conformal directions (two linear, two quadratic, one bump), each
// scaled so sup |phi| <= 0.3 over the surface's bounding box.
std::vector<PhiFamilyMember> standard_phi_family(const Immersion& f);

struct InvarianceRow {
  std::string phi_name;
  double lambda = 0.0;
  double integral = 0.0;
};

struct InvarianceReport {
  std::vector<InvarianceRow> rows;
  double max_abs = 0.0;
  double tol = 0.0;       // 1e-6 * area
  double area = 0.0;
  std::string verdict;    // "invariant", "non-invariant", "inconclusive"
  bool invariant = false;
};

// Integrates the conformal defect of P against the base measure for every
// family member and every lambda in {0.25, 0.5, 1, 2}. Declares invariance
// only when all integrals stay below 1e-6 * area; integrals above 1e-3 are
// decisive falsifications, values between are reported as inconclusive.
InvarianceReport invariance_sweep(const ContractionSum& P, const Immersion& f,
                                  const AmbientMetric& amb, const QuadratureGrid& grid);

// Same sweep over a caller-supplied family.
InvarianceReport invariance_sweep(const ContractionSum& P, const Immersion& f,
                                  const AmbientMetric& amb, const QuadratureGrid& grid,
                                  const std::vector<PhiFamilyMember>& family);

}  // namespace confinv
