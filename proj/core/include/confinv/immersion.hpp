#pragma once

#include <string>
#include <vector>

#include "confinv/expression.hpp"

namespace confinv {

struct DomainAxis {
  double lo = 0.0, hi = 1.0;
  bool periodic = false;

  double length() const { return hi - lo; }
};

// Parametrized surface patch: n component expressions in the chart variables
// u1..um. Closed surfaces are covered by a single chart with periodic axes
// (and Gauss-Legendre axes that keep nodes off degenerate chart edges).
struct Immersion {
  int m = 0, n = 0;
  std::vector<Expr> comp;
  std::vector<DomainAxis> domain;
  bool flip_normal = false;
  std::string name;

  int codim() const { return n - m; }
};

// Conformally flat ambient metric e^{2 phi} delta; phi is an expression in
// the ambient coordinates x1..xn (constant zero when flat).
struct AmbientMetric {
  int n = 0;
  Expr phi;
  bool flat = true;

  static AmbientMetric flat_space(int n);
  static AmbientMetric conformal(int n, const Expr& phi);
  // this metric additionally rescaled by e^{2 psi}
  AmbientMetric deformed(const Expr& psi) const;
};

// Built-in surfaces. Spheres and ellipsoids carry flip_normal so the mean
// curvature of the standard round sphere comes out +1/r.
Immersion sphere(int m, double r);
Immersion ellipsoid(const std::vector<double>& semiaxes);
Immersion torus(double R, double r);
Immersion clifford_torus(double r);
Immersion graph(const std::string& height_expr);

// f with every component scaled by t (image homothety)
Immersion scaled(const Immersion& f, double t);

// Built-in call syntax "sphere(2,1)", "torus(2,1)", "ellipsoid(1,1,1.5)",
// "clifford_torus(1)", "graph(expr)"; anything else is read as a path to a
// JSON surface document.
Immersion make_surface(const std::string& name_or_path);
Immersion load_immersion_json(const std::string& path);

} // namespace confinv
