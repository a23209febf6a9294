#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "confinv/conformal.hpp"
#include "confinv/error.hpp"
#include "confinv/geometry.hpp"
#include "confinv/immersion.hpp"
#include "confinv/quadrature.hpp"
#include "confinv/tensor_algebra.hpp"

using namespace confinv;

namespace {

Eigen::VectorXd uv(double a, double b) {
  Eigen::VectorXd u(2);
  u << a, b;
  return u;
}

const std::vector<std::string> kX3 = {"x1", "x2", "x3"};

}  // namespace

TEST_SUITE("conformal") {

TEST_CASE("Mobius elements compose in order") {
  MobiusMap map = parse_mobius_json(R"([
    {"type": "translation", "v": [1.0, 0.0, 0.0]},
    {"type": "dilation", "lambda": 2.0},
    {"type": "inversion", "center": [0.0, 0.0, 0.0], "radius": 1.0}
  ])");
  CHECK(map.n == 3);
  Eigen::VectorXd x(3);
  x << 1.0, 0.0, 0.0;
  // (1,0,0) -> (2,0,0) -> (4,0,0) -> (1/4, 0, 0)
  const Eigen::VectorXd y = map.apply(x);
  CHECK(y(0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(y.tail(2).norm() < 1e-15);

  MobiusMap rot = parse_mobius_json(R"({"elements": [
    {"type": "rotation", "matrix": [[0.0, -1.0], [1.0, 0.0]]}
  ]})");
  Eigen::VectorXd p(2);
  p << 1.0, 0.0;
  const Eigen::VectorXd q = rot.apply(p);
  CHECK(q(0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(q(1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Mobius parsing rejects bad input") {
  CHECK_THROWS_AS(parse_mobius_json(R"([{"type": "squeeze"}])"), InputError);
  CHECK_THROWS_AS(parse_mobius_json(R"([{"type": "dilation", "lambda": -1.0}])"), InputError);
  CHECK_THROWS_AS(parse_mobius_json(R"([{"type": "inversion", "center": [0,0], "radius": 0.0}])"),
                  InputError);
  CHECK_THROWS_AS(parse_mobius_json(R"([{"type": "rotation", "matrix": [[1.0, 0.5], [0.0, 1.0]]}])"),
                  InputError);
  CHECK_THROWS_AS(parse_mobius_json(R"([
    {"type": "translation", "v": [1.0, 0.0]},
    {"type": "translation", "v": [1.0, 0.0, 0.0]}
  ])"),
                  InputError);
  CHECK_THROWS_AS(parse_mobius_json("not json"), InputError);
}

TEST_CASE("inversion of a sphere is a sphere") {
  const Immersion big = sphere(2, 2.0);
  const MobiusMap inv = parse_mobius_json(
      R"([{"type": "inversion", "center": [0.0, 0.0, 0.0], "radius": 1.0}])");
  const Immersion small = apply_mobius(big, inv);
  const AmbientMetric flat3 = AmbientMetric::flat_space(3);
  for (double t : {0.3, 0.6}) {
    const PointFrame f = frame_at(small, flat3, uv(M_PI * t, 0.8));
    CHECK(f.x.norm() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f.norm_H2() == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(f.K() == doctest::Approx(4.0).epsilon(1e-10));
  }
}

TEST_CASE("inversion centered on the surface is rejected") {
  const Immersion f = torus(2.0, 1.0);
  const MobiusMap bad = parse_mobius_json(
      R"([{"type": "inversion", "center": [3.0, 0.0, 0.0], "radius": 1.0}])");
  try {
    apply_mobius(f, bad);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("inversion") != std::string::npos);
    CHECK(msg.find("u1") != std::string::npos);
  }
}

TEST_CASE("second fundamental form follows the rescaling law") {
  const AmbientMetric flat3 = AmbientMetric::flat_space(3);
  const Expr phi = parse_expression("0.2*x1 - 0.1*x2*x3 + 0.05*x3^2", kX3);
  const Immersion f = ellipsoid({1.0, 1.3, 0.8});
  for (double t : {0.4, 1.0, 2.2}) {
    const HLawResidual r = h_transform_residual(f, flat3, phi, uv(t, 2.0 * t));
    CHECK(r.r_hcirc < 1e-10);
    CHECK(r.r_H < 1e-10);
  }

  // also from an already curved background
  const AmbientMetric conf3 = AmbientMetric::conformal(3, parse_expression("0.1*x1", kX3));
  const HLawResidual r = h_transform_residual(sphere(2, 1.0), conf3, phi, uv(1.2, 0.7));
  CHECK(r.r_hcirc < 1e-10);
  CHECK(r.r_H < 1e-10);
}

TEST_CASE("deforming twice equals deforming by the sum") {
  const Expr p1 = parse_expression("0.1*x1*x2", kX3);
  const Expr p2 = parse_expression("-0.07*x3 + 0.02*x1^2", kX3);
  const AmbientMetric once = AmbientMetric::flat_space(3).deformed(p1 + p2);
  const AmbientMetric twice = AmbientMetric::flat_space(3).deformed(p1).deformed(p2);
  const Immersion f = ellipsoid({1.0, 1.2, 0.9});
  const Eigen::VectorXd u = uv(0.8, 2.4);
  const PointFrame a = frame_at(f, once, u);
  const PointFrame b = frame_at(f, twice, u);
  CHECK((a.g - b.g).norm() < 1e-10);
  CHECK((a.h[0] - b.h[0]).norm() < 1e-10);
  CHECK(a.H[0] == doctest::Approx(b.H[0]).epsilon(1e-10));
  CHECK(a.phi == doctest::Approx(b.phi).epsilon(1e-12));
  double worst = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          worst = std::max(worst, std::abs(a.R(i, j, k, l) - b.R(i, j, k, l)));
  CHECK(worst < 1e-10);
}

TEST_CASE("pointwise defect vanishes for homotheties") {
  const Immersion f = torus(2.0, 1.0);
  const AmbientMetric flat3 = AmbientMetric::flat_space(3);
  const Expr c = Expr::constant(0.37);
  for (const char* name : {"K", "hcirc2", "conformal_willmore"}) {
    const double I = I_operator(named_sum(name, 2), c, f, flat3, uv(0.6, 1.4));
    CHECK(std::abs(I) < 1e-12);
  }
}

TEST_CASE("traceless norm is pointwise invariant, K is not") {
  const Immersion f = ellipsoid({1.0, 1.4, 0.7});
  const AmbientMetric flat3 = AmbientMetric::flat_space(3);
  const Expr phi = parse_expression("0.2*x1 + 0.1*x2*x3", kX3);
  double worst_h = 0.0, worst_K = 0.0;
  for (double t : {0.3, 0.9, 1.5, 2.1}) {
    worst_h = std::max(worst_h,
                       std::abs(I_operator(named_sum("hcirc2", 2), phi, f, flat3, uv(t, 2 * t))));
    worst_K = std::max(worst_K,
                       std::abs(I_operator(named_sum("K", 2), phi, f, flat3, uv(t, 2 * t))));
  }
  CHECK(worst_h < 1e-8);
  CHECK(worst_K > 1e-4);  // K only integrates to an invariant
}

TEST_CASE("defect requires the matching homogeneity") {
  const ContractionSum wrong = parse_sum("g-1(a,b) Hg(a,b)");  // weight -1
  CHECK_THROWS_AS(I_operator(wrong, Expr::constant(0.1), torus(2.0, 1.0),
                             AmbientMetric::flat_space(3), uv(0.5, 0.5)),
                  InputError);
}

TEST_CASE("deformation family is bounded and diverse") {
  const auto family = standard_phi_family(torus(2.0, 1.0));
  CHECK(family.size() == 5);
  std::vector<std::string> names;
  for (const auto& mem : family) names.push_back(mem.name);
  std::sort(names.begin(), names.end());
  CHECK(std::adjacent_find(names.begin(), names.end()) == names.end());

  const QuadratureGrid grid = default_grid(torus(2.0, 1.0));
  const Immersion f = torus(2.0, 1.0);
  for (const auto& mem : family) {
    double sup = 0.0;
    for (long long k = 0; k < grid.size(); ++k) {
      std::vector<double> x(3);
      const Eigen::VectorXd u = grid.node(k);
      for (int c = 0; c < 3; ++c) x[size_t(c)] = f.comp[size_t(c)].eval<double>({u(0), u(1)});
      sup = std::max(sup, std::abs(mem.phi.eval<double>(x)));
    }
    CHECK(sup <= 0.3 + 1e-9);
    CHECK(sup > 1e-4);  // nonzero on the surface
  }
}

TEST_CASE("integrated defect sweeps reach the documented verdicts") {
  const AmbientMetric flat3 = AmbientMetric::flat_space(3);
  const AmbientMetric flat4 = AmbientMetric::flat_space(4);
  const QuadratureGrid tg = build_grid(torus(2.0, 1.0).domain, {24, 24});

  const InvarianceReport kRep = invariance_sweep(named_sum("K", 2), torus(2.0, 1.0), flat3, tg);
  CHECK(kRep.verdict == "invariant");
  CHECK(kRep.invariant);
  CHECK(kRep.rows.size() == 20);  // 5 deformations x 4 amplitudes
  CHECK(kRep.max_abs <= kRep.tol);
  CHECK(kRep.area == doctest::Approx(8 * M_PI * M_PI).epsilon(1e-10));

  const InvarianceReport h2Rep = invariance_sweep(named_sum("H2", 2), torus(2.0, 1.0), flat3, tg);
  CHECK(h2Rep.verdict == "non-invariant");
  CHECK_FALSE(h2Rep.invariant);
  CHECK(h2Rep.max_abs > 1e-3);

  const QuadratureGrid cg = build_grid(clifford_torus(1.0).domain, {24, 24});
  const InvarianceReport cRep =
      invariance_sweep(named_sum("hcirc2", 2), clifford_torus(1.0), flat4, cg);
  CHECK(cRep.verdict == "invariant");

  // explicit family override
  const std::vector<PhiFamilyMember> fam = {{"phi", parse_expression("0.1*x1*x2", kX3)}};
  const InvarianceReport oRep =
      invariance_sweep(named_sum("conformal_willmore", 2), torus(2.0, 1.0), flat3, tg, fam);
  CHECK(oRep.verdict == "invariant");
  CHECK(oRep.rows.size() == 4);
  for (const auto& row : oRep.rows) CHECK(row.phi_name == "phi");
}

}  // TEST_SUITE
