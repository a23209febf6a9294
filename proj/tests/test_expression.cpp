#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "confinv/error.hpp"
#include "confinv/expression.hpp"
#include "confinv/jet.hpp"

using namespace confinv;

namespace {
const std::vector<std::string> kXYZ = {"x1", "x2", "x3"};

double eval3(const Expr& e, double a, double b, double c) {
  return e.eval<double>({a, b, c});
}
}  // namespace

TEST_SUITE("expression") {

TEST_CASE("parses arithmetic with the usual precedence") {
  const Expr e = parse_expression("x1 + 2*x2^2 - x3/4", kXYZ);
  CHECK(eval3(e, 1.0, 3.0, 8.0) == doctest::Approx(1 + 18 - 2).epsilon(1e-15));

  const Expr r = parse_expression("2^3^2", kXYZ);  // right-assoc: 2^9
  CHECK(eval3(r, 0, 0, 0) == doctest::Approx(512.0).epsilon(1e-15));

  const Expr u = parse_expression("-x1^2", kXYZ);  // -(x1^2)
  CHECK(eval3(u, 3.0, 0, 0) == doctest::Approx(-9.0).epsilon(1e-15));
}

TEST_CASE("knows pi and the function set") {
  const Expr e = parse_expression("sin(pi/6) + cos(0) + sqrt(x1) + log(exp(x2)) + atan(1)*4",
                                  kXYZ);
  CHECK(eval3(e, 9.0, 1.5, 0) == doctest::Approx(0.5 + 1.0 + 3.0 + 1.5 + M_PI).epsilon(1e-14));

  const Expr p = parse_expression("pow(x1, 3) + tan(x2)", kXYZ);
  CHECK(eval3(p, 2.0, 0.4, 0) == doctest::Approx(8.0 + std::tan(0.4)).epsilon(1e-14));
}

TEST_CASE("evaluates on jets with correct derivatives") {
  const Expr e = parse_expression("0.1*x1*x2 + sin(x1)", kXYZ);
  std::vector<Jet> at = {Jet::variable(3, 2, 0, 0.7), Jet::variable(3, 2, 1, -1.2),
                         Jet::variable(3, 2, 2, 0.0)};
  const Jet r = e.eval<Jet>(at);
  CHECK(r.value() == doctest::Approx(0.1 * 0.7 * -1.2 + std::sin(0.7)).epsilon(1e-14));
  CHECK(r.d1(0) == doctest::Approx(0.1 * -1.2 + std::cos(0.7)).epsilon(1e-14));
  CHECK(r.d1(1) == doctest::Approx(0.1 * 0.7).epsilon(1e-14));
  CHECK(r.d2(0, 1) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(r.d2(0, 0) == doctest::Approx(-std::sin(0.7)).epsilon(1e-14));
}

TEST_CASE("builder interface mirrors the parser") {
  const Expr x = Expr::var(0), y = Expr::var(1);
  const Expr built = 0.5 * x * x - Expr::pow(y, 3.0) + 1.0;
  const Expr parsed = parse_expression("0.5*x1^2 - x2^3 + 1", {"x1", "x2"});
  for (double a : {-1.3, 0.2, 2.0})
    for (double b : {-0.7, 1.1})
      CHECK(built.eval<double>({a, b}) == doctest::Approx(parsed.eval<double>({a, b})).epsilon(1e-14));
}

TEST_CASE("rejects malformed input") {
  CHECK_THROWS_AS(parse_expression("x1 +", kXYZ), InputError);
  CHECK_THROWS_AS(parse_expression("(x1 + x2", kXYZ), InputError);
  CHECK_THROWS_AS(parse_expression("bogus(x1)", kXYZ), InputError);
  CHECK_THROWS_AS(parse_expression("u7", kXYZ), InputError);
  CHECK_THROWS_AS(parse_expression("", kXYZ), InputError);
}

TEST_CASE("domain errors surface as NumericError") {
  const Expr e = parse_expression("sqrt(x1)", kXYZ);
  CHECK_THROWS_AS(eval3(e, -1.0, 0, 0), NumericError);
  const Expr l = parse_expression("log(x1)", kXYZ);
  CHECK_THROWS_AS(eval3(l, 0.0, 0, 0), NumericError);
}

}  // TEST_SUITE
