#include <doctest.h>

#include <cmath>

#include "confinv/jet.hpp"

using namespace confinv;

namespace {

double f_ref(double x, double y) { return std::sin(x) * std::exp(0.3 * y) + x * x * y; }

Jet f_jet(const Jet& x, const Jet& y) { return sin(x) * exp(0.3 * y) + x * x * y; }

}  // namespace

TEST_SUITE("jet") {

TEST_CASE("first and second derivatives match central differences") {
  const double x0 = 0.7, y0 = -0.4;
  const Jet x = Jet::variable(2, 2, 0, x0);
  const Jet y = Jet::variable(2, 2, 1, y0);
  const Jet r = f_jet(x, y);

  CHECK(r.value() == doctest::Approx(f_ref(x0, y0)).epsilon(1e-14));

  const double h = 1e-5;
  const double dx = (f_ref(x0 + h, y0) - f_ref(x0 - h, y0)) / (2 * h);
  const double dy = (f_ref(x0, y0 + h) - f_ref(x0, y0 - h)) / (2 * h);
  CHECK(std::abs(r.d1(0) - dx) < 1e-8);
  CHECK(std::abs(r.d1(1) - dy) < 1e-8);

  const double h2 = 1e-4;
  const double dxx =
      (f_ref(x0 + h2, y0) - 2 * f_ref(x0, y0) + f_ref(x0 - h2, y0)) / (h2 * h2);
  const double dxy = (f_ref(x0 + h2, y0 + h2) - f_ref(x0 + h2, y0 - h2) -
                      f_ref(x0 - h2, y0 + h2) + f_ref(x0 - h2, y0 - h2)) /
                     (4 * h2 * h2);
  CHECK(std::abs(r.d2(0, 0) - dxx) < 1e-6);
  CHECK(std::abs(r.d2(0, 1) - dxy) < 1e-6);
  CHECK(r.d2(0, 1) == doctest::Approx(r.d2(1, 0)).epsilon(1e-14));
}

TEST_CASE("third derivative of sin(2u)") {
  const Jet u = Jet::variable(1, 3, 0, 0.3);
  const Jet r = sin(2.0 * u);
  CHECK(std::abs(r.d3(0, 0, 0) - (-8.0 * std::cos(0.6))) < 1e-12);
  CHECK(std::abs(r.d2(0, 0) - (-4.0 * std::sin(0.6))) < 1e-12);
}

TEST_CASE("product, quotient and chain rules") {
  const Jet x = Jet::variable(1, 2, 0, 1.3);
  const Jet a = sqrt(x);
  const Jet b = log(x);
  const Jet p = a * b;
  const double s = std::sqrt(1.3), l = std::log(1.3);
  CHECK(p.d1(0) == doctest::Approx(0.5 / s * l + s / 1.3).epsilon(1e-13));

  const Jet q = a / b;
  CHECK(q.d1(0) == doctest::Approx((0.5 / s * l - s / 1.3) / (l * l)).epsilon(1e-13));

  const Jet c = exp(sin(x));
  CHECK(c.d1(0) == doctest::Approx(std::exp(std::sin(1.3)) * std::cos(1.3)).epsilon(1e-13));
}

TEST_CASE("derivative() drops one order and shifts coefficients") {
  const Jet x = Jet::variable(2, 2, 0, 0.5);
  const Jet y = Jet::variable(2, 2, 1, -0.2);
  const Jet r = x * x * y + sin(y);
  const Jet rx = r.derivative(0);
  CHECK(rx.order() == 1);
  CHECK(rx.value() == doctest::Approx(r.d1(0)).epsilon(1e-14));
  CHECK(rx.d1(1) == doctest::Approx(r.d2(0, 1)).epsilon(1e-14));
}

TEST_CASE("truncated keeps lower coefficients intact") {
  const Jet x = Jet::variable(2, 3, 0, 0.4);
  const Jet y = Jet::variable(2, 3, 1, 0.9);
  const Jet r = exp(x * y);
  const Jet t = r.truncated(1);
  CHECK(t.order() == 1);
  CHECK(t.value() == doctest::Approx(r.value()).epsilon(1e-15));
  CHECK(t.d1(0) == doctest::Approx(r.d1(0)).epsilon(1e-15));
  CHECK(t.d1(1) == doctest::Approx(r.d1(1)).epsilon(1e-15));
}

TEST_CASE("compose1 applies an outer scalar function") {
  const Jet x = Jet::variable(1, 3, 0, 0.8);
  const Jet inner = x * x + 1.0;
  const double v = inner.value();
  const Jet viaCompose = inner.compose1(std::cos(v), -std::sin(v), -std::cos(v), std::sin(v));
  const Jet direct = cos(inner);
  for (int k = 0; k < 4; ++k)
    CHECK(viaCompose[k] == doctest::Approx(direct[k]).epsilon(1e-14));
}

}  // TEST_SUITE
