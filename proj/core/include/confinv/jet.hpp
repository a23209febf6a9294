#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "confinv/error.hpp"

namespace confinv {

// Shared layout for truncated Taylor expansions: the graded-lex list of
// multi-indices |alpha| <= order in nvars variables, plus a product table.
// Instances are interned; Jet stores a pointer into the registry.
class JetSpace {
public:
  static constexpr int kMaxVars = 8;
  static constexpr int kMaxOrder = 3;

  static const JetSpace& get(int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  int size() const { return int(multi_.size()); }

  const std::array<std::uint8_t, kMaxVars>& multi(int pos) const { return multi_[pos]; }
  int degree(int pos) const { return degree_[pos]; }

  // position of alpha + e_var, or -1 if it leaves the truncation
  int bump(int pos, int var) const { return bump_[pos * nvars_ + var]; }

  struct ProductEntry {
    std::int32_t a, b, target;
  };
  const std::vector<ProductEntry>& products() const { return products_; }

  // alpha! for the multi-index at pos
  double factorial(int pos) const { return factorial_[pos]; }

private:
  JetSpace(int nvars, int order);

  int nvars_, order_;
  std::vector<std::array<std::uint8_t, kMaxVars>> multi_;
  std::vector<int> degree_;
  std::vector<int> bump_;
  std::vector<double> factorial_;
  std::vector<ProductEntry> products_;
};

// Truncated multivariate Taylor expansion (third order at most). Coefficients
// are Taylor coefficients, i.e. coeff[alpha] = d^alpha f / alpha!.
class Jet {
public:
  Jet() : space_(nullptr) {}
  Jet(int nvars, int order, double value = 0.0);

  static Jet constant(int nvars, int order, double value);
  static Jet variable(int nvars, int order, int var, double value);

  int nvars() const { return space_->nvars(); }
  int order() const { return space_->order(); }
  const JetSpace& space() const { return *space_; }

  double value() const { return coeff_[0]; }
  double& operator[](int pos) { return coeff_[pos]; }
  double operator[](int pos) const { return coeff_[pos]; }

  // partial derivatives (plain, not Taylor coefficients)
  double d1(int i) const;
  double d2(int i, int j) const;
  double d3(int i, int j, int k) const;

  // jet of df/dvar, one order lower
  Jet derivative(int var) const;
  // same expansion cut to a lower order (graded layout is prefix-stable)
  Jet truncated(int new_order) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator+=(double c) { coeff_[0] += c; return *this; }
  Jet& operator-=(double c) { coeff_[0] -= c; return *this; }
  Jet& operator*=(double c);

  friend Jet operator+(Jet a, const Jet& b) { a += b; return a; }
  friend Jet operator-(Jet a, const Jet& b) { a -= b; return a; }
  friend Jet operator+(Jet a, double c) { a += c; return a; }
  friend Jet operator+(double c, Jet a) { a += c; return a; }
  friend Jet operator-(Jet a, double c) { a -= c; return a; }
  friend Jet operator-(double c, const Jet& a) { Jet r = -a; r += c; return r; }
  friend Jet operator*(Jet a, double c) { a *= c; return a; }
  friend Jet operator*(double c, Jet a) { a *= c; return a; }
  friend Jet operator/(Jet a, double c) { a *= (1.0 / c); return a; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator/(double c, const Jet& b);

  // g applied to this jet, given value and first three derivatives of g
  // at this->value()
  Jet compose1(double g0, double g1, double g2, double g3) const;

private:
  const JetSpace* space_;
  std::vector<double> coeff_;
};

Jet sin(const Jet& u);
Jet cos(const Jet& u);
Jet tan(const Jet& u);
Jet exp(const Jet& u);
Jet log(const Jet& u);
Jet sqrt(const Jet& u);
Jet atan(const Jet& u);
Jet pow(const Jet& u, double p);

} // namespace confinv
