#include "confinv/jet.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace confinv {

namespace {

void gen_multis(int nvars, int order, int var, int remaining,
                std::array<std::uint8_t, JetSpace::kMaxVars>& cur, int deg,
                std::vector<std::array<std::uint8_t, JetSpace::kMaxVars>>& out,
                std::vector<int>& degs) {
  if (var == nvars) {
    out.push_back(cur);
    degs.push_back(deg);
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    cur[var] = std::uint8_t(k);
    gen_multis(nvars, order, var + 1, remaining - k, cur, deg + k, out, degs);
  }
  cur[var] = 0;
}

} // namespace

JetSpace::JetSpace(int nvars, int order) : nvars_(nvars), order_(order) {
  std::array<std::uint8_t, kMaxVars> cur{};
  std::vector<std::array<std::uint8_t, kMaxVars>> multis;
  std::vector<int> degs;
  gen_multis(nvars, order, 0, order, cur, 0, multis, degs);

  // graded lex: sort by (degree, multi-index) so position 0 is the value
  std::vector<int> perm(multis.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = int(i);
  std::sort(perm.begin(), perm.end(), [&](int a, int b) {
    if (degs[a] != degs[b]) return degs[a] < degs[b];
    return multis[a] < multis[b];
  });
  multi_.resize(multis.size());
  degree_.resize(multis.size());
  for (size_t i = 0; i < perm.size(); ++i) {
    multi_[i] = multis[perm[i]];
    degree_[i] = degs[perm[i]];
  }

  std::map<std::array<std::uint8_t, kMaxVars>, int> pos_of;
  for (size_t i = 0; i < multi_.size(); ++i) pos_of[multi_[i]] = int(i);

  bump_.assign(multi_.size() * nvars, -1);
  for (size_t i = 0; i < multi_.size(); ++i) {
    for (int v = 0; v < nvars; ++v) {
      if (degree_[i] + 1 > order) continue;
      auto m = multi_[i];
      m[v] += 1;
      bump_[i * nvars + v] = pos_of.at(m);
    }
  }

  factorial_.resize(multi_.size());
  for (size_t i = 0; i < multi_.size(); ++i) {
    double f = 1.0;
    for (int v = 0; v < nvars; ++v)
      for (int k = 2; k <= multi_[i][v]; ++k) f *= k;
    factorial_[i] = f;
  }

  for (size_t a = 0; a < multi_.size(); ++a) {
    for (size_t b = 0; b < multi_.size(); ++b) {
      if (degree_[a] + degree_[b] > order) continue;
      auto m = multi_[a];
      for (int v = 0; v < nvars; ++v) m[v] = std::uint8_t(m[v] + multi_[b][v]);
      products_.push_back({std::int32_t(a), std::int32_t(b), std::int32_t(pos_of.at(m))});
    }
  }
}

const JetSpace& JetSpace::get(int nvars, int order) {
  if (nvars < 1 || nvars > kMaxVars || order < 0 || order > kMaxOrder)
    throw InputError("jet space out of range: nvars=" + std::to_string(nvars) +
                     " order=" + std::to_string(order));
  static std::mutex mu;
  static std::map<std::pair<int, int>, const JetSpace*> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(nvars, order);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, new JetSpace(nvars, order)).first;
  return *it->second;
}

Jet::Jet(int nvars, int order, double value)
    : space_(&JetSpace::get(nvars, order)), coeff_(space_->size(), 0.0) {
  coeff_[0] = value;
}

Jet Jet::constant(int nvars, int order, double value) { return Jet(nvars, order, value); }

Jet Jet::variable(int nvars, int order, int var, double value) {
  Jet j(nvars, order, value);
  if (order >= 1) {
    const int pos = j.space_->bump(0, var);
    j.coeff_[pos] = 1.0;
  }
  return j;
}

double Jet::d1(int i) const {
  const int pos = space_->bump(0, i);
  return pos < 0 ? 0.0 : coeff_[pos];
}

double Jet::d2(int i, int j) const {
  int pos = space_->bump(0, i);
  if (pos < 0) return 0.0;
  pos = space_->bump(pos, j);
  if (pos < 0) return 0.0;
  return coeff_[pos] * space_->factorial(pos);
}

double Jet::d3(int i, int j, int k) const {
  int pos = space_->bump(0, i);
  if (pos >= 0) pos = space_->bump(pos, j);
  if (pos >= 0) pos = space_->bump(pos, k);
  if (pos < 0) return 0.0;
  return coeff_[pos] * space_->factorial(pos);
}

Jet Jet::derivative(int var) const {
  Jet r(nvars(), order() > 0 ? order() - 1 : 0, 0.0);
  const JetSpace& rs = r.space();
  // Taylor coeff of d/dvar: (alpha_var + 1) * coeff[alpha + e_var]
  for (int p = 0; p < rs.size(); ++p) {
    auto m = rs.multi(p);
    m[var] += 1;
    // locate m in this space by walking bumps from 0
    int pos = 0;
    for (int v = 0; v < nvars() && pos >= 0; ++v)
      for (int k = 0; k < m[v] && pos >= 0; ++k) pos = space_->bump(pos, v);
    if (pos >= 0) r.coeff_[p] = coeff_[pos] * double(rs.multi(p)[var] + 1);
  }
  return r;
}

Jet Jet::truncated(int new_order) const {
  if (new_order >= order()) return *this;
  if (new_order < 0) throw InputError("jet order must be nonnegative");
  Jet r(nvars(), new_order, 0.0);
  for (int p = 0; p < r.space().size(); ++p) r.coeff_[size_t(p)] = coeff_[size_t(p)];
  return r;
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (auto& c : r.coeff_) c = -c;
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  for (size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += o.coeff_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  for (size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= o.coeff_[i];
  return *this;
}

Jet& Jet::operator*=(double c) {
  for (auto& x : coeff_) x *= c;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r(a.nvars(), a.order(), 0.0);
  for (const auto& e : a.space_->products())
    r.coeff_[e.target] += a.coeff_[e.a] * b.coeff_[e.b];
  return r;
}

Jet Jet::compose1(double g0, double g1, double g2, double g3) const {
  Jet w = *this;
  w.coeff_[0] = 0.0;
  // Horner in the nilpotent part; exact at truncation order 3
  Jet r = w * (g3 / 6.0);
  r += g2 / 2.0;
  r = r * w;
  r += g1;
  r = r * w;
  r += g0;
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  const double v = b.value();
  if (v == 0.0) throw NumericError("jet division by zero value");
  const Jet binv = b.compose1(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v),
                              -6.0 / (v * v * v * v));
  return a * binv;
}

Jet operator/(double c, const Jet& b) {
  const double v = b.value();
  if (v == 0.0) throw NumericError("jet division by zero value");
  Jet binv = b.compose1(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v),
                        -6.0 / (v * v * v * v));
  binv *= c;
  return binv;
}

Jet sin(const Jet& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  return u.compose1(s, c, -s, -c);
}

Jet cos(const Jet& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  return u.compose1(c, -s, -c, s);
}

Jet tan(const Jet& u) {
  const double t = std::tan(u.value());
  const double s2 = 1.0 + t * t;
  return u.compose1(t, s2, 2.0 * t * s2, s2 * (2.0 * s2 + 4.0 * t * t));
}

Jet exp(const Jet& u) {
  const double e = std::exp(u.value());
  return u.compose1(e, e, e, e);
}

Jet log(const Jet& u) {
  const double v = u.value();
  if (v <= 0.0) throw NumericError("log of non-positive jet value");
  return u.compose1(std::log(v), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
}

Jet sqrt(const Jet& u) {
  const double v = u.value();
  if (v <= 0.0) throw NumericError("sqrt of non-positive jet value");
  const double s = std::sqrt(v);
  return u.compose1(s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v));
}

Jet atan(const Jet& u) {
  const double v = u.value();
  const double d = 1.0 + v * v;
  return u.compose1(std::atan(v), 1.0 / d, -2.0 * v / (d * d),
                    (6.0 * v * v - 2.0) / (d * d * d));
}

Jet pow(const Jet& u, double p) {
  const double rp = std::round(p);
  if (rp == p && std::abs(p) <= 16.0) {
    int e = int(std::abs(rp));
    Jet acc = Jet::constant(u.nvars(), u.order(), 1.0);
    for (int k = 0; k < e; ++k) acc = acc * u;
    if (rp < 0) return 1.0 / acc;
    return acc;
  }
  const double v = u.value();
  if (v <= 0.0) throw NumericError("pow with non-integer exponent needs positive base");
  const double f = std::pow(v, p);
  return u.compose1(f, p * f / v, p * (p - 1.0) * f / (v * v),
                    p * (p - 1.0) * (p - 2.0) * f / (v * v * v));
}

} // namespace confinv
