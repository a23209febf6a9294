#include "confinv/immersion.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace confinv {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<std::string> chart_vars(int m) {
  std::vector<std::string> v;
  for (int i = 1; i <= m; ++i) v.push_back("u" + std::to_string(i));
  return v;
}

DomainAxis periodic_axis() { return {0.0, kTwoPi, true}; }
DomainAxis polar_axis() { return {0.0, 3.14159265358979323846264338328, false}; }

} // namespace

AmbientMetric AmbientMetric::flat_space(int n) {
  AmbientMetric a;
  a.n = n;
  a.phi = Expr::constant(0.0);
  a.flat = true;
  return a;
}

AmbientMetric AmbientMetric::conformal(int n, const Expr& phi) {
  AmbientMetric a;
  a.n = n;
  a.phi = phi;
  a.flat = phi.is_zero();
  return a;
}

AmbientMetric AmbientMetric::deformed(const Expr& psi) const {
  if (flat) return conformal(n, psi);
  return conformal(n, phi + psi);
}

Immersion sphere(int m, double r) {
  if (m < 1) throw InputError("sphere: dimension must be positive");
  if (r <= 0.0) throw InputError("sphere: radius must be positive");
  Immersion f;
  f.m = m;
  f.n = m + 1;
  // hyperspherical chart: polar angles u1..u_{m-1}, azimuth u_m
  Expr running = Expr::constant(r);
  for (int k = 0; k < m; ++k) {
    const Expr uk = Expr::var(k);
    f.comp.push_back(running * cos(uk));
    running = running * sin(uk);
    f.domain.push_back(k + 1 < m ? polar_axis() : periodic_axis());
  }
  f.comp.push_back(running);
  f.flip_normal = true;
  std::ostringstream nm;
  nm << "sphere(" << m << "," << r << ")";
  f.name = nm.str();
  return f;
}

Immersion ellipsoid(const std::vector<double>& semiaxes) {
  const int n = int(semiaxes.size());
  if (n < 3) throw InputError("ellipsoid: need at least 3 semiaxes");
  for (double a : semiaxes)
    if (a <= 0.0) throw InputError("ellipsoid: semiaxes must be positive");
  Immersion f = sphere(n - 1, 1.0);
  for (int k = 0; k < n; ++k) f.comp[size_t(k)] = f.comp[size_t(k)] * semiaxes[size_t(k)];
  std::ostringstream nm;
  nm << "ellipsoid(";
  for (int k = 0; k < n; ++k) nm << (k ? "," : "") << semiaxes[size_t(k)];
  nm << ")";
  f.name = nm.str();
  return f;
}

Immersion torus(double R, double r) {
  if (r <= 0.0 || R <= r) throw InputError("torus: need R > r > 0 (embedded)");
  Immersion f;
  f.m = 2;
  f.n = 3;
  const Expr u1 = Expr::var(0), u2 = Expr::var(1);
  const Expr ring = Expr::constant(R) + r * cos(u2);
  f.comp = {ring * cos(u1), ring * sin(u1), r * sin(u2)};
  f.domain = {periodic_axis(), periodic_axis()};
  std::ostringstream nm;
  nm << "torus(" << R << "," << r << ")";
  f.name = nm.str();
  return f;
}

Immersion clifford_torus(double r) {
  if (r <= 0.0) throw InputError("clifford_torus: radius must be positive");
  Immersion f;
  f.m = 2;
  f.n = 4;
  const double s = r / std::sqrt(2.0);
  const Expr u1 = Expr::var(0), u2 = Expr::var(1);
  f.comp = {s * cos(u1), s * sin(u1), s * cos(u2), s * sin(u2)};
  f.domain = {periodic_axis(), periodic_axis()};
  std::ostringstream nm;
  nm << "clifford_torus(" << r << ")";
  f.name = nm.str();
  return f;
}

Immersion graph(const std::string& height_expr) {
  Immersion f;
  f.m = 2;
  f.n = 3;
  f.comp = {Expr::var(0), Expr::var(1),
            parse_expression(height_expr, chart_vars(2))};
  f.domain = {{-1.0, 1.0, false}, {-1.0, 1.0, false}};
  f.name = "graph(" + height_expr + ")";
  return f;
}

Immersion scaled(const Immersion& f, double t) {
  Immersion g = f;
  for (auto& c : g.comp) c = c * t;
  std::ostringstream nm;
  nm << t << "*" << f.name;
  g.name = nm.str();
  return g;
}

Immersion load_immersion_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open surface file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("surface file " + path + ": " + e.what());
  }
  Immersion f;
  try {
    f.m = doc.at("m").get<int>();
    f.n = doc.at("n").get<int>();
    const auto comps = doc.at("components");
    if (int(comps.size()) != f.n)
      throw InputError("surface file: expected " + std::to_string(f.n) + " components");
    for (const auto& c : comps)
      f.comp.push_back(parse_expression(c.get<std::string>(), chart_vars(f.m)));
    const auto dom = doc.at("domain");
    if (int(dom.size()) != f.m)
      throw InputError("surface file: expected " + std::to_string(f.m) + " domain axes");
    for (const auto& d : dom) {
      DomainAxis ax;
      ax.lo = d.at("min").get<double>();
      ax.hi = d.at("max").get<double>();
      ax.periodic = d.value("periodic", false);
      if (!(ax.hi > ax.lo)) throw InputError("surface file: empty domain axis");
      f.domain.push_back(ax);
    }
    f.flip_normal = doc.value("flip_normal", false);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("surface file " + path + ": " + e.what());
  }
  if (f.m < 1 || f.n - f.m < 1 || f.n - f.m > 2)
    throw InputError("surface file: need codimension 1 or 2");
  f.name = path;
  return f;
}

namespace {

std::vector<double> parse_number_args(const std::string& inner, const std::string& what) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= inner.size()) {
    size_t comma = inner.find(',', pos);
    const std::string tok =
        inner.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      size_t used = 0;
      out.push_back(std::stod(tok, &used));
      while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InputError(what + ": bad numeric argument '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

} // namespace

Immersion make_surface(const std::string& spec) {
  const size_t open = spec.find('(');
  if (open == std::string::npos) return load_immersion_json(spec);
  if (spec.empty() || spec.back() != ')')
    throw InputError("surface: expected closing ')' in '" + spec + "'");
  const std::string head = spec.substr(0, open);
  const std::string inner = spec.substr(open + 1, spec.size() - open - 2);
  if (head == "sphere") {
    const auto a = parse_number_args(inner, "sphere");
    if (a.size() != 2) throw InputError("sphere takes (m, r)");
    return sphere(int(a[0]), a[1]);
  }
  if (head == "ellipsoid") return ellipsoid(parse_number_args(inner, "ellipsoid"));
  if (head == "torus") {
    const auto a = parse_number_args(inner, "torus");
    if (a.size() != 2) throw InputError("torus takes (R, r)");
    return torus(a[0], a[1]);
  }
  if (head == "clifford_torus") {
    const auto a = parse_number_args(inner, "clifford_torus");
    if (a.size() != 1) throw InputError("clifford_torus takes (r)");
    return clifford_torus(a[0]);
  }
  if (head == "graph") return graph(inner);
  throw InputError("unknown surface '" + head + "'");
}

} // namespace confinv
