#include "confinv/conformal.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "confinv/error.hpp"
#include "confinv/jet.hpp"

namespace confinv {

namespace {

Eigen::VectorXd to_vector(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw InputError(std::string(what) + " must be a nonempty array");
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError(std::string(what) + " must contain numbers");
    v[long(i)] = j[i].get<double>();
  }
  return v;
}

}  // namespace

Eigen::VectorXd MobiusMap::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = x;
  for (const MobiusElement& e : elements) {
    switch (e.kind) {
      case MobiusElement::Kind::Translation:
        y += e.v;
        break;
      case MobiusElement::Kind::Rotation:
        y = e.Q * y;
        break;
      case MobiusElement::Kind::Dilation:
        y *= e.lambda;
        break;
      case MobiusElement::Kind::Inversion: {
        const Eigen::VectorXd d = y - e.v;
        const double d2 = d.squaredNorm();
        if (d2 < 1e-300) throw NumericError("inversion applied at its center");
        y = e.v + (e.lambda * e.lambda / d2) * d;
        break;
      }
    }
  }
  return y;
}

MobiusMap parse_mobius_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw InputError(std::string("invalid Mobius JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("elements")) j = j["elements"];
  if (!j.is_array()) throw InputError("Mobius map must be a JSON array of elements");
  MobiusMap map;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("type"))
      throw InputError("each Mobius element needs a \"type\"");
    const std::string type = item["type"].get<std::string>();
    MobiusElement e;
    if (type == "translation") {
      e.kind = MobiusElement::Kind::Translation;
      if (!item.contains("v")) throw InputError("translation needs \"v\"");
      e.v = to_vector(item["v"], "translation vector");
    } else if (type == "rotation") {
      e.kind = MobiusElement::Kind::Rotation;
      if (!item.contains("matrix")) throw InputError("rotation needs \"matrix\"");
      const auto& rows = item["matrix"];
      if (!rows.is_array() || rows.empty()) throw InputError("rotation matrix must be an array of rows");
      const long n = long(rows.size());
      e.Q.resize(n, n);
      for (long r = 0; r < n; ++r) {
        const Eigen::VectorXd row = to_vector(rows[size_t(r)], "rotation matrix row");
        if (row.size() != n) throw InputError("rotation matrix must be square");
        e.Q.row(r) = row;
      }
      if ((e.Q.transpose() * e.Q - Eigen::MatrixXd::Identity(n, n)).norm() > 1e-9)
        throw InputError("rotation matrix is not orthogonal");
    } else if (type == "dilation") {
      e.kind = MobiusElement::Kind::Dilation;
      if (!item.contains("lambda")) throw InputError("dilation needs \"lambda\"");
      e.lambda = item["lambda"].get<double>();
      if (!(e.lambda > 0)) throw InputError("dilation factor must be positive");
    } else if (type == "inversion") {
      e.kind = MobiusElement::Kind::Inversion;
      if (!item.contains("center") || !item.contains("radius"))
        throw InputError("inversion needs \"center\" and \"radius\"");
      e.v = to_vector(item["center"], "inversion center");
      e.lambda = item["radius"].get<double>();
      if (!(e.lambda > 0)) throw InputError("inversion radius must be positive");
    } else {
      throw InputError("unknown Mobius element type \"" + type + "\"");
    }
    map.elements.push_back(std::move(e));
  }
  // infer and cross-check the dimension
  for (const MobiusElement& e : map.elements) {
    int d = 0;
    if (e.kind == MobiusElement::Kind::Translation || e.kind == MobiusElement::Kind::Inversion)
      d = int(e.v.size());
    else if (e.kind == MobiusElement::Kind::Rotation)
      d = int(e.Q.rows());
    if (d == 0) continue;
    if (map.n == 0) map.n = d;
    if (map.n != d) throw InputError("Mobius elements disagree on the ambient dimension");
  }
  return map;
}

MobiusMap load_mobius_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open Mobius file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_mobius_json(ss.str());
}

Immersion apply_mobius(const Immersion& f, const MobiusMap& map) {
  if (map.n != 0 && map.n != f.n)
    throw InputError("Mobius map dimension does not match the ambient space");
  const int n = f.n;
  std::vector<Expr> comp = f.comp;
  const QuadratureGrid grid = default_grid(f);

  for (size_t step = 0; step < map.elements.size(); ++step) {
    const MobiusElement& e = map.elements[step];
    switch (e.kind) {
      case MobiusElement::Kind::Translation:
        for (int i = 0; i < n; ++i) comp[size_t(i)] = comp[size_t(i)] + e.v[i];
        break;
      case MobiusElement::Kind::Rotation: {
        std::vector<Expr> out;
        out.reserve(size_t(n));
        for (int i = 0; i < n; ++i) {
          Expr s = Expr::constant(0.0);
          bool first = true;
          for (int j = 0; j < n; ++j) {
            if (e.Q(i, j) == 0.0) continue;
            Expr t = Expr::constant(e.Q(i, j)) * comp[size_t(j)];
            s = first ? t : s + t;
            first = false;
          }
          out.push_back(s);
        }
        comp = std::move(out);
        break;
      }
      case MobiusElement::Kind::Dilation:
        for (int i = 0; i < n; ++i) comp[size_t(i)] = Expr::constant(e.lambda) * comp[size_t(i)];
        break;
      case MobiusElement::Kind::Inversion: {
        // the surface must stay clear of the center
        double min_d = std::numeric_limits<double>::infinity();
        long long min_k = 0;
        for (long long k = 0; k < grid.size(); ++k) {
          const Eigen::VectorXd u = grid.node(k);
          std::vector<double> vars(u.data(), u.data() + u.size());
          double d2 = 0.0;
          for (int i = 0; i < n; ++i) {
            const double di = comp[size_t(i)].eval(vars) - e.v[i];
            d2 += di * di;
          }
          if (d2 < min_d) {
            min_d = d2;
            min_k = k;
          }
        }
        min_d = std::sqrt(min_d);
        if (!(min_d > 1e-6)) {
          std::ostringstream os;
          os << "inversion center too close to the surface: distance " << min_d
             << " at node " << grid.node_label(min_k);
          throw InputError(os.str());
        }
        std::vector<Expr> shifted;
        shifted.reserve(size_t(n));
        for (int i = 0; i < n; ++i) shifted.push_back(comp[size_t(i)] - e.v[i]);
        Expr d2 = shifted[0] * shifted[0];
        for (int i = 1; i < n; ++i) d2 = d2 + shifted[size_t(i)] * shifted[size_t(i)];
        const double r2 = e.lambda * e.lambda;
        for (int i = 0; i < n; ++i)
          comp[size_t(i)] = Expr::constant(e.v[i]) + Expr::constant(r2) * shifted[size_t(i)] / d2;
        break;
      }
    }
  }

  Immersion out = f;
  out.comp = std::move(comp);
  out.name = f.name + "|mobius";
  return out;
}

namespace {

// phi and its euclidean gradient at an ambient point
void phi_value_grad(const Expr& phi, const Eigen::VectorXd& x, double& value,
                    Eigen::VectorXd& grad) {
  const int n = int(x.size());
  std::vector<Jet> xs;
  xs.reserve(size_t(n));
  for (int i = 0; i < n; ++i) xs.push_back(Jet::variable(n, 1, i, x[i]));
  const Jet p = phi.eval(xs);
  value = p.value();
  grad.resize(n);
  for (int i = 0; i < n; ++i) grad[i] = p.d1(i);
}

}  // namespace

HLawResidual h_transform_residual(const Immersion& f, const AmbientMetric& base,
                                  const Expr& phi, const Eigen::VectorXd& u) {
  const PointFrame F0 = frame_at(f, base, u);
  const PointFrame F1 = frame_at(f, base.deformed(phi), u);
  double ev = 0.0;
  Eigen::VectorXd grad;
  phi_value_grad(phi, F0.x, ev, grad);
  HLawResidual res;
  for (int a = 0; a < F0.codim; ++a) {
    const double s = (F1.nu.col(a).dot(F0.nu.col(a)) >= 0) ? 1.0 : -1.0;
    const double rh =
        (s * F1.hcirc[size_t(a)] - std::exp(ev) * F0.hcirc[size_t(a)]).cwiseAbs().maxCoeff();
    res.r_hcirc = std::max(res.r_hcirc, rh);
    const double dphi_nu = grad.dot(F0.nu.col(a));
    const double rH = std::abs(s * F1.H[a] - std::exp(-ev) * (F0.H[a] - dphi_nu));
    res.r_H = std::max(res.r_H, rH);
  }
  return res;
}

double I_operator(const ContractionSum& P, const Expr& phi, const Immersion& f,
                  const AmbientMetric& amb, const Eigen::VectorXd& u) {
  if (P.uniform_weight() != -f.m)
    throw InputError("conformal defect needs a sum of uniform weight -m");
  const PointFrame F0 = frame_at(f, amb, u);
  const PointFrame F1 = frame_at(f, amb.deformed(phi), u);
  std::vector<double> vars(F0.x.data(), F0.x.data() + F0.x.size());
  const double ev = phi.eval(vars);
  return std::exp(f.m * ev) * evaluate_sum(P, F1) - evaluate_sum(P, F0);
}

std::vector<PhiFamilyMember> standard_phi_family(const Immersion& f) {
  const int n = f.n;
  if (n < 2) throw InputError("phi family needs ambient dimension at least 2");
  const QuadratureGrid grid = default_grid(f);
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  Eigen::VectorXd hi = -lo;
  for (long long k = 0; k < grid.size(); ++k) {
    const Eigen::VectorXd u = grid.node(k);
    std::vector<double> vars(u.data(), u.data() + u.size());
    for (int i = 0; i < n; ++i) {
      const double xi = f.comp[size_t(i)].eval(vars);
      lo[i] = std::min(lo[i], xi);
      hi[i] = std::max(hi[i], xi);
    }
  }
  const double cap = 0.3;
  auto scale = [&](double sup) { return sup > 1e-12 ? cap / sup : cap; };

  std::vector<PhiFamilyMember> fam;
  const Expr x1 = Expr::var(0);
  const Expr x2 = Expr::var(1);
  const Expr xn = Expr::var(n - 1);

  const double m1 = std::max(std::abs(lo[0]), std::abs(hi[0]));
  fam.push_back({"linear-x1", Expr::constant(scale(m1)) * x1});

  const double mn = std::max(std::abs(lo[n - 1]), std::abs(hi[n - 1]));
  fam.push_back({"linear-xn", Expr::constant(scale(mn)) * xn});

  const double m2 = std::max(lo[1] * lo[1], hi[1] * hi[1]);
  fam.push_back({"quad-x2", Expr::constant(scale(m2)) * x2 * x2});

  const double m12 = std::max(std::abs(lo[0]), std::abs(hi[0])) *
                     std::max(std::abs(lo[1]), std::abs(hi[1]));
  fam.push_back({"cross-x1x2", Expr::constant(scale(m12)) * x1 * x2});

  // the bump peaks at the box point closest to the origin
  double q2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double c = std::min(std::max(0.0, lo[i]), hi[i]);
    q2 += c * c;
  }
  const double mb = 1.0 / (1.0 + q2);
  Expr r2 = Expr::var(0) * Expr::var(0);
  for (int i = 1; i < n; ++i) r2 = r2 + Expr::var(i) * Expr::var(i);
  fam.push_back({"bump", Expr::constant(scale(mb)) / (Expr::constant(1.0) + r2)});
  return fam;
}

InvarianceReport invariance_sweep(const ContractionSum& P, const Immersion& f,
                                  const AmbientMetric& amb, const QuadratureGrid& grid) {
  return invariance_sweep(P, f, amb, grid, standard_phi_family(f));
}

InvarianceReport invariance_sweep(const ContractionSum& P, const Immersion& f,
                                  const AmbientMetric& amb, const QuadratureGrid& grid,
                                  const std::vector<PhiFamilyMember>& family) {
  if (P.uniform_weight() != -f.m)
    throw InputError("invariance sweep needs a sum of uniform weight -m");
  const double lambdas[] = {0.25, 0.5, 1.0, 2.0};

  const long long N = grid.size();
  std::vector<double> wmeas(static_cast<size_t>(N));
  std::vector<double> Pbase(static_cast<size_t>(N));
  std::vector<Eigen::VectorXd> xs(static_cast<size_t>(N));
  double area = 0.0;
  for (long long k = 0; k < N; ++k) {
    const PointFrame F = frame_at(f, amb, grid.node(k));
    wmeas[size_t(k)] = grid.weight(k) * F.sqrt_det_g;
    Pbase[size_t(k)] = evaluate_sum(P, F);
    xs[size_t(k)] = F.x;
    area += wmeas[size_t(k)];
  }

  InvarianceReport rep;
  rep.area = area;
  rep.tol = 1e-6 * area;
  for (const PhiFamilyMember& mem : family) {
    std::vector<double> phiv(static_cast<size_t>(N));
    for (long long k = 0; k < N; ++k) {
      std::vector<double> vars(xs[size_t(k)].data(), xs[size_t(k)].data() + xs[size_t(k)].size());
      phiv[size_t(k)] = mem.phi.eval(vars);
    }
    for (double lam : lambdas) {
      const AmbientMetric amb2 = amb.deformed(Expr::constant(lam) * mem.phi);
      double integral = 0.0;
      for (long long k = 0; k < N; ++k) {
        const PointFrame F = frame_at(f, amb2, grid.node(k));
        const double defect =
            std::exp(f.m * lam * phiv[size_t(k)]) * evaluate_sum(P, F) - Pbase[size_t(k)];
        integral += wmeas[size_t(k)] * defect;
      }
      rep.rows.push_back({mem.name, lam, integral});
      rep.max_abs = std::max(rep.max_abs, std::abs(integral));
    }
  }
  if (rep.max_abs <= rep.tol) {
    rep.verdict = "invariant";
    rep.invariant = true;
  } else if (rep.max_abs > 1e-3) {
    rep.verdict = "non-invariant";
  } else {
    rep.verdict = "inconclusive";
  }
  return rep;
}

}  // namespace confinv
