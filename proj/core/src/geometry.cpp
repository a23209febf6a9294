#include "confinv/geometry.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace confinv {

namespace {

std::vector<Jet> eval_components(const Immersion& f, const Eigen::VectorXd& u, int order) {
  if (int(u.size()) != f.m) throw InputError("chart point has wrong dimension");
  std::vector<Jet> vars;
  vars.reserve(size_t(f.m));
  for (int i = 0; i < f.m; ++i) vars.push_back(Jet::variable(f.m, order, i, u[i]));
  std::vector<Jet> out;
  out.reserve(size_t(f.n));
  for (int k = 0; k < f.n; ++k) out.push_back(f.comp[size_t(k)].eval<Jet>(vars));
  return out;
}

struct PhiData {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

PhiData phi_at(const AmbientMetric& amb, const Eigen::VectorXd& x) {
  PhiData p;
  p.grad = Eigen::VectorXd::Zero(amb.n);
  p.hess = Eigen::MatrixXd::Zero(amb.n, amb.n);
  if (amb.flat) return p;
  std::vector<Jet> vars;
  vars.reserve(size_t(amb.n));
  for (int i = 0; i < amb.n; ++i) vars.push_back(Jet::variable(amb.n, 2, i, x[i]));
  const Jet j = amb.phi.eval<Jet>(vars);
  p.value = j.value();
  for (int i = 0; i < amb.n; ++i) {
    p.grad[i] = j.d1(i);
    for (int k = 0; k <= i; ++k) {
      const double v = j.d2(i, k);
      p.hess(i, k) = v;
      p.hess(k, i) = v;
    }
  }
  return p;
}

} // namespace

double conformal_ambient_curvature(const Eigen::VectorXd& V1, const Eigen::VectorXd& V2,
                                   const Eigen::VectorXd& V3, const Eigen::VectorXd& V4,
                                   double phi, const Eigen::VectorXd& grad,
                                   const Eigen::MatrixXd& hess) {
  const double g14 = V1.dot(V4), g23 = V2.dot(V3), g13 = V1.dot(V3), g24 = V2.dot(V4);
  const double p1 = grad.dot(V1), p2 = grad.dot(V2), p3 = grad.dot(V3), p4 = grad.dot(V4);
  const double H14 = V1.dot(hess * V4), H23 = V2.dot(hess * V3);
  const double H13 = V1.dot(hess * V3), H24 = V2.dot(hess * V4);
  const double gp2 = grad.squaredNorm();
  const double val = H14 * g23 + H23 * g14 - H13 * g24 - H24 * g13
                   + p1 * p3 * g24 + p2 * p4 * g13 - p1 * p4 * g23 - p2 * p3 * g14
                   + gp2 * (g14 * g23 - g13 * g24);
  return std::exp(2.0 * phi) * val;
}

PointFrame frame_at(const Immersion& f, const AmbientMetric& amb, const Eigen::VectorXd& u) {
  if (f.n != amb.n) throw InputError("immersion and ambient metric dimensions differ");
  const int m = f.m, n = f.n, codim = n - m;
  if (codim < 1 || codim > 2) throw InputError("codimension must be 1 or 2");

  const std::vector<Jet> jets = eval_components(f, u, 2);

  PointFrame F;
  F.m = m;
  F.n = n;
  F.codim = codim;
  F.x = Eigen::VectorXd(n);
  F.X = Eigen::MatrixXd(n, m);
  std::vector<Eigen::VectorXd> d2f(size_t(m * m), Eigen::VectorXd(n));
  for (int k = 0; k < n; ++k) {
    F.x[k] = jets[size_t(k)].value();
    for (int i = 0; i < m; ++i) {
      F.X(k, i) = jets[size_t(k)].d1(i);
      for (int j = 0; j < m; ++j) d2f[size_t(i * m + j)][k] = jets[size_t(k)].d2(i, j);
    }
  }

  {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(F.X);
    if (svd.singularValues()(m - 1) <= 1e-8) {
      std::ostringstream os;
      os << "rank-deficient differential at chart point (" << u.transpose() << ")";
      throw NumericError(os.str());
    }
  }

  const PhiData P = phi_at(amb, F.x);
  F.phi = P.value;
  const double e2p = std::exp(2.0 * P.value);
  const double ep = std::exp(P.value);

  F.g = e2p * (F.X.transpose() * F.X);
  F.ginv = F.g.inverse();
  F.sqrt_det_g = std::sqrt(F.g.determinant());

  // euclidean-orthonormal basis of the tangent span
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(F.X);
  const Eigen::MatrixXd Q =
      qr.householderQ() * Eigen::MatrixXd::Identity(n, m);

  // normal frame: seed with the coordinate vector of largest rejection,
  // ties to the smaller index; euclidean Gram-Schmidt equals the
  // conformal-metric one up to the e^{-phi} normalization
  std::vector<Eigen::VectorXd> W;
  for (int a = 0; a < codim; ++a) {
    int best = -1;
    double best_norm = 0.0;
    Eigen::VectorXd best_r;
    for (int k = 0; k < n; ++k) {
      Eigen::VectorXd r = Eigen::VectorXd::Unit(n, k);
      r -= Q * (Q.transpose() * r);
      for (const auto& w : W) r -= w.dot(r) * w;
      const double nr = r.norm();
      if (nr > best_norm + 1e-12) {
        best = k;
        best_norm = nr;
        best_r = r;
      }
    }
    if (best < 0 || best_norm <= 1e-8) {
      std::ostringstream os;
      os << "degenerate normal complement at chart point (" << u.transpose() << ")";
      throw NumericError(os.str());
    }
    W.push_back(best_r / best_norm);
  }

  // orientation: (X_1..X_m, W_1..W_codim) positively oriented; fix the last
  // normal's sign
  {
    Eigen::MatrixXd M(n, n);
    M.leftCols(m) = F.X;
    for (int a = 0; a < codim; ++a) M.col(m + a) = W[size_t(a)];
    if (M.determinant() < 0.0) W.back() = -W.back();
  }
  if (f.flip_normal)
    for (auto& w : W) w = -w;

  F.nu = Eigen::MatrixXd(n, codim);
  for (int a = 0; a < codim; ++a) F.nu.col(a) = W[size_t(a)] / ep;

  // second fundamental form: the ambient covariant second derivative
  // D_ij = d2f_ij + X_i (grad.X_j) + X_j (grad.X_i) - (X_i.X_j) grad
  // paired with the unit normals under the ambient metric
  F.h.assign(size_t(codim), Eigen::MatrixXd(m, m));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= i; ++j) {
      Eigen::VectorXd D = d2f[size_t(i * m + j)];
      if (!amb.flat) {
        const double gi = P.grad.dot(F.X.col(i));
        const double gj = P.grad.dot(F.X.col(j));
        D += F.X.col(i) * gj + F.X.col(j) * gi - (F.X.col(i).dot(F.X.col(j))) * P.grad;
      }
      for (int a = 0; a < codim; ++a) {
        const double v = ep * D.dot(W[size_t(a)]);
        F.h[size_t(a)](i, j) = v;
        F.h[size_t(a)](j, i) = v;
      }
    }
  }

  F.H = Eigen::VectorXd(codim);
  for (int a = 0; a < codim; ++a) {
    F.H[a] = (F.ginv * F.h[size_t(a)]).trace() / double(m);
    F.hcirc.push_back(F.h[size_t(a)] - F.H[a] * F.g);
  }

  if (!amb.flat) {
    F.Rbar.resize(m, m, m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l)
            F.Rbar(i, j, k, l) = conformal_ambient_curvature(
                F.X.col(i), F.X.col(j), F.X.col(k), F.X.col(l), P.value, P.grad, P.hess);
  }

  F.R.resize(m, m, m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double v = amb.flat ? 0.0 : F.Rbar(i, j, k, l);
          for (int a = 0; a < codim; ++a)
            v += F.h[size_t(a)](i, k) * F.h[size_t(a)](j, l) -
                 F.h[size_t(a)](i, l) * F.h[size_t(a)](j, k);
          F.R(i, j, k, l) = v;
        }

  if (codim == 2) {
    F.Rperp.resize(m, m, 2, 2);
    const Eigen::MatrixXd C01 =
        F.h[0] * F.ginv * F.h[1] - F.h[1] * F.ginv * F.h[0];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            double v = 0.0;
            if (!amb.flat)
              v = conformal_ambient_curvature(F.X.col(i), F.X.col(j), F.nu.col(a),
                                              F.nu.col(b), P.value, P.grad, P.hess);
            const double sign = (a == b) ? 0.0 : (a < b ? 1.0 : -1.0);
            F.Rperp(i, j, a, b) = v - sign * C01(i, j);
          }
  }

  return F;
}

namespace {

using JetMatrix = std::vector<std::vector<Jet>>;

JetMatrix invert_jet_matrix(const JetMatrix& A0) {
  const int d = int(A0.size());
  JetMatrix A = A0;
  JetMatrix I;
  I.assign(size_t(d), std::vector<Jet>(size_t(d)));
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      I[size_t(r)][size_t(c)] = A0[0][0] * 0.0;
      if (r == c) I[size_t(r)][size_t(c)] += 1.0;
    }
  for (int c = 0; c < d; ++c) {
    int piv = c;
    for (int r = c + 1; r < d; ++r)
      if (std::abs(A[size_t(r)][size_t(c)].value()) >
          std::abs(A[size_t(piv)][size_t(c)].value()))
        piv = r;
    if (std::abs(A[size_t(piv)][size_t(c)].value()) < 1e-12)
      throw NumericError("metric is numerically singular");
    std::swap(A[size_t(c)], A[size_t(piv)]);
    std::swap(I[size_t(c)], I[size_t(piv)]);
    const Jet inv = 1.0 / A[size_t(c)][size_t(c)];
    for (int k = 0; k < d; ++k) {
      A[size_t(c)][size_t(k)] = A[size_t(c)][size_t(k)] * inv;
      I[size_t(c)][size_t(k)] = I[size_t(c)][size_t(k)] * inv;
    }
    for (int r = 0; r < d; ++r) {
      if (r == c) continue;
      const Jet factor = A[size_t(r)][size_t(c)];
      for (int k = 0; k < d; ++k) {
        A[size_t(r)][size_t(k)] -= factor * A[size_t(c)][size_t(k)];
        I[size_t(r)][size_t(k)] -= factor * I[size_t(c)][size_t(k)];
      }
    }
  }
  return I;
}

// Riemann tensor at the base point of order-2 metric jets, layout as
// PointFrame::R
Tensor4 curvature_from_metric_jets(int d, const JetMatrix& g) {
  const JetMatrix ginv = invert_jet_matrix(g);
  const int ord1 = g[0][0].order() - 1;
  // Gamma[k][i][j] = 1/2 g^{kl} (d_i g_lj + d_j g_li - d_l g_ij), order-1 jets
  std::vector<Jet> gamma(size_t(d * d * d));
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j <= i; ++j) {
        Jet s = g[0][0].derivative(0) * 0.0;
        for (int l = 0; l < d; ++l) {
          const Jet term = g[size_t(l)][size_t(j)].derivative(i) +
                           g[size_t(l)][size_t(i)].derivative(j) -
                           g[size_t(i)][size_t(j)].derivative(l);
          s += ginv[size_t(k)][size_t(l)].truncated(ord1) * term * 0.5;
        }
        gamma[size_t((k * d + i) * d + j)] = s;
        gamma[size_t((k * d + j) * d + i)] = s;
      }
  Tensor4 R;
  R.resize(d, d, d, d);
  auto G = [&](int k, int i, int j) -> const Jet& {
    return gamma[size_t((k * d + i) * d + j)];
  };
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double v = 0.0;
          for (int r = 0; r < d; ++r) {
            double t = G(r, j, l).d1(i) - G(r, i, l).d1(j);
            for (int s = 0; s < d; ++s)
              t += G(r, i, s).value() * G(s, j, l).value() -
                   G(r, j, s).value() * G(s, i, l).value();
            v += g[size_t(k)][size_t(r)].value() * t;
          }
          R(i, j, k, l) = v;
        }
  return R;
}

} // namespace

Tensor4 intrinsic_curvature_direct(const Immersion& f, const AmbientMetric& amb,
                                   const Eigen::VectorXd& u) {
  if (f.n != amb.n) throw InputError("immersion and ambient metric dimensions differ");
  const int m = f.m;
  const std::vector<Jet> jets3 = eval_components(f, u, 3);

  Jet phi2 = Jet::constant(m, 2, 0.0);
  if (!amb.flat) {
    const std::vector<Jet> jets2 = eval_components(f, u, 2);
    phi2 = amb.phi.eval<Jet>(jets2);
  }
  const Jet conf = exp(phi2 * 2.0);

  JetMatrix g;
  g.assign(size_t(m), std::vector<Jet>(size_t(m)));
  std::vector<Jet> df(size_t(f.n * m));
  for (int k = 0; k < f.n; ++k)
    for (int i = 0; i < m; ++i) df[size_t(k * m + i)] = jets3[size_t(k)].derivative(i);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= i; ++j) {
      Jet s = df[size_t(i)] * 0.0;
      for (int k = 0; k < f.n; ++k) s += df[size_t(k * m + i)] * df[size_t(k * m + j)];
      s = s * conf;
      g[size_t(i)][size_t(j)] = s;
      g[size_t(j)][size_t(i)] = s;
    }
  return curvature_from_metric_jets(m, g);
}

MetricChart MetricChart::from_entries(int d, const std::vector<std::vector<Expr>>& entries) {
  if (int(entries.size()) != d) throw InputError("metric chart: row count mismatch");
  for (const auto& row : entries)
    if (int(row.size()) != d) throw InputError("metric chart: column count mismatch");
  MetricChart c;
  c.d = d;
  c.g = entries;
  return c;
}

Tensor4 metric_chart_curvature(const MetricChart& chart, const Eigen::VectorXd& p) {
  const int d = chart.d;
  if (int(p.size()) != d) throw InputError("metric chart: point has wrong dimension");
  std::vector<Jet> vars;
  for (int i = 0; i < d; ++i) vars.push_back(Jet::variable(d, 2, i, p[i]));
  JetMatrix g;
  g.assign(size_t(d), std::vector<Jet>(size_t(d)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g[size_t(i)][size_t(j)] = chart.g[size_t(i)][size_t(j)].eval<Jet>(vars);
  return curvature_from_metric_jets(d, g);
}

double curvature_transform_residual(const MetricChart& chart, const Expr& phi,
                                    const Eigen::VectorXd& p) {
  const int d = chart.d;
  if (d < 2 || d > 3) throw InputError("transformation-law check supports 2d and 3d charts");

  MetricChart rescaled;
  rescaled.d = d;
  const Expr conf = exp(phi * 2.0);
  rescaled.g.assign(size_t(d), std::vector<Expr>(size_t(d)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      rescaled.g[size_t(i)][size_t(j)] = conf * chart.g[size_t(i)][size_t(j)];
  const Tensor4 direct = metric_chart_curvature(rescaled, p);

  const Tensor4 R = metric_chart_curvature(chart, p);

  // base metric, Christoffels, phi derivatives at p
  std::vector<Jet> vars;
  for (int i = 0; i < d; ++i) vars.push_back(Jet::variable(d, 2, i, p[i]));
  Eigen::MatrixXd g(d, d);
  JetMatrix gjets;
  gjets.assign(size_t(d), std::vector<Jet>(size_t(d)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      gjets[size_t(i)][size_t(j)] = chart.g[size_t(i)][size_t(j)].eval<Jet>(vars);
      g(i, j) = gjets[size_t(i)][size_t(j)].value();
    }
  const Eigen::MatrixXd ginv = g.inverse();
  const Jet pj = phi.eval<Jet>(vars);
  const double phi0 = pj.value();
  Eigen::VectorXd grad(d);
  Eigen::MatrixXd hess(d, d);
  for (int i = 0; i < d; ++i) {
    grad[i] = pj.d1(i);
    for (int j = 0; j < d; ++j) hess(i, j) = pj.d2(i, j);
  }
  // covariant Hessian: subtract Gamma^k_ij phi_k
  Eigen::MatrixXd B = hess;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double corr = 0.0;
      for (int k = 0; k < d; ++k) {
        double gam = 0.0;
        for (int l = 0; l < d; ++l)
          gam += 0.5 * ginv(k, l) *
                 (gjets[size_t(l)][size_t(j)].d1(i) + gjets[size_t(l)][size_t(i)].d1(j) -
                  gjets[size_t(i)][size_t(j)].d1(l));
        corr += gam * grad[k];
      }
      B(i, j) -= corr;
    }
  const double gp2 = (ginv * grad).dot(grad);
  const double e2p = std::exp(2.0 * phi0);

  double res = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          const double law =
              e2p * (R(i, j, k, l)
                     + B(i, l) * g(j, k) + B(j, k) * g(i, l)
                     - B(i, k) * g(j, l) - B(j, l) * g(i, k)
                     + grad[i] * grad[k] * g(j, l) + grad[j] * grad[l] * g(i, k)
                     - grad[i] * grad[l] * g(j, k) - grad[j] * grad[k] * g(i, l)
                     + gp2 * (g(i, l) * g(j, k) - g(i, k) * g(j, l)));
          res = std::max(res, std::abs(direct(i, j, k, l) - law));
        }
  return res;
}

} // namespace confinv
