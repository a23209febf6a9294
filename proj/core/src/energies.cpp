#include "confinv/energies.hpp"

#include <algorithm>
#include <cmath>

#include "confinv/error.hpp"
#include "confinv/rng.hpp"

namespace confinv {

namespace {

std::vector<int> half_resolution(const std::vector<int>& res) {
  std::vector<int> out = res;
  for (int& r : out) r = std::max(3, r / 2);
  return out;
}

void require_hypersurface(const Immersion& f, int m, const char* what) {
  if (f.m != m || f.codim() != 1) {
    std::string msg = std::string(what) + " needs a hypersurface with m = " +
                      std::to_string(m) + ", got m = " + std::to_string(f.m) +
                      ", n = " + std::to_string(f.n);
    throw InputError(msg);
  }
}

// shape operator of the single normal and its trace-free part
struct Shape {
  Eigen::MatrixXd A;
  Eigen::MatrixXd A0;
  double H;
};

Shape shape_of(const PointFrame& F) {
  Shape s;
  s.A = F.ginv * F.h[0];
  s.H = F.H[0];
  s.A0 = F.ginv * F.hcirc[0];
  return s;
}

double pab_extra(const Eigen::MatrixXd& A0, double alpha, double beta) {
  const Eigen::MatrixXd A2 = A0 * A0;
  const double p2 = A2.trace();
  const double p3 = (A2 * A0).trace();
  const double p4 = (A2 * A2).trace();
  return 0.25 * p4 + (1.0 / (4.0 * alpha) - 0.125) * p2 * p2 +
         (1.0 / (4.0 * std::cbrt(beta))) * std::pow(std::abs(p3), 4.0 / 3.0);
}

double z_value(const ZSpec& z, const Eigen::MatrixXd& A0, int m) {
  if (z.kind == ZSpec::Kind::PabForm) return pab_extra(A0, z.alpha, z.beta);
  const double p2 = (A0 * A0).trace();
  return z.C * std::pow(p2, 0.5 * m);
}

}  // namespace

EnergyReport integrate_energy(const Immersion& f, const AmbientMetric& amb,
                              const QuadratureGrid& grid,
                              const std::function<double(const PointFrame&)>& integrand) {
  EnergyReport rep;
  rep.resolution = grid.resolution;
  double total = 0.0;
  double mn = std::numeric_limits<double>::infinity();
  const long long N = grid.size();
  for (long long k = 0; k < N; ++k) {
    try {
      const PointFrame F = frame_at(f, amb, grid.node(k));
      const double val = integrand(F);
      mn = std::min(mn, val);
      total += grid.weight(k) * val * F.sqrt_det_g;
    } catch (const NumericError& e) {
      throw NumericError(std::string(e.what()) + " at node " + grid.node_label(k));
    }
  }
  rep.value = total;
  rep.pointwise_min_integrand = mn;
  const QuadratureGrid coarse = build_grid(f.domain, half_resolution(grid.resolution));
  const double coarse_val = integrate(f, amb, coarse, integrand);
  rep.estimated_quadrature_error = std::abs(total - coarse_val);
  return rep;
}

EnergyReport willmore(const Immersion& f, const AmbientMetric& amb,
                      const QuadratureGrid& grid) {
  if (f.m != 2) throw InputError("willmore energy needs m = 2");
  return integrate_energy(
      f, amb, grid, [](const PointFrame& F) { return F.norm_H2() + F.Kbar(); });
}

EnergyReport conformal_willmore_energy(const Immersion& f, const AmbientMetric& amb,
                                       const QuadratureGrid& grid) {
  if (f.m != 2) throw InputError("conformal Willmore energy needs m = 2");
  return integrate_energy(
      f, amb, grid, [](const PointFrame& F) { return 0.5 * F.norm_hcirc2() + F.K(); });
}

double euler_from_K(const Immersion& f, const AmbientMetric& amb,
                    const QuadratureGrid& grid) {
  if (f.m != 2) throw InputError("Euler characteristic from K needs m = 2");
  return integrate(f, amb, grid, [](const PointFrame& F) { return F.K(); }) /
         (2.0 * M_PI);
}

double normal_euler_from_Kperp(const Immersion& f, const QuadratureGrid& grid) {
  if (f.m != 2 || f.codim() != 2)
    throw InputError("normal Euler number needs m = 2, codim 2");
  const AmbientMetric amb = AmbientMetric::flat_space(f.n);
  return integrate(f, amb, grid, [](const PointFrame& F) { return F.Kperp(); }) /
         (2.0 * M_PI);
}

EnergyReport det_h_total(const Immersion& f, const QuadratureGrid& grid) {
  if (f.codim() != 1) throw InputError("det_g(h) energy needs a hypersurface");
  const AmbientMetric amb = AmbientMetric::flat_space(f.n);
  return integrate_energy(f, amb, grid, [](const PointFrame& F) {
    return (F.ginv * F.h[0]).determinant();
  });
}

double gauss_degree(const Immersion& f, const QuadratureGrid& grid) {
  require_hypersurface(f, 4, "Gauss map degree");
  return det_h_total(f, grid).value / sphere_area(4);
}

EnergyReport energy_P4(const Immersion& f, const QuadratureGrid& grid) {
  require_hypersurface(f, 4, "the det h - det h-del energy");
  const AmbientMetric amb = AmbientMetric::flat_space(f.n);
  return integrate_energy(f, amb, grid, [](const PointFrame& F) {
    const Shape s = shape_of(F);
    return s.A.determinant() - s.A0.determinant();
  });
}

EnergyReport energy_Pab(const Immersion& f, double alpha, double beta,
                        const QuadratureGrid& grid) {
  require_hypersurface(f, 4, "the alpha-beta energy");
  if (!(alpha > 0) || !(beta > 0)) throw InputError("alpha and beta must be positive");
  const AmbientMetric amb = AmbientMetric::flat_space(f.n);
  return integrate_energy(f, amb, grid, [alpha, beta](const PointFrame& F) {
    const Shape s = shape_of(F);
    return s.A.determinant() + pab_extra(s.A0, alpha, beta);
  });
}

ZSpec ZSpec::pab_form(double alpha, double beta) {
  if (!(alpha > 0) || !(beta > 0)) throw InputError("alpha and beta must be positive");
  ZSpec z;
  z.kind = Kind::PabForm;
  z.alpha = alpha;
  z.beta = beta;
  return z;
}

ZSpec ZSpec::c_norm(double C) {
  if (!(C >= 0)) throw InputError("the norm coefficient must be nonnegative");
  ZSpec z;
  z.kind = Kind::CNorm;
  z.C = C;
  return z;
}

EnergyReport energy_F(const Immersion& f, const ZSpec& z, const QuadratureGrid& grid) {
  if (f.m % 2 != 0) throw InputError("this energy family needs even m");
  if (f.codim() != 1) throw InputError("this energy family needs a hypersurface");
  const AmbientMetric amb = AmbientMetric::flat_space(f.n);
  const int m = f.m;
  return integrate_energy(f, amb, grid, [&z, m](const PointFrame& F) {
    const Shape s = shape_of(F);
    return s.A.determinant() + z_value(z, s.A0, m);
  });
}

double sphere_area(int k) {
  if (k < 0) throw InputError("sphere dimension must be nonnegative");
  return 2.0 * std::pow(M_PI, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
}

namespace {

Tensor4 raise_slot(const Tensor4& T, int slot, const Eigen::MatrixXd& gi) {
  Tensor4 out;
  out.resize(T.n0, T.n1, T.n2, T.n3);
  for (int i = 0; i < T.n0; ++i)
    for (int j = 0; j < T.n1; ++j)
      for (int k = 0; k < T.n2; ++k)
        for (int l = 0; l < T.n3; ++l) {
          double s = 0.0;
          for (int a = 0; a < 4; ++a) {
            switch (slot) {
              case 0: s += gi(i, a) * T(a, j, k, l); break;
              case 1: s += gi(j, a) * T(i, a, k, l); break;
              case 2: s += gi(k, a) * T(i, j, a, l); break;
              default: s += gi(l, a) * T(i, j, k, a); break;
            }
          }
          out(i, j, k, l) = s;
        }
  return out;
}

}  // namespace

double pfaffian4(const Tensor4& R, const Eigen::MatrixXd& g) {
  if (R.n0 != 4 || R.n1 != 4 || R.n2 != 4 || R.n3 != 4 || g.rows() != 4 || g.cols() != 4)
    throw InputError("the Pfaffian form is defined for dimension 4");
  const Eigen::MatrixXd gi = g.inverse();
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(4, 4);
  for (int j = 0; j < 4; ++j)
    for (int l = 0; l < 4; ++l)
      for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) ric(j, l) += gi(i, k) * R(i, j, k, l);
  const double scal = (gi * ric).trace();
  const Eigen::MatrixXd ric_up = gi * ric * gi;
  double ric2 = 0.0;
  for (int j = 0; j < 4; ++j)
    for (int l = 0; l < 4; ++l) ric2 += ric(j, l) * ric_up(j, l);
  Tensor4 up = raise_slot(raise_slot(raise_slot(raise_slot(R, 0, gi), 1, gi), 2, gi), 3, gi);
  double riem2 = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) riem2 += up(i, j, k, l) * R(i, j, k, l);
  return (riem2 - 4.0 * ric2 + scal * scal) / 24.0;
}

double quartic_traceless_residual(const Eigen::MatrixXd& M) {
  if (M.rows() != 4 || M.cols() != 4)
    throw InputError("the quartic trace identity is for 4x4 matrices");
  if (std::abs(M.trace()) >= 1e-10) throw InputError("matrix is not traceless");
  const Eigen::MatrixXd M2 = M * M;
  const double p2 = M2.trace();
  const double p4 = (M2 * M2).trace();
  return p4 - 0.5 * p2 * p2 + 4.0 * M.determinant();
}

std::array<double, 3> newton_expansion_residuals(const Eigen::MatrixXd& h,
                                                 const Eigen::MatrixXd& g) {
  if (h.rows() != 4 || h.cols() != 4 || g.rows() != 4 || g.cols() != 4)
    throw InputError("the expansions are for 4x4 forms");
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) throw InputError("metric is not positive definite");
  const Eigen::MatrixXd A = llt.solve(h);
  const double H = 0.25 * A.trace();
  const Eigen::MatrixXd A0 = A - H * Eigen::MatrixXd::Identity(4, 4);
  const double det_A = A.determinant();
  const double det_A0 = A0.determinant();

  const Eigen::MatrixXd A2 = A * A;
  const double p2 = A2.trace(), p3 = (A2 * A).trace(), p4 = (A2 * A2).trace();
  const double r1 = det_A - (32.0 / 3.0 * H * H * H * H - 4.0 * H * H * p2 +
                             4.0 / 3.0 * H * p3 + 0.125 * p2 * p2 - 0.25 * p4);

  const Eigen::MatrixXd B2 = A0 * A0;
  const double q2 = B2.trace(), q3 = (B2 * A0).trace(), q4 = (B2 * B2).trace();
  const double r2 = det_A - (H * H * H * H - 0.5 * H * H * q2 + H * q3 / 3.0 +
                             0.125 * q2 * q2 - 0.25 * q4);
  const double r3 =
      (det_A - det_A0) - (H * H * H * H - 0.5 * H * H * q2 + H * q3 / 3.0);
  return {r1, r2, r3};
}

namespace {

double spectrum_det(const Eigen::VectorXd& lam, double s) {
  double p = 1.0;
  for (int i = 0; i < lam.size(); ++i) p *= lam[i] + s;
  return p;
}

// min over s in [-1.5, 1.5]: coarse grid then a local ternary refinement
double min_det_over_s(const Eigen::VectorXd& lam, double& best_s) {
  const int pts = 61;
  double best = std::numeric_limits<double>::infinity();
  best_s = 0.0;
  for (int j = 0; j < pts; ++j) {
    const double s = -1.5 + 3.0 * j / (pts - 1);
    const double d = spectrum_det(lam, s);
    if (d < best) {
      best = d;
      best_s = s;
    }
  }
  double lo = best_s - 3.0 / (pts - 1), hi = best_s + 3.0 / (pts - 1);
  for (int it = 0; it < 80; ++it) {
    const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
    if (spectrum_det(lam, a) < spectrum_det(lam, b))
      hi = b;
    else
      lo = a;
  }
  const double s_ref = 0.5 * (lo + hi);
  const double d_ref = spectrum_det(lam, s_ref);
  if (d_ref < best) {
    best = d_ref;
    best_s = s_ref;
  }
  return best;
}

bool project_unit_traceless(Eigen::VectorXd& lam) {
  lam.array() -= lam.mean();
  const double nrm = lam.norm();
  if (nrm < 1e-9) return false;
  lam /= nrm;
  return true;
}

}  // namespace

CEstimate estimate_C(int n, long long samples, std::uint64_t seed) {
  if (n < 1) throw InputError("the matrix half-dimension must be at least 1");
  if (samples < 1) throw InputError("need a positive sample count");
  const int d = 2 * n;
  SplitMix64 rng(seed);

  struct Candidate {
    double det;
    Eigen::VectorXd lam;
    double s;
  };
  const size_t keep = 16;
  std::vector<Candidate> worst;

  double global_min = std::numeric_limits<double>::infinity();
  Eigen::VectorXd global_lam;
  double global_s = 0.0;

  for (long long it = 0; it < samples; ++it) {
    Eigen::VectorXd lam(d);
    for (int i = 0; i < d; ++i) lam[i] = rng.normal();
    if (!project_unit_traceless(lam)) continue;
    double s = 0.0;
    const double dmin = min_det_over_s(lam, s);
    if (worst.size() < keep || dmin < worst.back().det) {
      worst.push_back({dmin, lam, s});
      std::sort(worst.begin(), worst.end(),
                [](const Candidate& a, const Candidate& b) { return a.det < b.det; });
      if (worst.size() > keep) worst.pop_back();
    }
    if (dmin < global_min) {
      global_min = dmin;
      global_lam = lam;
      global_s = s;
    }
  }

  // deterministic coordinate descent on the retained spectra
  for (Candidate& c : worst) {
    Eigen::VectorXd lam = c.lam;
    double s = c.s;
    double cur = c.det;
    double step = 0.05;
    while (step > 1e-9) {
      bool improved = false;
      for (int i = 0; i < d; ++i) {
        for (double sgn : {1.0, -1.0}) {
          Eigen::VectorXd cand = lam;
          cand[i] += sgn * step;
          if (!project_unit_traceless(cand)) continue;
          double cs = 0.0;
          const double cv = min_det_over_s(cand, cs);
          if (cv < cur - 1e-15) {
            lam = cand;
            cur = cv;
            s = cs;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (cur < global_min) {
      global_min = cur;
      global_lam = lam;
      global_s = s;
    }
  }

  CEstimate est;
  est.C = global_min < 0.0 ? -global_min : 0.0;
  est.eigs = global_lam;
  est.s = global_s;
  return est;
}

}  // namespace confinv
