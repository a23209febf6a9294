#include "confinv/cli.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "confinv/conformal.hpp"
#include "confinv/energies.hpp"
#include "confinv/error.hpp"
#include "confinv/rng.hpp"

namespace confinv {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json report_header(const Job& job) {
  ordered_json j;
  j["schema"] = 1;
  j["tool"] = "confinv";
  j["command"] = job.command;
  j["seed"] = job.seed;
  j["rng"] = SplitMix64::name;
  return j;
}

std::string num17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string resolution_label(const std::vector<int>& res) {
  std::string s;
  for (size_t i = 0; i < res.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(res[i]);
  }
  return s;
}

std::vector<int> resolve_resolution(const Job& job, const Immersion& f) {
  std::vector<int> res = job.resolution;
  if (res.empty())
    res = default_resolution(f.m);
  else if (res.size() == 1)
    res.assign(size_t(f.m), res[0]);
  else if (int(res.size()) != f.m)
    throw InputError("resolution needs 1 or m values");
  return clamp_resolution(f.m, res);
}

ContractionSum parse_P(const std::string& text, int m) {
  try {
    return named_sum(text, m);
  } catch (const InputError&) {
    return parse_sum(text);
  }
}

std::string render(const ordered_json& j) { return j.dump(2) + "\n"; }

JobResult run_energy(const Job& job) {
  if (job.surface.empty()) throw InputError("energy command needs --surface");
  Immersion f = make_surface(job.surface);
  if (!job.mobius_path.empty()) f = apply_mobius(f, load_mobius_json(job.mobius_path));
  AmbientMetric amb = AmbientMetric::flat_space(f.n);
  if (!job.phi.empty()) {
    std::vector<std::string> xv;
    for (int i = 1; i <= f.n; ++i) xv.push_back("x" + std::to_string(i));
    amb = AmbientMetric::conformal(f.n, parse_expression(job.phi, xv));
  }
  const std::vector<int> res = resolve_resolution(job, f);
  const QuadratureGrid grid = build_grid(f.domain, res);

  EnergyReport rep;
  const std::string& kind = job.energy;
  if (kind == "willmore") {
    rep = willmore(f, amb, grid);
  } else if (kind == "conformal_willmore") {
    rep = conformal_willmore_energy(f, amb, grid);
  } else if (kind == "euler") {
    if (f.m != 2) throw InputError("euler needs m = 2");
    rep = integrate_energy(f, amb, grid, [](const PointFrame& F) {
      return F.K() / (2.0 * M_PI);
    });
  } else if (kind == "normal_euler") {
    if (f.m != 2 || f.codim() != 2)
      throw InputError("normal_euler needs m = 2, codim 2");
    if (!amb.flat) throw InputError("normal_euler is defined in flat ambient");
    rep = integrate_energy(f, amb, grid, [](const PointFrame& F) {
      return F.Kperp() / (2.0 * M_PI);
    });
  } else if (kind == "det_h") {
    if (!amb.flat) throw InputError("det_h is defined in flat ambient");
    rep = det_h_total(f, grid);
  } else if (kind == "gauss_degree") {
    if (!amb.flat) throw InputError("gauss_degree is defined in flat ambient");
    if (f.m != 4 || f.codim() != 1) throw InputError("gauss_degree needs m = 4, codim 1");
    rep = det_h_total(f, grid);
    const double w4 = sphere_area(4);
    rep.value /= w4;
    rep.estimated_quadrature_error /= w4;
    rep.pointwise_min_integrand /= w4;
  } else if (kind == "p4") {
    if (!amb.flat) throw InputError("p4 is defined in flat ambient");
    rep = energy_P4(f, grid);
  } else if (kind == "pab") {
    if (!amb.flat) throw InputError("pab is defined in flat ambient");
    rep = energy_Pab(f, job.alpha, job.beta, grid);
  } else if (kind == "f_pab") {
    if (!amb.flat) throw InputError("f_pab is defined in flat ambient");
    rep = energy_F(f, ZSpec::pab_form(job.alpha, job.beta), grid);
  } else if (kind == "f_cnorm") {
    if (!amb.flat) throw InputError("f_cnorm is defined in flat ambient");
    rep = energy_F(f, ZSpec::c_norm(job.C), grid);
  } else {
    throw InputError(
        "unknown energy '" + kind +
        "' (expected willmore, conformal_willmore, euler, normal_euler, det_h, "
        "gauss_degree, p4, pab, f_pab or f_cnorm)");
  }

  JobResult out;
  if (job.format == "csv") {
    std::ostringstream os;
    os << "surface,energy,value,resolution,est_error,min_integrand\n";
    os << job.surface << "," << kind << "," << num17(rep.value) << ","
       << resolution_label(rep.resolution) << "," << num17(rep.estimated_quadrature_error)
       << "," << num17(rep.pointwise_min_integrand) << "\n";
    out.report = os.str();
  } else {
    ordered_json j = report_header(job);
    j["surface"] = job.surface;
    j["energy"] = kind;
    if (!job.phi.empty()) j["phi"] = job.phi;
    if (!job.mobius_path.empty()) j["mobius"] = job.mobius_path;
    if (kind == "pab" || kind == "f_pab") {
      j["alpha"] = job.alpha;
      j["beta"] = job.beta;
    }
    if (kind == "f_cnorm") j["C"] = job.C;
    j["value"] = rep.value;
    j["resolution"] = rep.resolution;
    j["est_error"] = rep.estimated_quadrature_error;
    j["min_integrand"] = rep.pointwise_min_integrand;
    out.report = render(j);
  }
  return out;
}

JobResult run_invariance(const Job& job) {
  if (job.surface.empty()) throw InputError("invariance command needs --surface");
  if (job.P.empty()) throw InputError("invariance command needs --P");
  const Immersion f = make_surface(job.surface);
  const AmbientMetric amb = AmbientMetric::flat_space(f.n);
  const ContractionSum P = parse_P(job.P, f.m);
  const std::vector<int> res = resolve_resolution(job, f);
  const QuadratureGrid grid = build_grid(f.domain, res);

  InvarianceReport rep;
  if (!job.phi.empty()) {
    std::vector<std::string> xv;
    for (int i = 1; i <= f.n; ++i) xv.push_back("x" + std::to_string(i));
    std::vector<PhiFamilyMember> family = {{"phi", parse_expression(job.phi, xv)}};
    rep = invariance_sweep(P, f, amb, grid, family);
  } else {
    rep = invariance_sweep(P, f, amb, grid);
  }
  if (job.tol >= 0) {
    rep.tol = job.tol * rep.area;
    rep.invariant = rep.max_abs <= rep.tol;
    if (rep.invariant)
      rep.verdict = "invariant";
    else if (rep.max_abs > 1e-3)
      rep.verdict = "non-invariant";
    else
      rep.verdict = "inconclusive";
  }

  JobResult out;
  out.exit_code = rep.invariant ? 0 : 1;
  if (job.format == "csv") {
    std::ostringstream os;
    os << "surface,P,phi,lambda,integral,verdict\n";
    for (const InvarianceRow& r : rep.rows)
      os << job.surface << "," << format_sum(P) << "," << r.phi_name << ","
         << num17(r.lambda) << "," << num17(r.integral) << "," << rep.verdict << "\n";
    out.report = os.str();
  } else {
    ordered_json j = report_header(job);
    j["surface"] = job.surface;
    j["P"] = format_sum(P);
    if (!job.phi.empty()) j["phi"] = job.phi;
    j["rows"] = ordered_json::array();
    for (const InvarianceRow& r : rep.rows) {
      ordered_json row;
      row["phi"] = r.phi_name;
      row["lambda"] = r.lambda;
      row["integral"] = r.integral;
      j["rows"].push_back(row);
    }
    j["max_abs"] = rep.max_abs;
    j["tol"] = rep.tol;
    j["area"] = rep.area;
    j["verdict"] = rep.verdict;
    out.report = render(j);
  }
  return out;
}

JobResult run_enumerate(const Job& job) {
  const std::vector<ContractionTerm> terms = enumerate_terms(job.weight, job.m, job.codim);
  std::vector<std::string> names;
  names.reserve(terms.size());
  for (const ContractionTerm& t : terms) names.push_back(format_term(t));

  JobResult out;
  if (job.format == "csv") {
    std::ostringstream os;
    os << "term\n";
    for (const std::string& s : names) os << "\"" << s << "\"\n";
    out.report = os.str();
  } else {
    ordered_json j = report_header(job);
    j["weight"] = job.weight;
    j["m"] = job.m;
    j["codim"] = job.codim;
    j["count"] = names.size();
    j["terms"] = names;
    out.report = render(j);
  }
  return out;
}

JobResult run_identities(const Job& job) {
  const long long trials = job.samples > 0 ? job.samples : 10000;
  const double tol = job.tol >= 0 ? job.tol : 1e-10;
  SplitMix64 rng(job.seed);

  double worst_quartic = 0.0;
  double worst_newton[3] = {0.0, 0.0, 0.0};
  for (long long t = 0; t < trials; ++t) {
    Eigen::MatrixXd X(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) X(i, k) = rng.normal();
    Eigen::MatrixXd sym = 0.5 * (X + X.transpose());
    const Eigen::MatrixXd tl =
        sym - (sym.trace() / 4.0) * Eigen::MatrixXd::Identity(4, 4);
    const double qs = 1.0 + std::pow(tl.norm(), 4);
    worst_quartic = std::max(worst_quartic, std::abs(quartic_traceless_residual(tl)) / qs);

    Eigen::MatrixXd Y(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) Y(i, k) = 0.4 * rng.normal();
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(4, 4) + 0.5 * (Y + Y.transpose());
    const Eigen::MatrixXd g = B.transpose() * B;
    const auto res = newton_expansion_residuals(sym, g);
    const Eigen::MatrixXd A = g.llt().solve(sym);
    const double ns = 1.0 + std::pow(A.norm(), 4);
    for (int i = 0; i < 3; ++i)
      worst_newton[i] = std::max(worst_newton[i], std::abs(res[size_t(i)]) / ns);
  }
  const bool pass = worst_quartic < tol && worst_newton[0] < tol &&
                    worst_newton[1] < tol && worst_newton[2] < tol;

  JobResult out;
  out.exit_code = pass ? 0 : 1;
  if (job.format == "csv") {
    std::ostringstream os;
    os << "identity,worst_scaled_residual,tol,pass\n";
    os << "quartic_traceless," << num17(worst_quartic) << "," << num17(tol) << ","
       << (worst_quartic < tol) << "\n";
    for (int i = 0; i < 3; ++i)
      os << "newton_r" << (i + 1) << "," << num17(worst_newton[i]) << "," << num17(tol)
         << "," << (worst_newton[i] < tol) << "\n";
    out.report = os.str();
  } else {
    ordered_json j = report_header(job);
    j["trials"] = trials;
    j["tol"] = tol;
    j["worst_quartic"] = worst_quartic;
    j["worst_newton"] = {worst_newton[0], worst_newton[1], worst_newton[2]};
    j["pass"] = pass;
    out.report = render(j);
  }
  return out;
}

JobResult run_estimate_c(const Job& job) {
  const long long samples = job.samples > 0 ? job.samples : 20000;
  const CEstimate est = estimate_C(job.n, samples, job.seed);

  // fresh-sample certification of det + C >= 0 on the unit-norm slice
  SplitMix64 rng(job.seed ^ 0x9e3779b97f4a7c15ULL);
  const long long cert_samples = 100000;
  const int d = 2 * job.n;
  double min_margin = std::numeric_limits<double>::infinity();
  for (long long t = 0; t < cert_samples; ++t) {
    Eigen::VectorXd lam(d);
    for (int i = 0; i < d; ++i) lam[i] = rng.normal();
    lam.array() -= lam.mean();
    const double nrm = lam.norm();
    if (nrm < 1e-9) continue;
    lam /= nrm;
    const double s = rng.uniform(-1.5, 1.5);
    double det = 1.0;
    for (int i = 0; i < d; ++i) det *= lam[i] + s;
    min_margin = std::min(min_margin, det + est.C);
  }
  const bool certified = min_margin >= -1e-8;

  JobResult out;
  out.exit_code = certified ? 0 : 1;
  if (job.format == "csv") {
    std::ostringstream os;
    os << "n,samples,C,s,min_margin,certified\n";
    os << job.n << "," << samples << "," << num17(est.C) << "," << num17(est.s) << ","
       << num17(min_margin) << "," << certified << "\n";
    out.report = os.str();
  } else {
    ordered_json j = report_header(job);
    j["n"] = job.n;
    j["samples"] = samples;
    j["C"] = est.C;
    j["eigs"] = ordered_json::array();
    for (int i = 0; i < est.eigs.size(); ++i) j["eigs"].push_back(est.eigs[i]);
    j["s"] = est.s;
    j["cert_samples"] = cert_samples;
    j["min_margin"] = min_margin;
    j["certified"] = certified;
    out.report = render(j);
  }
  return out;
}

}  // namespace

JobResult run_job(const Job& job) {
  try {
    if (job.format != "json" && job.format != "csv")
      throw InputError("format must be json or csv");
    if (job.command == "energy") return run_energy(job);
    if (job.command == "invariance") return run_invariance(job);
    if (job.command == "enumerate") return run_enumerate(job);
    if (job.command == "identities") return run_identities(job);
    if (job.command == "estimate-c") return run_estimate_c(job);
    throw InputError("unknown command '" + job.command +
                     "' (expected energy, invariance, enumerate, identities or estimate-c)");
  } catch (const InputError& e) {
    ordered_json j = report_header(job);
    j["error"] = e.what();
    return {2, render(j)};
  } catch (const NumericError& e) {
    ordered_json j = report_header(job);
    j["error"] = e.what();
    return {1, render(j)};
  }
}

}  // namespace confinv
