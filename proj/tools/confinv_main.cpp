#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "confinv/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"conformal invariants of immersed submanifolds"};
  app.require_subcommand(1);

  confinv::Job job;
  std::string out_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--resolution", job.resolution,
                    "grid points per dimension (one value or one per dimension)")
        ->delimiter(',');
    cmd->add_option("--seed", job.seed, "rng seed (default 42)");
    cmd->add_option("--tol", job.tol, "tolerance override");
    cmd->add_option("--out", out_path, "write the report to this file");
    cmd->add_option("--format", job.format, "report format (default json)")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  CLI::App* energy = app.add_subcommand("energy", "evaluate an energy on a surface");
  energy->add_option("--surface", job.surface, "built-in name or surface JSON file")
      ->required();
  energy->add_option("--energy", job.energy,
                     "willmore, conformal_willmore, euler, normal_euler, det_h, "
                     "gauss_degree, p4, pab, f_pab or f_cnorm (default willmore)");
  energy->add_option("--alpha", job.alpha, "alpha for pab / f_pab (default 2)");
  energy->add_option("--beta", job.beta, "beta for pab / f_pab (default 6)");
  energy->add_option("--C", job.C, "coefficient for f_cnorm (default 0.5)");
  energy->add_option("--phi", job.phi,
                     "conformal ambient factor, an expression in x1..xn");
  energy->add_option("--mobius", job.mobius_path,
                     "JSON file of Mobius elements applied to the surface first");
  add_common(energy);

  CLI::App* inv = app.add_subcommand(
      "invariance", "integrate the conformal defect of a contraction sum");
  inv->add_option("--surface", job.surface, "built-in name or surface JSON file")
      ->required();
  inv->add_option("--P", job.P, "contraction sum in term syntax, or a named sum")
      ->required();
  inv->add_option("--phi", job.phi,
                  "sweep only this direction (default: the standard family)");
  add_common(inv);

  CLI::App* en =
      app.add_subcommand("enumerate", "canonical contraction terms of a given weight");
  en->add_option("--weight", job.weight, "target weight")->required();
  en->add_option("--m", job.m, "intrinsic dimension (default 2)");
  en->add_option("--codim", job.codim, "codimension (default 1)");
  add_common(en);

  CLI::App* ids = app.add_subcommand(
      "identities", "randomized check of the determinant expansion identities");
  ids->add_option("--samples", job.samples, "random trials (default 10000)");
  add_common(ids);

  CLI::App* ec = app.add_subcommand(
      "estimate-c", "sample the sharp constant of the determinant lower bound");
  ec->add_option("--n", job.n, "matrix half-dimension (default 2)");
  ec->add_option("--samples", job.samples, "sample count (default 20000)");
  add_common(ec);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  job.command = app.get_subcommands().front()->get_name();
  const confinv::JobResult res = confinv::run_job(job);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    out << res.report;
  } else {
    std::cout << res.report;
  }
  return res.exit_code;
}
