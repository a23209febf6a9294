#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "confinv/cli.hpp"

using namespace confinv;
using nlohmann::json;

namespace {

Job energy_job(const std::string& surface, const std::string& energy) {
  Job j;
  j.command = "energy";
  j.surface = surface;
  j.energy = energy;
  return j;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("energy report carries the header and the value") {
  Job j = energy_job("sphere(2,1)", "willmore");
  const JobResult res = run_job(j);
  REQUIRE(res.exit_code == 0);
  const json rep = json::parse(res.report);
  CHECK(rep.at("schema") == 1);
  CHECK(rep.at("tool") == "confinv");
  CHECK(rep.at("command") == "energy");
  CHECK(rep.at("seed") == 42);
  CHECK(rep.at("rng") == "splitmix64");
  CHECK(rep.at("surface") == "sphere(2,1)");
  CHECK(std::abs(rep.at("value").get<double>() - 4 * M_PI) < 1e-8);
  CHECK(res.report.back() == '\n');
}

TEST_CASE("identical jobs yield byte-identical reports") {
  Job j = energy_job("torus(2,1)", "willmore");
  CHECK(run_job(j).report == run_job(j).report);

  Job inv;
  inv.command = "invariance";
  inv.surface = "torus(2,1)";
  inv.P = "K";
  inv.resolution = {16};
  CHECK(run_job(inv).report == run_job(inv).report);

  Job est;
  est.command = "estimate-c";
  est.n = 1;
  est.samples = 2000;
  CHECK(run_job(est).report == run_job(est).report);
}

TEST_CASE("invariance verdicts set the exit code") {
  Job j;
  j.command = "invariance";
  j.surface = "torus(2,1)";
  j.P = "K";
  j.resolution = {24};
  const JobResult ok = run_job(j);
  CHECK(ok.exit_code == 0);
  const json rep = json::parse(ok.report);
  CHECK(rep.at("verdict") == "invariant");
  CHECK(rep.at("rows").size() == 20);

  j.P = "H2";
  const JobResult bad = run_job(j);
  CHECK(bad.exit_code == 1);
  CHECK(json::parse(bad.report).at("verdict") == "non-invariant");

  // explicit deformation overrides the built-in family
  j.P = "K";
  j.phi = "0.1*x1*x2";
  const JobResult single = run_job(j);
  CHECK(single.exit_code == 0);
  CHECK(json::parse(single.report).at("rows").size() == 4);
}

TEST_CASE("P accepts raw contraction-sum syntax") {
  Job j;
  j.command = "invariance";
  j.surface = "torus(2,1)";
  j.P = "g-1(a,c) g-1(b,d) ho(a,b) ho(c,d)";
  j.resolution = {16};
  const JobResult res = run_job(j);
  CHECK(res.exit_code == 0);
  CHECK(json::parse(res.report).at("verdict") == "invariant");
}

TEST_CASE("enumerate lists the verified class counts") {
  Job j;
  j.command = "enumerate";
  j.weight = -2;
  j.m = 2;
  j.codim = 1;
  const json rep1 = json::parse(run_job(j).report);
  CHECK(rep1.at("count") == 9);
  CHECK(rep1.at("terms").size() == 9);
  j.codim = 2;
  const json rep2 = json::parse(run_job(j).report);
  CHECK(rep2.at("count") == 10);
}

TEST_CASE("identities and estimate-c succeed with their defaults") {
  Job id;
  id.command = "identities";
  id.samples = 500;
  const JobResult ir = run_job(id);
  CHECK(ir.exit_code == 0);
  const json rep = json::parse(ir.report);
  CHECK(rep.at("pass") == true);

  Job est;
  est.command = "estimate-c";
  est.n = 1;
  est.samples = 2000;
  const JobResult er = run_job(est);
  CHECK(er.exit_code == 0);
  const json cr = json::parse(er.report);
  CHECK(std::abs(cr.at("C").get<double>() - 0.5) < 1e-3);
  CHECK(cr.at("certified") == true);
}

TEST_CASE("csv format emits one data row") {
  Job j = energy_job("sphere(2,1)", "willmore");
  j.format = "csv";
  const JobResult res = run_job(j);
  REQUIRE(res.exit_code == 0);
  const std::string& text = res.report;
  CHECK(text.find("surface,energy,value") == 0);
  CHECK(text.find("sphere(2,1),willmore,") != std::string::npos);
  CHECK(text.find("48x48") != std::string::npos);
}

TEST_CASE("input failures exit with code 2 and a message") {
  Job bad = energy_job("dodecahedron(1)", "willmore");
  const JobResult r1 = run_job(bad);
  CHECK(r1.exit_code == 2);
  CHECK(json::parse(r1.report).contains("error"));

  Job wrongdim = energy_job("sphere(2,1)", "pab");
  CHECK(run_job(wrongdim).exit_code == 2);

  Job badenergy = energy_job("sphere(2,1)", "frobnicate");
  CHECK(run_job(badenergy).exit_code == 2);

  Job badcmd;
  badcmd.command = "transmogrify";
  CHECK(run_job(badcmd).exit_code == 2);

  Job badres = energy_job("sphere(2,1)", "willmore");
  badres.resolution = {8, 8, 8};
  CHECK(run_job(badres).exit_code == 2);

  Job flatOnly = energy_job("sphere(4,1)", "p4");
  flatOnly.phi = "0.1*x1";
  CHECK(run_job(flatOnly).exit_code == 2);
}

TEST_CASE("a Mobius file is applied before the energy") {
  const std::string path = "test_cli_mobius.json";
  {
    std::ofstream out(path);
    out << R"([{"type": "dilation", "lambda": 3.0}])";
  }
  Job j = energy_job("sphere(2,1)", "willmore");
  j.mobius_path = path;
  const JobResult res = run_job(j);
  std::remove(path.c_str());
  REQUIRE(res.exit_code == 0);
  const json rep = json::parse(res.report);
  CHECK(std::abs(rep.at("value").get<double>() - 4 * M_PI) < 1e-8);
  CHECK(rep.at("mobius") == path);

  Job missing = energy_job("sphere(2,1)", "willmore");
  missing.mobius_path = "no_such_file.json";
  CHECK(run_job(missing).exit_code == 2);
}

TEST_CASE("euler energy reports an integer-valued result") {
  Job j = energy_job("ellipsoid(1,1.3,0.8)", "euler");
  const JobResult res = run_job(j);
  REQUIRE(res.exit_code == 0);
  CHECK(std::abs(json::parse(res.report).at("value").get<double>() - 2.0) < 1e-6);

  j.phi = "0.1*x1";
  const JobResult conf = run_job(j);
  REQUIRE(conf.exit_code == 0);
  CHECK(std::abs(json::parse(conf.report).at("value").get<double>() - 2.0) < 1e-6);
}

TEST_CASE("tolerance override changes the invariance gate") {
  Job j;
  j.command = "invariance";
  j.surface = "torus(2,1)";
  j.P = "H2";
  j.resolution = {16};
  j.tol = 1e6;  // absurdly loose: every defect passes
  const JobResult res = run_job(j);
  CHECK(res.exit_code == 0);
  CHECK(json::parse(res.report).at("verdict") == "invariant");
}

}  // TEST_SUITE
