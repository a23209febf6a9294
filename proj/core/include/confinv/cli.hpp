#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace confinv {

// One fully-specified command invocation. run_job is pure and deterministic:
// the same Job always yields byte-identical report text.
struct Job {
  std::string command;  // energy | invariance | enumerate | identities | estimate-c
  std::string surface;
  std::string energy = "willmore";
  double alpha = 2.0;
  double beta = 6.0;
  double C = 0.5;            // f_cnorm coefficient
  std::string phi;           // expression in x1..xn
  std::string mobius_path;   // JSON file of Mobius elements
  std::string P;             // contraction-sum syntax or a named sum
  std::vector<int> resolution;
  std::uint64_t seed = 42;
  double tol = -1.0;         // command-specific default when negative
  int weight = -2;           // enumerate
  int m = 2;                 // enumerate
  int codim = 1;             // enumerate
  int n = 2;                 // estimate-c
  long long samples = -1;    // identities / estimate-c; default per command
  std::string format = "json";
};

struct JobResult {
  int exit_code = 0;  // 0 success/invariant, 1 verification failure, 2 input error
  std::string report;
};

JobResult run_job(const Job& job);

}  // namespace confinv
