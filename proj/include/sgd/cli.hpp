#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "sgd/linalg.hpp"

namespace sgd {

// Everything a subcommand needs; unused fields keep their defaults.
struct RunConfig {
  int N = 2;
  std::string mode = "float";  // exact | float
  std::string edge = ":1:2";   // "w:i:j", empty word allowed
  std::string u_text;          // comma-separated rationals; empty = demo vector
  int depth = 8;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  std::string out_path;        // CSV target; empty = the report stream
  std::string word;            // vanish: base word
  std::string omega;           // cone-density: "prefix:tail"
  std::string s_grid = "0.01:100:121:log";
  double target = -1;          // maxloc: inverse mode when in (1/2, 1)
  bool cells = false;          // profile: per-cell ratio table instead
  std::string kind = "ratio";  // decay: ratio | gap
  int n_max = 30;
  int corrupt = 0;             // fault-injection hook for negative tests
};

// Each command returns its exit status: 0 success, 1 failed checks.
// Configuration problems surface as exceptions (the frontend maps them
// to exit status 2).
int run_verify(const RunConfig& cfg, std::ostream& report);
int run_profile(const RunConfig& cfg, std::ostream& report);
int run_decay(const RunConfig& cfg, std::ostream& report);
int run_maxloc(const RunConfig& cfg, std::ostream& report);
int run_derham(const RunConfig& cfg, std::ostream& report);
int run_cone_density(const RunConfig& cfg, std::ostream& report);
int run_vanish(const RunConfig& cfg, std::ostream& report);

// "p/q" or decimal entries separated by commas; must have N+1 of them.
VecQ parse_u(const std::string& text, int N);

}  // namespace sgd
