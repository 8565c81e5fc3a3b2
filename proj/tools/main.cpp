#include <iostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "sgd/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Energy-density toolkit for the N-corner gasket"};
  app.require_subcommand(1);

  sgd::RunConfig cfg;
  auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("--dim", cfg.N, "gasket dimension N (N+1 corners)")
        ->capture_default_str();
    sub->add_option("--mode", cfg.mode, "arithmetic: exact | float")
        ->check(CLI::IsMember({"exact", "float"}))
        ->capture_default_str();
    sub->add_option("--edge", cfg.edge, "edge address w:i:j (w may be empty)")
        ->capture_default_str();
    sub->add_option("--u", cfg.u_text,
                    "boundary values: N+1 comma-separated rationals (p/q or "
                    "decimal); default is a demo vector");
    sub->add_option("--depth", cfg.depth, "dyadic/grid depth")
        ->capture_default_str();
    sub->add_option("--tol", cfg.tol, "tolerance / target threshold")
        ->capture_default_str();
    sub->add_option("--seed", cfg.seed, "seed for randomized checks")
        ->capture_default_str();
    sub->add_option("--out", cfg.out_path, "CSV output path (default stdout)");
  };

  CLI::App* verify =
      app.add_subcommand("verify", "run the exact identity suite");
  add_common(verify);
  verify->add_flag("--corrupt", cfg.corrupt)->group("");  // negative-test hook

  CLI::App* profile =
      app.add_subcommand("profile", "edge density profile as CSV");
  add_common(profile);
  profile->add_flag("--cells", cfg.cells,
                    "emit per-cell ratios (word,ratio) over all words of "
                    "length --depth instead of an edge profile");

  CLI::App* decay = app.add_subcommand(
      "decay", "density decay along two-corner tails, with fitted slopes");
  add_common(decay);
  decay->add_option("--kind", cfg.kind,
                    "ratio: symmetric-tail cell ratios; gap: worst-case "
                    "two-sided density gaps")
      ->check(CLI::IsMember({"ratio", "gap"}))
      ->capture_default_str();
  decay->add_option("--n-max", cfg.n_max, "tail length")->capture_default_str();

  CLI::App* maxloc = app.add_subcommand(
      "maxloc", "edge-maximum location M(s), grid or inverse");
  add_common(maxloc);
  maxloc->add_option("--s-grid", cfg.s_grid, "start:stop:count:log|lin")
      ->capture_default_str();
  maxloc->add_option("--target", cfg.target,
                     "invert M at this value in (1/2, 1)");

  CLI::App* derham =
      app.add_subcommand("derham", "self-similar profile L on a dyadic grid");
  add_common(derham);

  CLI::App* cone = app.add_subcommand(
      "cone-density", "density limit along an infinite two-corner word");
  add_common(cone);
  cone->add_option("--omega", cfg.omega,
                   "infinite word as prefix:tail, e.g. 121:2")
      ->required();

  CLI::App* vanish = app.add_subcommand(
      "vanish", "search a subcell with energy density below --tol");
  add_common(vanish);
  vanish->add_option("--word", cfg.word, "base cell word (default root)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return sgd::run_verify(cfg, std::cout);
    if (profile->parsed()) return sgd::run_profile(cfg, std::cout);
    if (decay->parsed()) return sgd::run_decay(cfg, std::cout);
    if (maxloc->parsed()) return sgd::run_maxloc(cfg, std::cout);
    if (derham->parsed()) return sgd::run_derham(cfg, std::cout);
    if (cone->parsed()) return sgd::run_cone_density(cfg, std::cout);
    if (vanish->parsed()) return sgd::run_vanish(cfg, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
