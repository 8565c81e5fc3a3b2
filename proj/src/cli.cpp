#include "sgd/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgd/cone.hpp"
#include "sgd/csv.hpp"
#include "sgd/derham.hpp"
#include "sgd/edge_density.hpp"
#include "sgd/energy.hpp"
#include "sgd/harmonic.hpp"
#include "sgd/rational.hpp"
#include "sgd/word.hpp"

namespace sgd {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

// CSV goes to --out when given, otherwise onto the report stream.
struct CsvTarget {
  std::ofstream file;
  std::ostream* os = nullptr;
  bool to_file = false;
};

CsvTarget open_csv(const RunConfig& cfg, std::ostream& fallback) {
  CsvTarget t;
  if (!cfg.out_path.empty()) {
    t.file.open(cfg.out_path, std::ios::binary);
    if (!t.file)
      throw std::runtime_error("cannot open output file: " + cfg.out_path);
    t.os = &t.file;
    t.to_file = true;
  } else {
    t.os = &fallback;
  }
  return t;
}

VecQ default_u(int N, bool equal_pair) {
  VecQ u(N + 1, Rat());
  u[0] = 1;
  if (equal_pair) u[1] = 1;
  return u;
}

VecQ pick_u(const RunConfig& cfg, bool equal_pair = false) {
  if (cfg.u_text.empty()) return default_u(cfg.N, equal_pair);
  return parse_u(cfg.u_text, cfg.N);
}

VecQ random_rational_vec(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> num(-12, 12), den(1, 9);
  VecQ u(n, Rat());
  for (int k = 0; k < n; ++k) u[k] = rat(num(rng), den(rng));
  return u;
}

Word random_word(std::mt19937_64& rng, int N, int len) {
  std::uniform_int_distribution<int> sym(1, N + 1);
  Word w;
  for (int k = 0; k < len; ++k) w.push(sym(rng));
  return w;
}

// Euclidean-orthonormal basis of R^n from seeded Gaussians, two
// Gram-Schmidt passes for stability.
std::vector<VecF> random_orthonormal(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<VecF> basis;
  while (static_cast<int>(basis.size()) < n) {
    VecF v(n);
    for (double& x : v) x = gauss(rng);
    for (int pass = 0; pass < 2; ++pass)
      for (const VecF& b : basis) {
        double ip = inner(v, b);
        for (int k = 0; k < n; ++k) v[k] -= ip * b[k];
      }
    double norm = std::sqrt(inner(v, v));
    if (norm < 1e-6) continue;  // resample near-dependent draws
    for (double& x : v) x /= norm;
    basis.push_back(v);
  }
  return basis;
}

// All words of length n over {i, j}, enumerated by bitmask.
std::vector<Word> two_symbol_words(int i, int j, int n) {
  std::vector<Word> words;
  words.reserve(std::size_t{1} << n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    Word w;
    for (int b = 0; b < n; ++b) w.push((mask >> b) & 1 ? j : i);
    words.push_back(w);
  }
  return words;
}

void emit(std::ostream& os, const CheckLine& line, bool& all_pass) {
  os << line.format() << '\n';
  all_pass = all_pass && line.pass;
}

}  // namespace

VecQ parse_u(const std::string& text, int N) {
  std::vector<std::string> parts = split(text, ',');
  if (static_cast<int>(parts.size()) != N + 1) {
    std::ostringstream msg;
    msg << "--u needs " << N + 1 << " comma-separated values, got "
        << parts.size();
    throw std::invalid_argument(msg.str());
  }
  VecQ u;
  for (const std::string& p : parts) u.push_back(parse_rational(p));
  return u;
}

int run_verify(const RunConfig& cfg, std::ostream& report) {
  HarmonicContext ctx = build_context(cfg.N);
  if (cfg.corrupt) ctx.A[0](0, 0) += Rat(1, 1000);

  bool all = true;
  CheckReport eigen = eigen_check(ctx);
  for (const CheckLine& line : eigen.lines) emit(report, line, all);
  if (!all) {
    // Core extension identities are broken; everything downstream
    // depends on them.
    report << "verification FAILED\n";
    return 1;
  }

  std::mt19937_64 rng{cfg.seed};
  int N = cfg.N;

  {
    VecQ u = random_rational_vec(rng, N + 1);
    Word base = random_word(rng, N, 2);
    bool ok = true;
    for (int n = 0; n <= 5; ++n)
      for (const Word& wp : two_symbol_words(1, 2, n))
        ok = ok && det_identity_check(ctx, u, base, wp, 1, 2);
    emit(report, CheckLine{"cross-det-scaling", ok, N, 0, ""}, all);
  }
  {
    bool ok = true;
    for (int n = 0; n <= 7; ++n)
      for (const Word& wp : two_symbol_words(1, 2, n))
        for (int l : {1, 2})
          ok = ok && dual_norm_lower_bound_check(ctx, wp, 1, 2, l);
    emit(report, CheckLine{"dual-norm-floor", ok, N, 0, ""}, all);
  }
  {
    bool ok = true;
    for (int rep = 0; rep < 3; ++rep) {
      Word w = random_word(rng, N, 1 + rep);
      for (int n = 0; n <= 4; ++n)
        for (const Word& wp : two_symbol_words(1, 2, n))
          for (int l : {1, 2}) ok = ok && prefix_norm_floor_check(ctx, w, wp, l);
    }
    emit(report, CheckLine{"prefix-norm-floor", ok, N, 0, ""}, all);
  }
  for (int k = 1; k <= N + 1; ++k) {
    CheckReport psd = psd_floor_check(ctx, k);
    for (const CheckLine& line : psd.lines) emit(report, line, all);
  }
  {
    bool ok = true;
    double worst = 0;
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<VecF> basis = random_orthonormal(rng, N + 1);
      Word w = random_word(rng, N, rep);
      OnbReport r = onb_decomposition_check(ctx, basis, w, 1e-9);
      ok = ok && r.basis_ok && r.sum_ok;
      worst = std::max(worst, r.sum_vs_kusuoka_err);
    }
    emit(report, CheckLine{"onb-decomposition", ok, N, 0, ""}, all);
  }
  {
    CheckReport inv = inverse_branch_contraction_check(N);
    for (const CheckLine& line : inv.lines) emit(report, line, all);
  }
  if (N == 2 || N == 3) {
    bool invariance = true, contraction = true;
    try {
      ConeFrame frame = canonical_cone(ctx, 1, 2);
      ContractionEstimate est = contraction_estimate(frame, cfg.seed, 400);
      contraction = est.empirical_ok;
    } catch (const std::exception&) {
      invariance = false;
    }
    emit(report, CheckLine{"cone-invariance", invariance, N, 0, ""}, all);
    emit(report, CheckLine{"cone-contraction", contraction, N, 0, ""}, all);
  } else {
    report << "cone-invariance: SKIPPED (N=" << N << ", unsupported)\n";
  }

  report << (all ? "verification PASSED\n" : "verification FAILED\n");
  return all ? 0 : 1;
}

int run_profile(const RunConfig& cfg, std::ostream& report) {
  HarmonicContext ctx = build_context(cfg.N);
  VecQ u = pick_u(cfg);
  CsvTarget out = open_csv(cfg, report);

  if (cfg.cells) {
    double count = std::pow(static_cast<double>(cfg.N + 1),
                            static_cast<double>(cfg.depth));
    if (cfg.depth < 0 || count > 2e6)
      throw std::invalid_argument("cell table too large; lower --depth");
    csv_row(*out.os, {"word", "ratio"});
    VecF uf = to_float(u);
    // Lexicographic DFS over W_depth carrying the running product.
    std::vector<std::pair<Word, MatF>> stack;
    stack.emplace_back(Word{}, MatF::identity(ctx.size()));
    while (!stack.empty()) {
      auto [w, aw] = stack.back();
      stack.pop_back();
      if (static_cast<int>(w.size()) == cfg.depth) {
        csv_row(*out.os, {w.str(), fmt17(ratio_from_matrix_f(ctx, aw, uf))});
        continue;
      }
      for (int s = ctx.size(); s >= 1; --s) {
        Word next = w;
        next.push(s);
        stack.emplace_back(next, mat_mul(ctx.Af[s - 1], aw));
      }
    }
    if (out.to_file) report << "wrote cell table to " << cfg.out_path << '\n';
    return 0;
  }

  EdgeAddress edge = EdgeAddress::parse(cfg.edge);
  NumericPolicy policy = cfg.mode == "exact" ? NumericPolicy::exact()
                                             : NumericPolicy::float64();
  std::vector<EdgeDensitySample> profile =
      edge_profile(ctx, u, edge, cfg.depth, policy);

  bool exact = policy.mode == NumericPolicy::Mode::exact;
  if (exact)
    csv_row(*out.os, {"t_num", "t_den", "t", "density", "density_exact"});
  else
    csv_row(*out.os, {"t_num", "t_den", "t", "density"});
  for (const EdgeDensitySample& s : profile) {
    std::vector<std::string> row = {std::to_string(s.t_num),
                                    std::to_string(s.t_den), fmt17(s.t),
                                    fmt17(s.density)};
    if (exact) row.push_back(s.density_exact);
    csv_row(*out.os, row);
  }
  if (out.to_file)
    report << "wrote " << profile.size() << " samples to " << cfg.out_path
           << '\n';
  return 0;
}

int run_decay(const RunConfig& cfg, std::ostream& report) {
  HarmonicContext ctx = build_context(cfg.N);
  EdgeAddress edge = EdgeAddress::parse(cfg.edge);
  CsvTarget out = open_csv(cfg, report);

  if (cfg.kind == "ratio") {
    VecQ u = pick_u(cfg, /*equal_pair=*/true);
    SymmetricTailReport rep = symmetric_tail_ratio(ctx, u, edge.prefix, edge.i,
                                                   edge.j, cfg.n_max);
    csv_row(*out.os, {"n", "ratio", "log_ratio"});
    bool any = false;
    for (std::size_t n = 0; n < rep.ratios.size(); ++n) {
      double r = rep.ratios[n];
      any = any || r > 1e-280;
      csv_row(*out.os, {std::to_string(n), fmt17(r),
                        r > 0 ? fmt17(std::log(r)) : "-inf"});
    }
    if (!any) {
      report << "all ratios vanish; fit skipped\n";
      return 0;
    }
    report << "ratio slope: fitted " << fmt17(rep.ratio_slope) << ", predicted "
           << fmt17(rep.ratio_slope_expected) << '\n';
    report << "energy slope: fitted " << fmt17(rep.energy_slope)
           << ", predicted " << fmt17(rep.energy_slope_expected) << '\n';
    report << (rep.slopes_ok ? "slopes within 5%\n"
                             : "slopes outside 5% band\n");
    return rep.slopes_ok ? 0 : 1;
  }

  if (cfg.kind != "gap")
    throw std::invalid_argument("--kind must be ratio or gap");

  VecQ u = pick_u(cfg);
  csv_row(*out.os, {"n", "ratio", "log_ratio"});
  std::vector<double> xs, ys;
  int n_cap = std::min(cfg.n_max, 12);
  for (int n = 1; n <= n_cap; ++n) {
    Rat worst = 0;
    for (const Word& wp : two_symbol_words(edge.i, edge.j, n)) {
      Rat g = delta_gap(ctx, u, concat(edge.prefix, wp), edge.i, edge.j);
      if (g < 0) g = -g;
      worst = std::max(worst, g);
    }
    double w = to_double(worst);
    csv_row(*out.os, {std::to_string(n), fmt17(w),
                      w > 0 ? fmt17(std::log(w)) : "-inf"});
    if (w > 0) {
      xs.push_back(n);
      ys.push_back(std::log(w));
    }
  }
  if (xs.size() < 3) {
    report << "gaps vanish; fit skipped\n";
    return 0;
  }
  double slope = fit_slope(xs, ys);
  double predicted =
      std::log(static_cast<double>(cfg.N) / static_cast<double>(cfg.N + 1));
  report << "gap slope: fitted " << fmt17(slope) << ", predicted upper bound "
         << fmt17(predicted) << '\n';
  bool ok = slope <= predicted + 0.05 * std::fabs(predicted);
  report << (ok ? "decay within the predicted bound\n"
                : "decay slower than predicted\n");
  return ok ? 0 : 1;
}

int run_maxloc(const RunConfig& cfg, std::ostream& report) {
  CsvTarget out = open_csv(cfg, report);

  if (cfg.target > 0) {
    if (!(cfg.target > 0.5 && cfg.target < 1.0))
      throw std::invalid_argument("maxloc target must lie in (1/2, 1)");
    double s = M_inverse(cfg.N, cfg.target);
    csv_row(*out.os, {"target", "s"});
    csv_row(*out.os, {fmt17(cfg.target), fmt17(s)});
    if (out.to_file)
      report << "M_inverse(" << fmt17(cfg.target) << ") = " << fmt17(s) << '\n';
    return 0;
  }

  std::vector<std::string> parts = split(cfg.s_grid, ':');
  if (parts.size() != 4)
    throw std::invalid_argument("--s-grid expects start:stop:count:log|lin");
  double start = std::stod(parts[0]);
  double stop = std::stod(parts[1]);
  long count = std::stol(parts[2]);
  const std::string& scale = parts[3];
  if (!(start > 0) || !(stop >= start))
    throw std::invalid_argument("s grid must satisfy 0 < start <= stop");
  if (count < 1 || count > 1000000)
    throw std::invalid_argument("grid count out of range");
  if (scale != "log" && scale != "lin")
    throw std::invalid_argument("grid scale must be log or lin");

  csv_row(*out.os, {"s", "M(s)"});
  for (long k = 0; k < count; ++k) {
    double frac = count == 1 ? 0.0
                             : static_cast<double>(k) /
                                   static_cast<double>(count - 1);
    double s = scale == "log" ? start * std::pow(stop / start, frac)
                              : start + (stop - start) * frac;
    csv_row(*out.os, {fmt17(s), fmt17(M_eval(cfg.N, s))});
  }
  if (out.to_file)
    report << "wrote " << count << " grid rows to " << cfg.out_path << '\n';
  return 0;
}

int run_derham(const RunConfig& cfg, std::ostream& report) {
  DeRhamState state = derham_grid(cfg.N, cfg.depth, 48);
  CsvTarget out = open_csv(cfg, report);
  csv_row(*out.os, {"t", "L(t)"});
  std::size_t count = state.values.size();
  for (std::size_t k = 0; k < count; ++k) {
    double t = static_cast<double>(k) / static_cast<double>(count - 1);
    csv_row(*out.os, {fmt17(t), fmt17(state.values[k])});
  }
  if (out.to_file)
    report << "wrote " << count << " samples to " << cfg.out_path << '\n';
  report << "iterate error bound " << fmt17(state.error_bound) << ", monotone: "
         << (state.monotone ? "yes" : "NO") << '\n';
  return state.monotone ? 0 : 1;
}

int run_cone_density(const RunConfig& cfg, std::ostream& report) {
  HarmonicContext ctx = build_context(cfg.N);
  EdgeAddress edge = EdgeAddress::parse(cfg.edge);
  VecQ u = pick_u(cfg);

  std::vector<std::string> parts = split(cfg.omega, ':');
  if (parts.size() != 2)
    throw std::invalid_argument("--omega expects prefix:tail, e.g. 12:2");
  Word head = Word::parse(parts[0]);
  int tail = std::stoi(parts[1]);
  for (std::size_t k = 0; k < head.size(); ++k)
    if (head.at(k) != edge.i && head.at(k) != edge.j)
      throw std::invalid_argument("omega prefix must use the edge corners");
  if (tail != edge.i && tail != edge.j)
    throw std::invalid_argument("omega tail must be one of the edge corners");

  ConeFrame frame = canonical_cone(ctx, edge.i, edge.j);
  EdgeDensityLimit lim = density_along(ctx, frame, edge, u,
                                       SymbolStream::eventually(head, tail),
                                       cfg.tol);

  report << "density limit: " << fmt17(lim.value) << '\n';
  for (std::size_t l = 0; l < lim.lambda.size(); ++l)
    report << "lambda_" << l + 1 << ": " << fmt17(lim.lambda[l]) << '\n';
  report << "dual iteration: " << lim.rho.iters << " steps, last diff "
         << fmt17(lim.rho.last_diff) << ", certificate "
         << fmt17(lim.rho.final_bound)
         << (lim.rho.converged ? "" : " (not converged)") << '\n';
  if (lim.rho.exact_check_err >= 0)
    report << "eventually-constant closed form agrees within "
           << fmt17(lim.rho.exact_check_err) << '\n';

  if (!cfg.out_path.empty()) {
    CsvTarget out = open_csv(cfg, report);
    std::vector<std::string> header = {"value"};
    std::vector<std::string> row = {fmt17(lim.value)};
    for (std::size_t l = 0; l < lim.lambda.size(); ++l) {
      header.push_back("lambda_" + std::to_string(l + 1));
      row.push_back(fmt17(lim.lambda[l]));
    }
    header.insert(header.end(), {"iters", "last_diff", "final_bound"});
    row.insert(row.end(),
               {std::to_string(lim.rho.iters), fmt17(lim.rho.last_diff),
                fmt17(lim.rho.final_bound)});
    csv_row(*out.os, header);
    csv_row(*out.os, row);
  }
  return lim.rho.converged ? 0 : 1;
}

int run_vanish(const RunConfig& cfg, std::ostream& report) {
  HarmonicContext ctx = build_context(cfg.N);
  VecQ u = pick_u(cfg);
  Word base = Word::parse(cfg.word);
  check_word(base, cfg.N);

  VanishResult res = find_vanishing_cell(ctx, u, base, cfg.tol);
  static const char* kCase[] = {"none", "equal-pair descent",
                                "dyadic perturbation", "middle-corner tail"};
  report << "witness: " << (res.witness.empty() ? "(empty)" : res.witness.str())
         << '\n';
  report << "ratio: " << rat_to_string(res.ratio) << " ("
         << fmt17(res.ratio_f) << ")\n";
  report << "case: " << kCase[res.case_used] << '\n';
  if (!res.note.empty()) report << "note: " << res.note << '\n';
  report << (res.ok ? "target met\n" : "target NOT met\n");

  if (!cfg.out_path.empty()) {
    CsvTarget out = open_csv(cfg, report);
    csv_row(*out.os, {"witness", "ratio", "ratio_float", "case"});
    csv_row(*out.os, {res.witness.str(), rat_to_string(res.ratio),
                      fmt17(res.ratio_f), std::to_string(res.case_used)});
  }
  return res.ok ? 0 : 1;
}

}  // namespace sgd
