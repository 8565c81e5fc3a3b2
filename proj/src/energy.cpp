#include "sgd/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sgd/derham.hpp"

namespace sgd {

Rat cell_energy(const HarmonicContext& ctx, const VecQ& u, const Word& w) {
  MatQ aw = word_matrix(ctx, w);
  return 2 * rat_pow(ctx.scale, static_cast<long>(w.size())) *
         q0(ctx, mat_vec(aw, u));
}

double cell_energy_f(const HarmonicContext& ctx, const VecF& u, const Word& w) {
  MatF aw = word_matrix_float(ctx, w);
  return 2.0 * std::pow(ctx.scalef, static_cast<double>(w.size())) *
         q0f(ctx, mat_vec(aw, u));
}

Rat kusuoka_cell(const HarmonicContext& ctx, const Word& w) {
  MatQ aw = word_matrix(ctx, w);
  Rat sum(0);
  for (std::size_t k = 0; k < ctx.size(); ++k) sum += q0(ctx, aw.col(k));
  return 2 * rat_pow(ctx.scale, static_cast<long>(w.size())) * sum;
}

double kusuoka_cell_f(const HarmonicContext& ctx, const Word& w) {
  MatF aw = word_matrix_float(ctx, w);
  double sum = 0;
  for (std::size_t k = 0; k < ctx.size(); ++k) sum += q0f(ctx, aw.col(k));
  return 2.0 * std::pow(ctx.scalef, static_cast<double>(w.size())) * sum;
}

Rat ratio_from_matrix(const HarmonicContext& ctx, const MatQ& aw,
                      const VecQ& u) {
  Rat den(0);
  for (std::size_t k = 0; k < ctx.size(); ++k) den += q0(ctx, aw.col(k));
  if (den == 0) throw std::logic_error("degenerate cell measure");
  return q0(ctx, mat_vec(aw, u)) / den;
}

double ratio_from_matrix_f(const HarmonicContext& ctx, const MatF& aw,
                           const VecF& u) {
  double den = 0;
  for (std::size_t k = 0; k < ctx.size(); ++k) den += q0f(ctx, aw.col(k));
  return q0f(ctx, mat_vec(aw, u)) / den;
}

Rat cell_ratio(const HarmonicContext& ctx, const VecQ& u, const Word& w) {
  return ratio_from_matrix(ctx, word_matrix(ctx, w), u);
}

double cell_ratio_f(const HarmonicContext& ctx, const VecF& u, const Word& w) {
  return ratio_from_matrix_f(ctx, word_matrix_float(ctx, w), u);
}

RatioLimit corner_limit(const HarmonicContext& ctx, const VecQ& u,
                        const Word& w, int i) {
  check_symbol(i, ctx.N);
  MatQ aw = word_matrix(ctx, w);
  VecQ tawd = mat_vec(transpose(aw), ctx.d[i - 1]);
  RatioLimit lim;
  lim.numerator_pairing = inner(ctx.d[i - 1], mat_vec(aw, u));
  lim.dual_norm_sq = inner(tawd, tawd);
  if (lim.dual_norm_sq == 0)
    throw std::logic_error("vanishing dual norm |tA_w d_i|");
  lim.value = lim.numerator_pairing * lim.numerator_pairing / lim.dual_norm_sq;
  lim.scaled_energy_limit = rat(2, ctx.N) *
                            rat_pow(ctx.scale, static_cast<long>(w.size())) *
                            lim.numerator_pairing * lim.numerator_pairing;
  lim.value_f = to_double(lim.value);
  return lim;
}

namespace {

double vec_norm(const VecF& x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// Geometric-mean ratio of successive errors, restricted to the window
// where the errors sit safely above the floating noise floor.
double fit_error_ratio(const std::vector<double>& errs, double noise_floor) {
  std::vector<double> ratios;
  for (std::size_t n = 0; n + 1 < errs.size(); ++n) {
    if (errs[n] > noise_floor && errs[n + 1] > noise_floor)
      ratios.push_back(errs[n + 1] / errs[n]);
  }
  if (ratios.size() < 4) return 0;
  // Drop the first few pre-asymptotic terms.
  std::size_t skip = std::min<std::size_t>(3, ratios.size() - 4);
  double logsum = 0;
  std::size_t cnt = 0;
  for (std::size_t k = skip; k < ratios.size(); ++k) {
    logsum += std::log(ratios[k]);
    ++cnt;
  }
  return std::exp(logsum / static_cast<double>(cnt));
}

}  // namespace

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_slope needs matching samples");
  double n = static_cast<double>(x.size());
  double sx = std::accumulate(x.begin(), x.end(), 0.0);
  double sy = std::accumulate(y.begin(), y.end(), 0.0);
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceReport convergence_rate_check(const HarmonicContext& ctx,
                                         const VecQ& u, const Word& w, int i,
                                         int n_max) {
  check_symbol(i, ctx.N);
  if (n_max < 10 || n_max > 200)
    throw std::invalid_argument("n_max outside [10, 200]");
  ConvergenceReport rep;
  rep.n_max = n_max;
  int N = ctx.N;
  RatioLimit lim = corner_limit(ctx, u, w, i);
  rep.closed_form = to_double(lim.scaled_energy_limit);
  rep.expected_vec_ratio = 1.0 / (N + 1);

  VecF uw = to_float(mat_vec(word_matrix(ctx, w), u));
  double diu = inner(ctx.df[i - 1], uw);
  VecF vec_limit = project_P(ctx.vf[i - 1]);
  for (double& c : vec_limit) c *= diu;

  const MatF& Ai = ctx.Af[i - 1];
  double scale_pow_w = std::pow(ctx.scalef, static_cast<double>(w.size()));

  // Iterate the mean-zero part only. Constants are fixed points carrying
  // no energy, but at float precision they would dominate the iterate and
  // wash out the decaying modes long before n = 40.
  std::vector<double> energy_errs, vec_errs;
  VecF x = project_P(uw);
  double scale_n = 1.0;
  for (int n = 0; n <= n_max; ++n) {
    double scaled_energy = 2.0 * scale_pow_w * scale_n * scale_n * q0f(ctx, x);
    energy_errs.push_back(std::fabs(scaled_energy - rep.closed_form));
    if (n == n_max) {
      rep.final_scaled_energy = scaled_energy;
      rep.abs_err = energy_errs.back();
    }
    VecF px = x;
    for (double& c : px) c *= scale_n;
    vec_errs.push_back(vec_norm(vec_sub(px, vec_limit)));
    if (n == n_max) rep.vec_limit_err = vec_errs.back();
    x = project_P(mat_vec(Ai, x));
    scale_n *= ctx.scalef;
  }

  // Two-sided boundedness of scale^n nu(K_{w i^n}): the scaled Kusuoka
  // masses stay pinched between positive constants.
  {
    MatF awn = word_matrix_float(ctx, w);
    auto drop_column_means = [](MatF& m) {
      for (std::size_t c = 0; c < m.cols(); ++c) {
        double mean = 0;
        for (std::size_t r = 0; r < m.rows(); ++r) mean += m(r, c);
        mean /= static_cast<double>(m.rows());
        for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) -= mean;
      }
    };
    drop_column_means(awn);
    double scale_2n = 1.0;  // scale^{2n}, absorbing scale^n * scale^{|w|+n}
    rep.theta_inf = std::numeric_limits<double>::infinity();
    rep.theta_sup = 0;
    for (int n = 0; n <= n_max; ++n) {
      double sum = 0;
      for (std::size_t k = 0; k < ctx.size(); ++k) sum += q0f(ctx, awn.col(k));
      double scaled = 2.0 * scale_pow_w * scale_2n * sum;
      rep.theta_inf = std::min(rep.theta_inf, scaled);
      rep.theta_sup = std::max(rep.theta_sup, scaled);
      awn = mat_mul(Ai, awn);
      drop_column_means(awn);
      scale_2n *= ctx.scalef * ctx.scalef;
    }
  }

  double noise = 1e-12 * std::max(1.0, std::fabs(rep.closed_form));
  rep.energy_error_ratio = fit_error_ratio(energy_errs, noise);
  rep.vec_error_ratio = fit_error_ratio(vec_errs, 1e-12 * (1 + vec_norm(vec_limit)));
  rep.value_ok = rep.abs_err < 1e-8;
  rep.ratio_ok = rep.vec_error_ratio > 0 &&
                 std::fabs(rep.vec_error_ratio - rep.expected_vec_ratio) <
                     0.05 * rep.expected_vec_ratio;
  rep.theta_ok = rep.theta_inf > 0 && std::isfinite(rep.theta_sup);
  return rep;
}

OnbReport onb_decomposition_check(const HarmonicContext& ctx,
                                  const std::vector<VecF>& basis,
                                  const Word& w, double tol) {
  if (basis.size() != ctx.size())
    throw std::invalid_argument("basis must have N+1 vectors");
  OnbReport rep;
  for (std::size_t a = 0; a < basis.size(); ++a) {
    if (basis[a].size() != ctx.size())
      throw std::invalid_argument("basis vector size");
    for (std::size_t b = 0; b <= a; ++b) {
      double ip = inner(basis[a], basis[b]);
      double target = (a == b) ? 1.0 : 0.0;
      rep.orthonormality_err =
          std::max(rep.orthonormality_err, std::fabs(ip - target));
    }
  }
  rep.basis_ok = rep.orthonormality_err <= tol;
  if (!rep.basis_ok) return rep;
  double sum = 0;
  for (const VecF& b : basis) sum += cell_energy_f(ctx, b, w);
  rep.sum_vs_kusuoka_err = std::fabs(sum - kusuoka_cell_f(ctx, w));
  rep.sum_ok = rep.sum_vs_kusuoka_err <= tol * std::max(1.0, kusuoka_cell_f(ctx, w));
  return rep;
}

SymmetricTailReport symmetric_tail_ratio(const HarmonicContext& ctx,
                                         const VecQ& u, const Word& w, int i,
                                         int j, int n_max) {
  check_symbol(i, ctx.N);
  check_symbol(j, ctx.N);
  if (i == j) throw std::invalid_argument("tail needs distinct corners");
  VecQ b = mat_vec(word_matrix(ctx, w), u);
  if (b[i - 1] != b[j - 1])
    throw std::invalid_argument("boundary values at i, j must coincide");
  SymmetricTailReport rep;
  int N = ctx.N;
  rep.ratio_slope_expected = -2.0 * std::log(static_cast<double>(N + 1));
  rep.energy_slope_expected =
      -std::log(static_cast<double>((N + 1) * (N + 3)));

  // Exact products throughout: along the tail the cell values approach a
  // constant and the surviving fluctuation shrinks geometrically, far
  // below what float cancellation can resolve over a deep window.
  MatQ an = mat_mul(ctx.A[i - 1], word_matrix(ctx, w));  // word w + i
  Rat scale_pow = rat_pow(ctx.scale, static_cast<long>(w.size() + 1));
  for (int n = 0; n <= n_max; ++n) {
    rep.ratios.push_back(to_double(ratio_from_matrix(ctx, an, u)));
    Rat energy = 2 * scale_pow * q0(ctx, mat_vec(an, u));
    rep.energies.push_back(to_double(energy));
    an = mat_mul(ctx.A[j - 1], an);
    scale_pow *= ctx.scale;
  }

  // Fit over an interior window clear of transients and noise floor.
  std::vector<double> xs, lr, le;
  int lo = std::max(2, n_max / 3), hi = n_max;
  for (int n = lo; n <= hi; ++n) {
    double r = rep.ratios[n], e = rep.energies[n];
    if (r > 1e-280 && e > 1e-280) {
      xs.push_back(n);
      lr.push_back(std::log(r));
      le.push_back(std::log(e));
    }
  }
  if (xs.size() >= 3) {
    rep.ratio_slope = fit_slope(xs, lr);
    rep.energy_slope = fit_slope(xs, le);
    rep.slopes_ok =
        std::fabs(rep.ratio_slope - rep.ratio_slope_expected) <
            0.05 * std::fabs(rep.ratio_slope_expected) &&
        std::fabs(rep.energy_slope - rep.energy_slope_expected) <
            0.05 * std::fabs(rep.energy_slope_expected);
  }
  return rep;
}

namespace {

struct CaseOneInput {
  VecQ u;        // possibly negated working vector
  VecQ b;        // A_w u for the working vector
  int i_c, j_c;  // corners carrying the two smallest values
};

// Tail descent from an exactly equal pair: w + i + j^n.
std::optional<VanishResult> equal_pair_descent(const HarmonicContext& ctx,
                                               const VecQ& u, const Word& w,
                                               int i, int j, const Rat& eps,
                                               int depth_cap) {
  Word tail;
  tail.push(i);
  for (int n = 0; static_cast<int>(tail.size()) <= depth_cap; ++n) {
    Rat r = cell_ratio(ctx, u, concat(w, tail));
    if (r < eps) {
      VanishResult res;
      res.witness = tail;
      res.ratio = r;
      res.ratio_f = to_double(r);
      res.ok = true;
      res.case_used = 1;
      return res;
    }
    tail.push(j);
  }
  return std::nullopt;
}

}  // namespace

VanishResult find_vanishing_cell(const HarmonicContext& ctx, const VecQ& u,
                                 const Word& w, double eps, int depth_cap,
                                 int dyadic_cap) {
  if (u.size() != ctx.size()) throw std::invalid_argument("boundary size");
  if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
  Rat eps_q(eps);
  eps_q.canonicalize();

  VanishResult best;
  best.ratio = cell_ratio(ctx, u, w);
  best.ratio_f = to_double(best.ratio);

  // The empty witness already qualifies (constant functions land here).
  if (best.ratio < eps_q) {
    best.ok = true;
    best.case_used = 0;
    return best;
  }

  VecQ b = mat_vec(word_matrix(ctx, w), u);

  // An exactly equal boundary pair feeds the symmetric tail directly.
  for (int i = 1; i <= ctx.N + 1; ++i)
    for (int j = i + 1; j <= ctx.N + 1; ++j)
      if (b[i - 1] == b[j - 1]) {
        auto res = equal_pair_descent(ctx, u, w, i, j, eps_q, depth_cap);
        if (res) return *res;
        best.note = "equal-pair descent exhausted depth cap";
        return best;
      }

  // All boundary values distinct from here on.
  std::vector<int> order(ctx.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
  std::sort(order.begin(), order.end(),
            [&](int a, int c) { return b[a] < b[c]; });
  Rat mean(0);
  for (const Rat& x : b) mean += x;
  mean /= Rat(static_cast<long>(ctx.size()));

  // N = 2 with the middle value equal to the mean: pure middle-corner tail.
  if (ctx.N == 2 && b[order[1]] == mean) {
    int jmid = order[1] + 1;
    Word tail;
    for (int n = 1; n <= depth_cap; ++n) {
      tail.push(jmid);
      Rat r = cell_ratio(ctx, u, concat(w, tail));
      if (r < eps_q) {
        VanishResult res;
        res.witness = tail;
        res.ratio = r;
        res.ratio_f = to_double(r);
        res.ok = true;
        res.case_used = 3;
        return res;
      }
    }
    best.note = "middle-corner tail exhausted depth cap";
    return best;
  }

  // Orient so the two smallest values sit below the mean (negating u
  // leaves every energy ratio unchanged).
  CaseOneInput in;
  if (b[order[1]] < mean) {
    in.u = u;
    in.b = b;
    in.i_c = order[0] + 1;
    in.j_c = order[1] + 1;
  } else if (b[order[ctx.N - 1]] > mean) {
    in.u = vec_scale(Rat(-1), u);
    in.b = vec_scale(Rat(-1), b);
    in.i_c = order[ctx.N] + 1;
    in.j_c = order[ctx.N - 1] + 1;
  } else {
    throw std::logic_error("distinct boundary values with no usable side");
  }

  Rat beta1 = in.b[in.i_c - 1];
  Rat beta2 = in.b[in.j_c - 1];
  Rat mean_w = (in.u == u) ? mean : Rat(-mean);

  int l = 1;
  while (l == in.i_c || l == in.j_c) ++l;

  // Density cap for the perturbation direction h_hat = iota(A_w^-1 e_l):
  // |P A_w^-1 e_l|^2 bounds its density ratio everywhere.
  VecQ hvec = mat_vec(mat_inverse(word_matrix(ctx, w)), basis_e(ctx, l));
  VecQ phv = project_P(hvec);
  Rat cap_sq = inner(phv, phv);

  double t_peak =
      M_general(ctx.N, to_double(mean_w), to_double(beta1), to_double(beta2));

  for (int n_dy = 2; n_dy <= dyadic_cap; ++n_dy) {
    // Nearest odd-numerator dyadic to the peak.
    std::uint64_t two_n = std::uint64_t{1} << n_dy;
    double scaled = t_peak * static_cast<double>(two_n);
    long long m = std::llround(scaled);
    if (m % 2 == 0) m += (scaled >= static_cast<double>(m)) ? 1 : -1;
    if (m < 1) m = 1;
    if (m > static_cast<long long>(two_n) - 1)
      m = static_cast<long long>(two_n) - 1;

    // Descent word of the depth-(n_dy - 1) subedge holding m/2^n_dy.
    Word what;
    std::uint64_t mm = static_cast<std::uint64_t>(m);
    unsigned nn = static_cast<unsigned>(n_dy);
    while (nn > 1) {
      std::uint64_t half = std::uint64_t{1} << (nn - 1);
      if (mm < half) {
        what.push(in.i_c);
      } else {
        what.push(in.j_c);
        mm -= half;
      }
      --nn;
    }

    MatQ ahat = word_matrix(ctx, what);
    VecQ sub_b = mat_vec(ahat, in.b);
    VecQ sub_e = ahat.col(static_cast<std::size_t>(l - 1));
    Rat g0 = sub_b[in.i_c - 1] - sub_b[in.j_c - 1];
    Rat g1 = sub_e[in.i_c - 1] - sub_e[in.j_c - 1];
    if (g1 == 0) continue;
    Rat c = -g0 / g1;

    // Budget |c| * |P A_w^-1 e_l| <= sqrt(eps)/4, squared to stay exact.
    if (c * c * cap_sq * 16 > eps_q) continue;

    // (A_{w + what} (u + c A_w^-1 e_l)) has an exact equal pair at
    // (i_c, j_c); the original u's ratio then dips under eps along the
    // symmetric tail since the perturbation contributes < sqrt(eps)/4.
    Word tail = what;
    tail.push(in.i_c);
    while (static_cast<int>(tail.size()) <= depth_cap) {
      Rat r = cell_ratio(ctx, u, concat(w, tail));
      if (r < best.ratio) {
        best.ratio = r;
        best.ratio_f = to_double(r);
        best.witness = tail;
      }
      if (r < eps_q) {
        VanishResult res;
        res.witness = tail;
        res.ratio = r;
        res.ratio_f = to_double(r);
        res.ok = true;
        res.case_used = 2;
        return res;
      }
      tail.push(in.j_c);
    }
  }

  best.note = "budget exhausted before reaching eps";
  return best;
}

}  // namespace sgd
