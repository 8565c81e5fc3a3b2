#include "sgd/cone.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "sgd/energy.hpp"

namespace sgd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MatQ projector(int n) {
  MatQ p(n, n);
  Rat off(-1, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) p(r, c) = (r == c) ? 1 + off : off;
  return p;
}

// Generator tables for the corner pair (1, 2); other pairs arise by
// permuting coordinates. Every generator has zero coordinate sum.
std::vector<VecQ> base_generators(int N) {
  if (N == 2) return {{1, -3, 2}, {3, -1, -2}};
  if (N == 3) return {{-7, 2, 2, 3}, {-1, 4, -2, -1}, {-3, 3, 4, -4}};
  throw std::domain_error("invariant cone generators are known for N = 2, 3");
}

// p[s-1] is where corner s of the base pair (1, 2) moves: 1 -> i, 2 -> j,
// the remaining corners keep their relative order.
std::vector<int> corner_permutation(int N, int i, int j) {
  std::vector<int> p = {i, j};
  for (int s = 1; s <= N + 1; ++s)
    if (s != i && s != j) p.push_back(s);
  return p;
}

MatQ generator_matrix(const ConeFrame& frame) {
  int n = frame.N + 1;
  MatQ g(n, frame.N);
  for (int l = 0; l < frame.N; ++l)
    for (int r = 0; r < n; ++r) g(r, l) = frame.gens[l][r];
  return g;
}

MatQ coefficient_rows(const ConeFrame& frame, const MatQ& t) {
  MatQ c(frame.N, frame.N);
  for (int l = 0; l < frame.N; ++l) {
    VecQ image = mat_vec(t, frame.gens[l]);
    VecQ coord = frame.coords(image);
    for (int m = 0; m < frame.N; ++m) {
      if (coord[m] <= 0)
        throw std::logic_error("cone is not invariant under the compressed maps");
      c(l, m) = coord[m];
    }
  }
  return c;
}

double pairwise_max_hilbert(const std::vector<VecF>& rays) {
  double best = 0;
  for (std::size_t a = 0; a < rays.size(); ++a)
    for (std::size_t b = a + 1; b < rays.size(); ++b)
      best = std::max(best, hilbert_metric_coords(rays[a], rays[b]));
  return best;
}

std::vector<VecF> float_rows(const MatF& m) {
  std::vector<VecF> rows;
  for (int r = 0; r < static_cast<int>(m.rows()); ++r) rows.push_back(m.row(r));
  return rows;
}

std::vector<VecF> float_cols(const MatF& m) {
  std::vector<VecF> cols;
  for (int c = 0; c < static_cast<int>(m.cols()); ++c) cols.push_back(m.col(c));
  return cols;
}

}  // namespace

MatQ build_Tk(const HarmonicContext& ctx, int k) {
  check_symbol(k, ctx.N);
  MatQ p = projector(ctx.size());
  return mat_mul(mat_mul(p, ctx.A[k - 1]), p);
}

VecQ ConeFrame::coords(const VecQ& x) const {
  int n = N + 1;
  if (static_cast<int>(x.size()) != n)
    throw std::invalid_argument("coords: wrong vector length");
  VecQ rhs;
  for (int r = 0; r < n; ++r)
    if (r != coord_drop) rhs.push_back(x[r]);
  VecQ c = mat_vec(coord_inv, rhs);
  // The dropped equation certifies x lies in the generators' span.
  Rat rest = 0;
  for (int l = 0; l < N; ++l) rest += gens[l][coord_drop] * c[l];
  if (rest != x[coord_drop])
    throw std::invalid_argument("coords: vector is outside the generator span");
  return c;
}

VecQ ConeFrame::interior_coords(const VecQ& x) const {
  VecQ c = coords(x);
  Rat sum = 0;
  for (const Rat& v : c) sum += v;
  VecQ b(N, Rat());
  b[0] = Rat(N + 1) * c[0] - sum;
  for (int m = 1; m < N; ++m) b[m] = c[m] - c[0];
  return b;
}

const MatQ& ConeFrame::coeff(int symbol) const {
  if (symbol == i) return Ci;
  if (symbol == j) return Cj;
  throw std::invalid_argument("symbol outside the cone's edge pair");
}

const MatF& ConeFrame::coeff_f(int symbol) const {
  if (symbol == i) return Cif;
  if (symbol == j) return Cjf;
  throw std::invalid_argument("symbol outside the cone's edge pair");
}

ConeFrame canonical_cone(const HarmonicContext& ctx, int i, int j) {
  check_symbol(i, ctx.N);
  check_symbol(j, ctx.N);
  if (i == j) throw std::invalid_argument("cone needs two distinct corners");

  ConeFrame frame;
  frame.N = ctx.N;
  frame.i = i;
  frame.j = j;

  std::vector<VecQ> base = base_generators(ctx.N);
  std::vector<int> perm = corner_permutation(ctx.N, i, j);
  for (const VecQ& g : base) {
    VecQ moved(ctx.size(), Rat());
    for (int s = 1; s <= ctx.N + 1; ++s) moved[perm[s - 1] - 1] = g[s - 1];
    frame.gens.push_back(moved);
  }
  frame.anchor = VecQ(ctx.size(), Rat());
  for (const VecQ& g : frame.gens) frame.anchor = vec_add(frame.anchor, g);

  MatQ g = generator_matrix(frame);
  for (int drop = ctx.N; drop >= 0; --drop) {
    MatQ sq(ctx.N, ctx.N);
    for (int r = 0, rr = 0; r <= ctx.N; ++r) {
      if (r == drop) continue;
      for (int c = 0; c < ctx.N; ++c) sq(rr, c) = g(r, c);
      ++rr;
    }
    if (determinant(sq) != 0) {
      frame.coord_drop = drop;
      frame.coord_inv = mat_inverse(sq);
      break;
    }
  }
  if (frame.coord_drop < 0)
    throw std::logic_error("cone generators are linearly dependent");

  frame.Ti = build_Tk(ctx, i);
  frame.Tj = build_Tk(ctx, j);
  frame.Ci = coefficient_rows(frame, frame.Ti);
  frame.Cj = coefficient_rows(frame, frame.Tj);
  frame.Cif = to_float(frame.Ci);
  frame.Cjf = to_float(frame.Cj);
  return frame;
}

double hilbert_metric_coords(const VecF& cx, const VecF& cy) {
  double lo = kInf, hi = 0;
  bool any = false;
  for (std::size_t l = 0; l < cx.size(); ++l) {
    if (cx[l] < 0 || cy[l] < 0)
      throw std::domain_error("hilbert metric: argument outside cone");
    if (cx[l] == 0 && cy[l] == 0) continue;
    if (cx[l] == 0 || cy[l] == 0) return kInf;
    double r = cx[l] / cy[l];
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    any = true;
  }
  if (!any) return 0;
  return std::log(hi / lo);
}

double hilbert_metric(const ConeFrame& frame, const VecQ& x, const VecQ& y) {
  VecQ cx = frame.coords(x), cy = frame.coords(y);
  return hilbert_metric_coords(to_float(cx), to_float(cy));
}

ContractionEstimate contraction_estimate(const ConeFrame& frame,
                                         std::uint64_t seed, int samples) {
  ContractionEstimate est;
  est.delta_i = pairwise_max_hilbert(float_rows(frame.Cif));
  est.delta_j = pairwise_max_hilbert(float_rows(frame.Cjf));
  est.tau_i = std::tanh(est.delta_i / 4);
  est.tau_j = std::tanh(est.delta_j / 4);
  est.tau_joint = std::max(est.tau_i, est.tau_j);

  std::vector<VecF> dual_i = float_cols(frame.Cif);
  std::vector<VecF> dual_j = float_cols(frame.Cjf);
  est.delta_dual_i = pairwise_max_hilbert(dual_i);
  est.delta_dual_j = pairwise_max_hilbert(dual_j);
  est.tau_dual_i = std::tanh(est.delta_dual_i / 4);
  est.tau_dual_j = std::tanh(est.delta_dual_j / 4);
  est.tau_dual_joint = std::max(est.tau_dual_i, est.tau_dual_j);
  std::vector<VecF> both = dual_i;
  both.insert(both.end(), dual_j.begin(), dual_j.end());
  est.delta_dual_diameter = pairwise_max_hilbert(both);

  if (samples <= 0) return est;

  std::mt19937_64 rng{seed};
  std::uniform_real_distribution<double> spread(-2.0, 2.0);
  double sup_i = 0, sup_j = 0;
  for (int s = 0; s < samples; ++s) {
    VecF cx(frame.N), cy(frame.N);
    for (int l = 0; l < frame.N; ++l) {
      cx[l] = std::exp(spread(rng));
      cy[l] = std::exp(spread(rng));
    }
    double d0 = hilbert_metric_coords(cx, cy);
    if (d0 < 1e-9) continue;
    // Image coordinates under T_k: c -> C_k^t c.
    VecF ix(frame.N, 0.0), iy(frame.N, 0.0), jx(frame.N, 0.0), jy(frame.N, 0.0);
    for (int m = 0; m < frame.N; ++m)
      for (int l = 0; l < frame.N; ++l) {
        ix[m] += cx[l] * frame.Cif(l, m);
        iy[m] += cy[l] * frame.Cif(l, m);
        jx[m] += cx[l] * frame.Cjf(l, m);
        jy[m] += cy[l] * frame.Cjf(l, m);
      }
    sup_i = std::max(sup_i, hilbert_metric_coords(ix, iy) / d0);
    sup_j = std::max(sup_j, hilbert_metric_coords(jx, jy) / d0);
  }
  est.empirical_sup_i = sup_i;
  est.empirical_sup_j = sup_j;
  est.empirical_ok = sup_i <= est.tau_i + 1e-9 && sup_j <= est.tau_j + 1e-9;
  return est;
}

RhoResult rho_limit(const ConeFrame& frame, const SymbolStream& omega,
                    double tol, int max_iter) {
  ContractionEstimate est = contraction_estimate(frame, 0, 0);
  double diam = est.delta_dual_diameter;
  double tau = est.tau_dual_joint;

  RhoResult res;
  int n = frame.N;
  MatF prod = MatF::identity(n);
  VecF ones(n, 1.0);
  VecF prev(n, 1.0 / n);
  res.bound_majorizes = true;
  for (int step = 1; step <= max_iter; ++step) {
    int sym = omega.at(step - 1);
    prod = mat_mul(prod, frame.coeff_f(sym));
    // psi_n in dual coordinates: P_n applied to the all-ones start.
    VecF v = mat_vec(prod, ones);
    double sum = 0;
    for (double x : v) sum += x;
    for (double& x : v) x /= sum;
    double diff = 0;
    for (int l = 0; l < n; ++l) diff = std::max(diff, std::abs(v[l] - prev[l]));
    // After step applications both iterates sit in the image cone, so the
    // successive difference is controlled one step behind the limit bound.
    if (step >= 2) {
      double step_bound = std::expm1(diam * std::pow(tau, step - 2));
      if (diff > step_bound + 1e-12) res.bound_majorizes = false;
    }
    res.final_bound = std::expm1(diam * std::pow(tau, step - 1));
    res.last_diff = diff;
    res.iters = step;
    res.rho_dual = v;
    prev = v;
    if (diff < tol && res.final_bound < tol) {
      res.converged = true;
      break;
    }
  }

  if (auto tail = omega.eventually_constant()) {
    int k = *tail;
    if (k == frame.i || k == frame.j) {
      // Closed form for an eventually constant word: the repeating symbol's
      // transition functional (d_k, .) spans the dominant dual eigenline
      // ((d_k, T_k x) = lambda_2 (d_k, x) exactly), and the head folds it
      // back through exact coefficient products. Against zero-sum
      // generators, (d_k, a_l) = -(N+1) a_l[k-1].
      VecQ dual(n, Rat());
      for (int l = 0; l < n; ++l)
        dual[l] = Rat(-(frame.N + 1)) * frame.gens[l][k - 1];
      const Word& head = omega.head();
      for (std::size_t idx = head.size(); idx-- > 0;)
        dual = mat_vec(frame.coeff(head.at(idx)), dual);
      Rat sum = 0;
      for (const Rat& x : dual) sum += x;
      if (sum != 0) {
        double err = 0;
        for (int l = 0; l < n; ++l)
          err = std::max(err,
                         std::abs(res.rho_dual[l] - to_double(dual[l] / sum)));
        res.exact_check_err = err;
      }
    }
  }
  return res;
}

EdgeDensityLimit density_along(const HarmonicContext& ctx,
                               const ConeFrame& frame, const EdgeAddress& edge,
                               const VecQ& u, const SymbolStream& omega,
                               double tol) {
  bool same = edge.i == frame.i && edge.j == frame.j;
  bool swapped = edge.i == frame.j && edge.j == frame.i;
  if (!same && !swapped)
    throw std::invalid_argument("edge corners do not match the cone frame");

  MatQ aw = word_matrix(ctx, edge.prefix);
  VecQ alpha = frame.interior_coords(project_P(mat_vec(aw, u)));

  std::vector<VecQ> beta;
  for (int k = 1; k <= ctx.N + 1; ++k)
    beta.push_back(frame.interior_coords(project_P(mat_vec(aw, basis_e(ctx, k)))));

  EdgeDensityLimit out;
  out.rho = rho_limit(frame, omega, tol);
  out.alpha = to_float(alpha);
  out.lambda = VecF(frame.N, 1.0);
  for (int m = 1; m < frame.N; ++m) out.lambda[m] = 1.0 + out.rho.rho_dual[m];

  double num = 0;
  for (int m = 0; m < frame.N; ++m) num += out.alpha[m] * out.lambda[m];
  double den = 0;
  for (const VecQ& b : beta) {
    VecF bf = to_float(b);
    double s = 0;
    for (int m = 0; m < frame.N; ++m) s += bf[m] * out.lambda[m];
    den += s * s;
  }
  if (den <= 0) throw std::logic_error("degenerate reference density");
  out.value = num * num / den;
  return out;
}

ContinuityReport continuity_modulus(const HarmonicContext& ctx,
                                    const ConeFrame& frame,
                                    const EdgeAddress& edge, const VecQ& u,
                                    int m_max, double tol) {
  ContinuityReport rep;
  std::vector<double> xs, ys;
  Word head;
  for (int m = 1; m <= m_max; ++m) {
    head.push(m % 2 == 1 ? frame.i : frame.j);
    double a = density_along(ctx, frame, edge, u,
                             SymbolStream::eventually(head, frame.i), tol)
                   .value;
    double b = density_along(ctx, frame, edge, u,
                             SymbolStream::eventually(head, frame.j), tol)
                   .value;
    double gap = std::abs(a - b);
    rep.gaps.push_back(gap);
    if (gap > 1e-11) {
      xs.push_back(m);
      ys.push_back(std::log(gap));
    }
  }
  if (xs.size() >= 3) rep.fitted_rate = std::exp(fit_slope(xs, ys));

  ContractionEstimate est = contraction_estimate(frame, 0, 0);
  rep.tau_reference = est.tau_dual_joint;
  rep.rate_ok = rep.fitted_rate > 0 && rep.fitted_rate < 1.0 &&
                rep.fitted_rate <= est.tau_dual_joint + 0.05;

  Word shared;
  rep.quotient_err = 0;
  for (int m = 0; m <= std::min(m_max, 6); ++m) {
    Word wa = shared, wb = shared;
    wa.push(frame.i);
    wb.push(frame.j);
    double a = density_along(ctx, frame, edge, u,
                             SymbolStream::eventually(wa, frame.j), tol)
                   .value;
    double b = density_along(ctx, frame, edge, u,
                             SymbolStream::eventually(wb, frame.i), tol)
                   .value;
    rep.quotient_err = std::max(rep.quotient_err, std::abs(a - b));
    shared.push(m % 2 == 0 ? frame.i : frame.j);
  }
  rep.quotient_ok = rep.quotient_err <= 1e-9;
  return rep;
}

}  // namespace sgd
