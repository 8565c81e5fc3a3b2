#include "sgd/edge_density.hpp"

#include <cmath>
#include <stdexcept>

namespace sgd {

Rat vertex_density(const HarmonicContext& ctx, const VecQ& u,
                   const VertexRef& vertex) {
  check_word(vertex.word, ctx.N);
  check_symbol(vertex.corner, ctx.N);
  MatQ aw = word_matrix(ctx, vertex.word);
  VecQ td = mat_vec(transpose(aw), ctx.d[vertex.corner - 1]);
  Rat num = inner(td, u);  // (d_c, A_w u) = (tA_w d_c, u)
  Rat den = inner(td, td);
  if (den == 0) throw std::logic_error("vanishing dual norm");
  return num * num / den;
}

double vertex_density_f(const HarmonicContext& ctx, const VecF& u,
                        const VertexRef& vertex) {
  check_word(vertex.word, ctx.N);
  check_symbol(vertex.corner, ctx.N);
  MatF aw = word_matrix_float(ctx, vertex.word);
  VecF td = mat_vec(transpose(aw), ctx.df[vertex.corner - 1]);
  double num = inner(td, u);
  double den = inner(td, td);
  return num * num / den;
}

Rat delta_at_vertex(const HarmonicContext& ctx, const VecQ& u, const Word& w,
                    int i, int j) {
  check_symbol(i, ctx.N);
  check_symbol(j, ctx.N);
  if (i == j) return vertex_density(ctx, u, VertexRef{w, i});
  return vertex_density(ctx, u, VertexRef{concat(w, Word({i})), j});
}

VecQ cross_dets(const HarmonicContext& ctx, const VecQ& u, const MatQ& aw,
                int i, int j) {
  MatQ taw = transpose(aw);
  VecQ ti = mat_vec(taw, ctx.d[i - 1]);
  VecQ tj = mat_vec(taw, ctx.d[j - 1]);
  Rat pi = inner(ti, u), pj = inner(tj, u);
  VecQ dets(ctx.size());
  // (d_i, A e_k) is the k-th entry of tA d_i.
  for (std::size_t k = 0; k < ctx.size(); ++k)
    dets[k] = pi * tj[k] - ti[k] * pj;
  return dets;
}

Rat delta_gap(const HarmonicContext& ctx, const VecQ& u, const Word& w, int i,
              int j) {
  check_symbol(i, ctx.N);
  check_symbol(j, ctx.N);
  if (i == j) throw std::invalid_argument("gap needs distinct corners");
  MatQ aw = word_matrix(ctx, w);
  MatQ taw = transpose(aw);
  VecQ ti = mat_vec(taw, ctx.d[i - 1]);
  VecQ tj = mat_vec(taw, ctx.d[j - 1]);
  Rat pi = inner(ti, u), pj = inner(tj, u);
  Rat ni = inner(ti, ti), nj = inner(tj, tj);
  if (ni == 0 || nj == 0) throw std::logic_error("vanishing dual norm");
  Rat sum(0);
  for (std::size_t k = 0; k < ctx.size(); ++k) {
    Rat s = pi * tj[k] + ti[k] * pj;
    Rat d = pi * tj[k] - ti[k] * pj;
    sum += s * d;
  }
  return sum / (ni * nj);
}

bool det_identity_check(const HarmonicContext& ctx, const VecQ& u,
                        const Word& w, const Word& wprime, int i, int j) {
  for (int s : wprime.syms)
    if (s != i && s != j)
      throw std::invalid_argument("extension word must stay on the edge pair");
  MatQ aw = word_matrix(ctx, w);
  MatQ awp = mat_mul(word_matrix(ctx, wprime), aw);  // A_{w w'} = A_{w'} A_w
  VecQ base = cross_dets(ctx, u, aw, i, j);
  VecQ ext = cross_dets(ctx, u, awp, i, j);
  Rat factor = rat_pow(Rat(ctx.N + 1) / (Rat(ctx.N + 3) * Rat(ctx.N + 3)),
                       static_cast<long>(wprime.size()));
  for (std::size_t k = 0; k < ctx.size(); ++k)
    if (ext[k] != factor * base[k]) return false;
  return true;
}

bool dual_norm_lower_bound_check(const HarmonicContext& ctx,
                                 const Word& wprime, int i, int j, int l) {
  check_symbol(i, ctx.N);
  check_symbol(j, ctx.N);
  if (i == j) throw std::invalid_argument("needs distinct edge corners");
  if (l != i && l != j) throw std::invalid_argument("l must be i or j");
  for (int s : wprime.syms)
    if (s != i && s != j)
      throw std::invalid_argument("word must stay on the edge pair");
  long n = static_cast<long>(wprime.size());
  MatQ awp = word_matrix(ctx, wprime);
  VecQ td = mat_vec(transpose(awp), ctx.d[l - 1]);
  Rat lhs = inner(td, td);
  Rat lam2 = Rat(ctx.N + 1) / Rat(ctx.N + 3);
  Rat rhs = Rat(ctx.N + 1) * rat_pow(lam2, 2 * n) *
            rat_pow(Rat(1, ctx.N), n);
  return lhs >= rhs;
}

bool prefix_norm_floor_check(const HarmonicContext& ctx, const Word& w,
                             const Word& wprime, int l) {
  check_symbol(l, ctx.N);
  MatQ awp = word_matrix(ctx, wprime);
  MatQ awwp = mat_mul(awp, word_matrix(ctx, w));
  VecQ base = mat_vec(transpose(awp), ctx.d[l - 1]);
  VecQ ext = mat_vec(transpose(awwp), ctx.d[l - 1]);
  Rat floor = rat_pow(Rat(1, ctx.N + 3), 2 * static_cast<long>(w.size()));
  return inner(ext, ext) >= floor * inner(base, base);
}

CheckReport psd_floor_check(const HarmonicContext& ctx, int k) {
  check_symbol(k, ctx.N);
  int N = ctx.N;
  CheckReport rep;
  Rat np3sq = Rat((N + 3) * (N + 3));
  MatQ B = mat_mul(ctx.A[k - 1], transpose(ctx.A[k - 1]));
  for (std::size_t r = 0; r < ctx.size(); ++r)
    for (std::size_t c = 0; c < ctx.size(); ++c) {
      B(r, c) *= np3sq;
      if (r == c) B(r, c) -= 1;
    }

  // Reduce to the k = 1 arrangement by the simultaneous swap of slot 1
  // and slot k (the A-family is permutation-equivariant).
  MatQ B1(ctx.size(), ctx.size());
  auto perm = [&](std::size_t x) -> std::size_t {
    if (x == 0) return static_cast<std::size_t>(k - 1);
    if (x == static_cast<std::size_t>(k - 1)) return 0;
    return x;
  };
  for (std::size_t r = 0; r < ctx.size(); ++r)
    for (std::size_t c = 0; c < ctx.size(); ++c)
      B1(r, c) = B(perm(r), perm(c));

  Rat minor1 = leading_minor(B1, 1);
  Rat minor2 = leading_minor(B1, 2);
  Rat expect1 = Rat(N) * N + 6 * N + 8;
  Rat expect2 = Rat(N) * N * N + 8 * N * N + 20 * N + 12;
  rep.lines.push_back({"psd-floor-minor-1", minor1 == expect1, N, k,
                       "expected N^2+6N+8 = " + rat_to_string(expect1)});
  rep.lines.push_back({"psd-floor-minor-2", minor2 == expect2, N, k,
                       "expected N^3+8N^2+20N+12 = " + rat_to_string(expect2)});
  bool zeros = true;
  for (std::size_t m = 3; m <= ctx.size(); ++m)
    if (leading_minor(B1, m) != 0) zeros = false;
  rep.lines.push_back(
      {"psd-floor-higher-minors-vanish", zeros, N, k, "ranks cap at 2"});
  return rep;
}

HolderBoundReport holder_bound_check(const HarmonicContext& ctx, const VecQ& u,
                                     const Word& w, int i, int j, int n_cap) {
  check_symbol(i, ctx.N);
  check_symbol(j, ctx.N);
  if (i == j) throw std::invalid_argument("needs distinct corners");
  if (n_cap < 0 || n_cap > 14) throw std::invalid_argument("n_cap range");
  int N = ctx.N;
  HolderBoundReport rep;
  rep.n_cap = n_cap;

  MatQ aw = word_matrix(ctx, w);
  VecQ awu = mat_vec(aw, u);
  VecQ dets = cross_dets(ctx, u, aw, i, j);
  Rat awu_sq = inner(awu, awu);
  Rat c_lb(0);
  double c_f = 0;
  for (std::size_t k = 0; k < ctx.size(); ++k) {
    VecQ col = aw.col(k);
    Rat prod_sq = awu_sq * inner(col, col);
    Rat absdet = dets[k] < 0 ? Rat(-dets[k]) : dets[k];
    c_lb += absdet * sqrt_lower(prod_sq, 64);
    c_f += to_double(absdet) * std::sqrt(to_double(prod_sq));
  }
  Rat pref = 2 * rat_pow(Rat(N + 3), 4 * static_cast<long>(w.size()));
  c_lb *= pref;
  c_f *= to_double(pref);
  rep.c_lower = c_lb;
  rep.c_value = c_f;

  Rat decay = Rat(N, N + 1);
  Rat base_bound = c_lb / Rat(N + 1);

  // DFS over {i,j}^{<= n_cap} carrying A_{w w'}.
  struct Frame {
    Word wp;
    MatQ a;
    Rat bound;
  };
  rep.all_ok = true;
  std::vector<Frame> stack{{Word{}, aw, base_bound}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    // Gap at w w' from the carried matrix.
    MatQ ta = transpose(f.a);
    VecQ ti = mat_vec(ta, ctx.d[i - 1]);
    VecQ tj = mat_vec(ta, ctx.d[j - 1]);
    Rat pi = inner(ti, u), pj = inner(tj, u);
    Rat ni = inner(ti, ti), nj = inner(tj, tj);
    Rat sum(0);
    for (std::size_t k = 0; k < ctx.size(); ++k)
      sum += (pi * tj[k] + ti[k] * pj) * (pi * tj[k] - ti[k] * pj);
    Rat gap = sum / (ni * nj);
    Rat absgap = gap < 0 ? Rat(-gap) : gap;
    if (absgap > f.bound) {
      rep.all_ok = false;
      rep.worst = f.wp;
    }
    if (f.bound > 0) {
      double ratio = to_double(absgap / f.bound);
      if (ratio > rep.max_ratio) {
        rep.max_ratio = ratio;
        if (rep.all_ok) rep.worst = f.wp;
      }
    }
    if (static_cast<int>(f.wp.size()) < n_cap) {
      for (int s : {i, j}) {
        Frame child;
        child.wp = f.wp;
        child.wp.push(s);
        child.a = mat_mul(ctx.A[s - 1], f.a);
        child.bound = f.bound * decay;
        stack.push_back(std::move(child));
      }
    }
  }
  return rep;
}

std::vector<EdgeDensitySample> edge_profile(const HarmonicContext& ctx,
                                            const VecQ& u,
                                            const EdgeAddress& edge, int depth,
                                            const NumericPolicy& policy) {
  check_word(edge.prefix, ctx.N);
  check_symbol(edge.i, ctx.N);
  check_symbol(edge.j, ctx.N);
  bool exact = policy.mode == NumericPolicy::Mode::exact;
  if (depth < 0 || depth > (exact ? 12 : 20))
    throw std::invalid_argument("profile depth beyond cap");

  std::size_t count = (std::size_t{1} << depth) + 1;
  std::vector<EdgeDensitySample> out(count);
  std::uint64_t den = std::uint64_t{1} << depth;
  for (std::size_t k = 0; k < count; ++k) {
    out[k].t_num = k;
    out[k].t_den = den;
    out[k].t = static_cast<double>(k) / static_cast<double>(den);
  }

  if (exact) {
    // Recursive descent carrying exact A_W; interior grid points are
    // written by both adjacent subedges and must agree exactly.
    std::vector<Rat> vals(count);
    std::vector<bool> seen(count, false);
    auto emit = [&](std::size_t idx, const Rat& v) {
      if (seen[idx]) {
        if (vals[idx] != v)
          throw std::logic_error("edge profile representations disagree");
        return;
      }
      seen[idx] = true;
      vals[idx] = v;
    };
    auto density_corner = [&](const MatQ& a, int corner) -> Rat {
      VecQ td = mat_vec(transpose(a), ctx.d[corner - 1]);
      Rat num = inner(td, u);
      return num * num / inner(td, td);
    };
    struct Frame {
      MatQ a;
      std::size_t lo, hi;
    };
    std::vector<Frame> stack{
        {word_matrix(ctx, edge.prefix), 0, count - 1}};
    while (!stack.empty()) {
      Frame f = std::move(stack.back());
      stack.pop_back();
      if (f.hi - f.lo == 1 || f.lo == f.hi) {
        emit(f.lo, density_corner(f.a, edge.i));
        emit(f.hi, density_corner(f.a, edge.j));
        continue;
      }
      std::size_t mid = (f.lo + f.hi) / 2;
      stack.push_back({mat_mul(ctx.A[edge.i - 1], f.a), f.lo, mid});
      stack.push_back({mat_mul(ctx.A[edge.j - 1], f.a), mid, f.hi});
    }
    for (std::size_t k = 0; k < count; ++k) {
      out[k].density = to_double(vals[k]);
      out[k].density_exact = rat_to_string(vals[k]);
    }
    return out;
  }

  VecF uf = to_float(u);
  std::vector<double> vals(count, 0.0);
  std::vector<bool> seen(count, false);
  auto density_corner = [&](const MatF& a, int corner) {
    VecF td = mat_vec(transpose(a), ctx.df[corner - 1]);
    double num = inner(td, uf);
    return num * num / inner(td, td);
  };
  struct Frame {
    MatF a;
    std::size_t lo, hi;
  };
  std::vector<Frame> stack{
      {word_matrix_float(ctx, edge.prefix), 0, count - 1}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.hi - f.lo == 1 || f.lo == f.hi) {
      if (!seen[f.lo]) {
        seen[f.lo] = true;
        vals[f.lo] = density_corner(f.a, edge.i);
      }
      if (!seen[f.hi]) {
        seen[f.hi] = true;
        vals[f.hi] = density_corner(f.a, edge.j);
      }
      continue;
    }
    std::size_t mid = (f.lo + f.hi) / 2;
    stack.push_back({mat_mul(ctx.Af[edge.i - 1], f.a), f.lo, mid});
    stack.push_back({mat_mul(ctx.Af[edge.j - 1], f.a), mid, f.hi});
  }
  for (std::size_t k = 0; k < count; ++k) out[k].density = vals[k];
  return out;
}

HolderReport empirical_holder(const std::vector<EdgeDensitySample>& profile,
                              double theta) {
  if (profile.size() < 2)
    throw std::invalid_argument("profile needs at least two samples");
  HolderReport rep;
  rep.theta = theta;
  std::size_t n = profile.size();
  // Uniform grid: precompute |t - t'|^theta by integer separation.
  double h = profile[1].t - profile[0].t;
  std::vector<double> powtab(n, 0.0);
  for (std::size_t k = 1; k < n; ++k)
    powtab[k] = std::pow(static_cast<double>(k) * h, theta);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      double q = std::fabs(profile[b].density - profile[a].density) /
                 powtab[b - a];
      if (q > rep.sup_quotient) {
        rep.sup_quotient = q;
        rep.t1 = profile[a].t;
        rep.t2 = profile[b].t;
      }
    }
  return rep;
}

double holder_exponent(int N) {
  return std::log2(1.0 + 1.0 / static_cast<double>(N));
}

}  // namespace sgd
