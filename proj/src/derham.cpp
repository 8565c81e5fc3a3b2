#include "sgd/derham.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace sgd {

namespace {

double f1(double y) { return 1.0 - y / 2.0; }
double f2(double y) { return 0.5 + y / 2.0; }

double g1(int N, double t) { return (1.0 - 2.0 * t) / ((N - 1) * t + 1.0); }
double g2(int N, double t) {
  return (2.0 * t - 1.0) / ((N - 1) * (1.0 - t) + 1.0);
}

Rat g1q(int N, const Rat& t) {
  return (Rat(1) - 2 * t) / (Rat(N - 1) * t + 1);
}
Rat g2q(int N, const Rat& t) {
  return (2 * t - Rat(1)) / (Rat(N - 1) * (Rat(1) - t) + 1);
}

void check_dim(int N) {
  if (N < 2) throw std::invalid_argument("edge analysis needs N >= 2");
}

}  // namespace

double L_eval(int N, double t, int n_iter) {
  check_dim(N);
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("t outside [0,1]");
  // Record the branch orbit, then fold the affine maps back out. The
  // base value F_0(t) = t keeps this the exact n-th iterate of Xi.
  std::vector<int> branch;
  branch.reserve(n_iter);
  double x = t;
  for (int k = 0; k < n_iter; ++k) {
    if (x <= 0.5) {
      branch.push_back(1);
      x = g1(N, x);
    } else {
      branch.push_back(2);
      x = g2(N, x);
    }
    x = std::min(1.0, std::max(0.0, x));
  }
  double y = x;
  for (int k = n_iter; k-- > 0;) y = (branch[k] == 1) ? f1(y) : f2(y);
  return y;
}

DeRhamState derham_grid(int N, int depth, int n_iter) {
  check_dim(N);
  if (depth < 0 || depth > 20) throw std::invalid_argument("grid depth");
  DeRhamState st;
  st.N = N;
  st.depth = depth;
  st.n_iter = n_iter;
  st.error_bound = std::ldexp(1.0, -n_iter);
  std::size_t count = (std::size_t{1} << depth) + 1;
  st.values.resize(count);
  double h = 1.0 / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k)
    st.values[k] = L_eval(N, static_cast<double>(k) * h, n_iter);
  st.monotone = true;
  for (std::size_t k = 0; k + 1 < count; ++k)
    if (st.values[k + 1] < st.values[k]) st.monotone = false;
  return st;
}

Itinerary itinerary_eval(int N, const Rat& t, int max_steps) {
  check_dim(N);
  if (t < 0 || t > 1) throw std::invalid_argument("t outside [0,1]");
  Itinerary it;
  Rat half(1, 2);
  Rat x = t;
  for (int step = 0; step < max_steps; ++step) {
    if (x == half) {
      // Hitting the split point pins the whole tail: 1, 1, 2^inf, whose
      // folded value is 3/4.
      it.symbols.push_back(1);
      it.symbols.push_back(1);
      it.exact = true;
      Rat y(3, 4);
      // Fold back through the prefix recorded before the hit.
      for (std::size_t k = it.symbols.size() - 2; k-- > 0;)
        y = it.symbols[k] == 1 ? Rat(1 - y / 2) : Rat(half + y / 2);
      it.value_exact = y;
      it.value = to_double(y);
      return it;
    }
    if (x == 1) {
      // Absorbing fixed point: tail 2^inf, chi = 1.
      it.symbols.push_back(2);
      it.exact = true;
      Rat y(1);
      for (std::size_t k = it.symbols.size() - 1; k-- > 0;)
        y = it.symbols[k] == 1 ? Rat(1 - y / 2) : Rat(half + y / 2);
      it.value_exact = y;
      it.value = to_double(y);
      return it;
    }
    if (x < half) {
      it.symbols.push_back(1);
      x = g1q(N, x);
    } else {
      it.symbols.push_back(2);
      x = g2q(N, x);
    }
  }
  // Truncated: fold with tail value 1 (any value in [1/2,1] is within
  // 2^-max_steps of the limit after folding).
  double y = 1.0;
  for (std::size_t k = it.symbols.size(); k-- > 0;)
    y = (it.symbols[k] == 1) ? f1(y) : f2(y);
  it.value = y;
  return it;
}

CheckReport inverse_branch_contraction_check(int N) {
  check_dim(N);
  CheckReport rep;
  double lam = static_cast<double>(N + 1) / (N + 3);
  double cap = lam * lam;

  auto g1inv = [N](double s) { return (1.0 - s) / ((N - 1) * s + 2.0); };
  auto g2inv = [N](double s) {
    return (N * s + 1.0) / ((N - 1) * s + 2.0);
  };

  // Endpoint identities, exact.
  {
    auto g1invq = [N](const Rat& s) -> Rat {
      return (Rat(1) - s) / (Rat(N - 1) * s + 2);
    };
    auto g2invq = [N](const Rat& s) -> Rat {
      return (Rat(N) * s + 1) / (Rat(N - 1) * s + 2);
    };
    bool ok = g1invq(Rat(0)) == Rat(1, 2) && g1invq(Rat(1)) == 0 &&
              g2invq(Rat(0)) == Rat(1, 2) && g2invq(Rat(1)) == 1;
    rep.lines.push_back({"inverse-branch-endpoints", ok, N, 0,
                         "g1^-1: 0->1/2, 1->0; g2^-1: 0->1/2, 1->1"});
    // Round trips g_k(g_k^-1(s)) = s on samples.
    bool rt = true;
    for (int m = 0; m <= 8; ++m) {
      Rat s = rat(m, 8);
      if (g1q(N, g1invq(s)) != s) rt = false;
      if (g2q(N, g2invq(s)) != s) rt = false;
    }
    rep.lines.push_back({"inverse-branch-round-trip", rt, N, 0, ""});
  }

  // Closed-form derivative magnitudes of the two-fold compositions
  // g_k^-1 o g_1^-1 and g_k^-1 o g_2^-1, checked against finite
  // differences and against the contraction cap ((N+1)/(N+3))^2.
  auto d_comp1 = [N](double s) {
    double den = (N + 3) + (N - 1) * s;
    return static_cast<double>((N + 1) * (N + 1)) / (den * den);
  };
  auto d_comp2 = [N](double s) {
    double den = (N + 3) + (N * N + N - 2) * s;
    return static_cast<double>((N + 1) * (N + 1)) / (den * den);
  };

  std::function<double(double)> branch[2] = {g1inv, g2inv};
  std::function<double(double)> dcomp[2] = {d_comp1, d_comp2};
  bool cap_ok = true, fd_ok = true;
  const double h = 1e-6;
  for (int m = 0; m <= 64; ++m) {
    double s = static_cast<double>(m) / 64.0;
    if (d_comp1(s) > cap + 1e-15 || d_comp2(s) > cap + 1e-15) cap_ok = false;
    if (s >= h && s <= 1 - h) {
      // The magnitude depends only on the inner branch: both branches
      // share |g'|, so dcomp is indexed by the inner choice alone.
      for (int in_idx : {0, 1})
        for (int out_idx : {0, 1}) {
          const auto& gi = branch[in_idx];
          const auto& go = branch[out_idx];
          double fd = std::fabs((go(gi(s + h)) - go(gi(s - h))) / (2 * h));
          if (std::fabs(fd - dcomp[in_idx](s)) > 1e-8) fd_ok = false;
        }
    }
  }
  rep.lines.push_back({"inverse-branch-derivative-cap", cap_ok, N, 0,
                       "|(g_k^-1 o g_l^-1)'| <= ((N+1)/(N+3))^2"});
  rep.lines.push_back(
      {"inverse-branch-finite-difference", fd_ok, N, 0, "within 1e-8"});
  return rep;
}

EdgeShape classify_edge(int N, const Rat& a_i, const Rat& a_j, const Rat& s) {
  check_dim(N);
  EdgeShape shape;
  if (a_i == a_j && a_j == s) {
    shape.kind = EdgeShapeKind::constant;
    return shape;
  }
  if (a_i <= s && s <= a_j && a_i < a_j) {
    shape.kind = EdgeShapeKind::strictly_increasing;
    return shape;
  }
  if (a_j <= s && s <= a_i && a_j < a_i) {
    shape.kind = EdgeShapeKind::strictly_decreasing;
    return shape;
  }
  if (a_i == a_j) {
    shape.kind = (s > a_i) ? EdgeShapeKind::interior_max
                           : EdgeShapeKind::interior_min;
    shape.extremum_t = 0.5;
    shape.extremum_at_half = true;
    return shape;
  }
  Rat lo = a_i < a_j ? a_i : a_j;
  Rat hi = a_i < a_j ? a_j : a_i;
  if (hi < s) {
    shape.kind = EdgeShapeKind::interior_max;
    shape.extremum_t =
        M_general(N, to_double(s), to_double(a_i), to_double(a_j));
    return shape;
  }
  if (s < lo) {
    // Mirror through negation: the minimum of h is the maximum of -h.
    shape.kind = EdgeShapeKind::interior_min;
    shape.extremum_t =
        M_general(N, -to_double(s), -to_double(a_i), -to_double(a_j));
    return shape;
  }
  throw std::logic_error("edge classification fell through");
}

std::vector<Rat> edge_values(int N, const Rat& a_i, const Rat& a_j,
                             const Rat& s, int depth) {
  check_dim(N);
  if (depth < 0 || depth > 24) throw std::invalid_argument("edge depth");
  struct Cell {
    Rat left, right, mean;
  };
  std::vector<Cell> cells{{a_i, a_j, s}};
  Rat np1(N + 1), np3(N + 3);
  for (int level = 0; level < depth; ++level) {
    std::vector<Cell> next;
    next.reserve(cells.size() * 2);
    for (const Cell& c : cells) {
      Rat mid = (np1 * c.mean + c.left + c.right) / np3;
      Rat sl = (np1 * c.mean + 2 * c.left) / np3;
      Rat sr = (np1 * c.mean + 2 * c.right) / np3;
      next.push_back({c.left, mid, sl});
      next.push_back({mid, c.right, sr});
    }
    cells = std::move(next);
  }
  std::vector<Rat> out;
  out.reserve(cells.size() + 1);
  for (const Cell& c : cells) out.push_back(c.left);
  out.push_back(cells.back().right);
  return out;
}

std::vector<double> edge_values_f(int N, double a_i, double a_j, double s,
                                  int depth) {
  check_dim(N);
  if (depth < 0 || depth > 26) throw std::invalid_argument("edge depth");
  struct Cell {
    double left, right, mean;
  };
  std::vector<Cell> cells{{a_i, a_j, s}};
  double np1 = N + 1, np3 = N + 3;
  for (int level = 0; level < depth; ++level) {
    std::vector<Cell> next;
    next.reserve(cells.size() * 2);
    for (const Cell& c : cells) {
      double mid = (np1 * c.mean + c.left + c.right) / np3;
      next.push_back({c.left, mid, (np1 * c.mean + 2 * c.left) / np3});
      next.push_back({mid, c.right, (np1 * c.mean + 2 * c.right) / np3});
    }
    cells = std::move(next);
  }
  std::vector<double> out;
  out.reserve(cells.size() + 1);
  for (const Cell& c : cells) out.push_back(c.left);
  out.push_back(cells.back().right);
  return out;
}

GridMax brute_max_location(int N, double a_i, double a_j, double s,
                           int depth) {
  std::vector<double> vals = edge_values_f(N, a_i, a_j, s, depth);
  GridMax gm;
  gm.exp = static_cast<unsigned>(depth);
  std::size_t best = 0;
  for (std::size_t k = 1; k < vals.size(); ++k)
    if (vals[k] > vals[best]) best = k;  // strict: ties keep smaller t
  gm.num = best;
  gm.t = static_cast<double>(best) / static_cast<double>(vals.size() - 1);
  gm.value = vals[best];
  return gm;
}

double M_eval(int N, double s, int n_iter) {
  check_dim(N);
  if (s <= 0.0) return 1.0;
  double phi_inv = 1.0 / ((N + 1) * s + 1.0);
  return L_eval(N, phi_inv, n_iter);
}

double M_general(int N, double s, double a_i, double a_j, int n_iter) {
  if (a_i == a_j) throw std::invalid_argument("M_general needs a_i != a_j");
  if (a_i < a_j) return M_eval(N, (s - a_j) / (a_j - a_i), n_iter);
  return 1.0 - M_eval(N, (s - a_i) / (a_i - a_j), n_iter);
}

double M_inverse(int N, double target, int n_iter) {
  check_dim(N);
  if (!(target > 0.5 && target < 1.0))
    throw std::invalid_argument("M_inverse target outside (1/2, 1)");
  double kink = 1.0 / (N + 1);  // M(kink) = 3/4
  double lo, hi;                // M(lo) > target > M(hi); M decreasing
  if (target == 0.75) return kink;
  if (target > 0.75) {
    lo = std::ldexp(1.0, -60);
    hi = kink;
  } else {
    lo = kink;
    hi = 2.0;
    while (M_eval(N, hi, n_iter) > target && hi < 1e12) hi *= 2.0;
  }
  double mlo = M_eval(N, lo, n_iter), mhi = M_eval(N, hi, n_iter);
  const double width_cap = std::ldexp(1.0, -24);
  for (int it = 0; it < 200 && (mlo - mhi) > width_cap; ++it) {
    double mid = 0.5 * (lo + hi);
    double mm = M_eval(N, mid, n_iter);
    if (mm > target) {
      lo = mid;
      mlo = mm;
    } else {
      hi = mid;
      mhi = mm;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace sgd
