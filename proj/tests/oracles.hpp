#pragma once

// Independent reference computations used by the test suite. Everything
// here is derived from first principles (unit-conductance networks,
// pairwise differences, exhaustive scans) without touching the tabulated
// extension matrices or any closed form under test, so agreement is
// meaningful evidence rather than a tautology.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "sgd/derham.hpp"
#include "sgd/edge_density.hpp"
#include "sgd/energy.hpp"
#include "sgd/harmonic.hpp"
#include "sgd/linalg.hpp"
#include "sgd/rational.hpp"
#include "sgd/word.hpp"

namespace oracle {

using sgd::MatF;
using sgd::MatQ;
using sgd::Rat;
using sgd::VecF;
using sgd::VecQ;

// ---------------------------------------------------------------------------
// Level-1 network of the N-corner gasket. Vertices: the N+1 outer corners
// and one contact point for every unordered corner pair {a, b} (the point
// shared by subcells a and b). Each subcell contributes a complete graph
// with unit conductances on its own N+1 vertices: corner a plus the
// contact points {a, b}, b != a.

inline int pair_slot(int a, int b, int n) {
  // Position of the unordered pair {a, b}, 0 <= a < b < n, in the list
  // (0,1), (0,2), ..., (0,n-1), (1,2), ...
  if (a > b) std::swap(a, b);
  return a * n - a * (a + 1) / 2 + (b - a - 1);
}

// Graph Laplacian of the level-1 network, corners first, contacts after.
inline MatQ level1_laplacian(int N) {
  int corners = N + 1;
  int contacts = corners * N / 2;
  int total = corners + contacts;
  MatQ L(total, total);
  auto add_edge = [&](int x, int y) {
    L(x, x) += 1;
    L(y, y) += 1;
    L(x, y) -= 1;
    L(y, x) -= 1;
  };
  for (int cell = 0; cell < corners; ++cell) {
    std::vector<int> verts{cell};
    for (int other = 0; other < corners; ++other)
      if (other != cell)
        verts.push_back(corners + pair_slot(cell, other, corners));
    for (std::size_t x = 0; x < verts.size(); ++x)
      for (std::size_t y = x + 1; y < verts.size(); ++y)
        add_edge(verts[x], verts[y]);
  }
  return L;
}

// Exact minimizer of the level-1 energy with the given corner values:
// returns the contact-point values.
inline VecQ minimize_contacts(int N, const MatQ& L, const VecQ& corner_vals) {
  int corners = N + 1;
  int contacts = corners * N / 2;
  MatQ S(contacts, contacts);
  VecQ rhs(contacts, Rat(0));
  for (int r = 0; r < contacts; ++r) {
    for (int c = 0; c < contacts; ++c) S(r, c) = L(corners + r, corners + c);
    for (int c = 0; c < corners; ++c)
      rhs[r] -= L(corners + r, c) * corner_vals[c];
  }
  return sgd::solve_linear(S, rhs);
}

// Harmonic extension matrix of subcell k (1-based) built purely from the
// network minimizer: row r is the minimizer's value at the r-th vertex
// of subcell k (its own corner in slot k, contact points elsewhere).
inline MatQ extension_matrix(int N, int k) {
  int corners = N + 1;
  MatQ L = level1_laplacian(N);
  MatQ out(corners, corners);
  for (int col = 0; col < corners; ++col) {
    VecQ e(corners, Rat(0));
    e[col] = 1;
    VecQ m = minimize_contacts(N, L, e);
    for (int r = 0; r < corners; ++r) {
      if (r == k - 1)
        out(r, col) = e[r];
      else
        out(r, col) = m[pair_slot(k - 1, r, corners)];
    }
  }
  return out;
}

// Reverse-order product for a word, built from the oracle matrices.
inline MatQ extension_word(int N, const sgd::Word& w) {
  int corners = N + 1;
  MatQ prod = MatQ::identity(corners);
  for (int s : w.syms) prod = sgd::mat_mul(extension_matrix(N, s), prod);
  return prod;
}

// Quadratic energy form as an explicit sum over vertex pairs.
inline Rat pair_energy(const VecQ& u, const VecQ& v) {
  Rat s(0);
  for (std::size_t p = 0; p < u.size(); ++p)
    for (std::size_t q = p + 1; q < u.size(); ++q)
      s += (u[p] - u[q]) * (v[p] - v[q]);
  return s;
}

inline Rat pair_energy(const VecQ& u) { return pair_energy(u, u); }

// The one-step energy drop of the network: the trace of the level-1
// energy onto the corners equals ratio * (corner pair form), and the
// ratio is a single scalar. Throws if the trace is not proportional,
// which would mean the network is not energy-renormalizable.
inline Rat energy_drop_ratio(int N) {
  int corners = N + 1;
  int contacts = corners * N / 2;
  MatQ L = level1_laplacian(N);
  MatQ Lmm(contacts, contacts), Lmc(contacts, corners);
  MatQ Lcc(corners, corners);
  for (int r = 0; r < contacts; ++r) {
    for (int c = 0; c < contacts; ++c) Lmm(r, c) = L(corners + r, corners + c);
    for (int c = 0; c < corners; ++c) Lmc(r, c) = L(corners + r, c);
  }
  for (int r = 0; r < corners; ++r)
    for (int c = 0; c < corners; ++c) Lcc(r, c) = L(r, c);
  MatQ schur = sgd::mat_mul(sgd::mat_mul(sgd::transpose(Lmc),
                                         sgd::mat_inverse(Lmm)),
                            Lmc);
  // Trace form = Lcc - Lmc^t Lmm^-1 Lmc; corner form = (N+1)I - J.
  Rat ratio = (Lcc(0, 1) - schur(0, 1)) / Rat(-1);
  for (int r = 0; r < corners; ++r)
    for (int c = 0; c < corners; ++c) {
      Rat corner_form = r == c ? Rat(N) : Rat(-1);
      if (Lcc(r, c) - schur(r, c) != ratio * corner_form)
        throw std::logic_error("level-1 trace form is not proportional");
    }
  return ratio;
}

// ---------------------------------------------------------------------------
// Exhaustive scans.

struct BruteMin {
  double value = 0;
  sgd::Word argmin;
};

// Minimum cell density ratio over every nonempty word of length <= depth.
inline BruteMin brute_min_ratio(const sgd::HarmonicContext& ctx,
                                const VecF& u, int depth) {
  BruteMin best;
  best.value = std::numeric_limits<double>::infinity();
  sgd::Word w;
  auto dfs = [&](auto&& self, const MatF& a, int remaining) -> void {
    for (int s = 1; s <= ctx.N + 1; ++s) {
      MatF child = sgd::mat_mul(ctx.Af[s - 1], a);
      w.push(s);
      double r = sgd::ratio_from_matrix_f(ctx, child, u);
      if (r < best.value) {
        best.value = r;
        best.argmin = w;
      }
      if (remaining > 1) self(self, child, remaining - 1);
      w.syms.pop_back();
    }
  };
  if (depth > 0) dfs(dfs, MatF::identity(ctx.size()), depth);
  return best;
}

// Largest density increment over all sample pairs at the given exponent,
// computed directly from a profile (quadratic scan).
inline double sup_quotient(const std::vector<sgd::EdgeDensitySample>& prof,
                           double theta) {
  double sup = 0;
  for (std::size_t a = 0; a < prof.size(); ++a)
    for (std::size_t b = a + 1; b < prof.size(); ++b) {
      double dt = std::fabs(prof[b].t - prof[a].t);
      if (dt == 0) continue;
      double q = std::fabs(prof[b].density - prof[a].density) /
                 std::pow(dt, theta);
      sup = std::max(sup, q);
    }
  return sup;
}

// ---------------------------------------------------------------------------
// Small numeric helpers.

inline double fit_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// One application of the self-similar recursion defining the edge
// maximum-location function, with the inner value supplied by the
// library evaluator at the same budget.
inline double maxloc_recursion_rhs(int N, double t, int n_iter) {
  if (t <= 0.5) {
    double inner = (1 - 2 * t) / ((N - 1) * t + 1);
    return 1.0 - 0.5 * sgd::L_eval(N, inner, n_iter);
  }
  double inner = (2 * t - 1) / ((N - 1) * (1 - t) + 1);
  return 0.5 + 0.5 * sgd::L_eval(N, inner, n_iter);
}

// ---------------------------------------------------------------------------
// Seeded random data.

inline VecQ random_rat_vec(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<long> num(-12, 12), den(1, 9);
  VecQ u(n, Rat());
  for (int k = 0; k < n; ++k) u[k] = sgd::rat(num(rng), den(rng));
  return u;
}

// Boundary vector with pairwise-distinct entries.
inline VecQ random_distinct_vec(std::mt19937_64& rng, int n) {
  for (;;) {
    VecQ u = random_rat_vec(rng, n);
    bool distinct = true;
    for (int a = 0; a < n && distinct; ++a)
      for (int b = a + 1; b < n; ++b)
        if (u[a] == u[b]) {
          distinct = false;
          break;
        }
    if (distinct) return u;
  }
}

inline sgd::Word random_word(std::mt19937_64& rng, int N, int len) {
  std::uniform_int_distribution<int> sym(1, N + 1);
  sgd::Word w;
  for (int k = 0; k < len; ++k) w.push(sym(rng));
  return w;
}

// Euclidean-orthonormal basis from seeded Gaussians (two passes of
// Gram-Schmidt).
inline std::vector<VecF> random_orthonormal(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<VecF> basis;
  while (static_cast<int>(basis.size()) < n) {
    VecF v(n, 0.0);
    for (int k = 0; k < n; ++k) v[k] = gauss(rng);
    for (int pass = 0; pass < 2; ++pass)
      for (const VecF& b : basis) {
        double dot = 0;
        for (int k = 0; k < n; ++k) dot += v[k] * b[k];
        for (int k = 0; k < n; ++k) v[k] -= dot * b[k];
      }
    double norm = 0;
    for (int k = 0; k < n; ++k) norm += v[k] * v[k];
    norm = std::sqrt(norm);
    if (norm < 1e-6) continue;
    for (int k = 0; k < n; ++k) v[k] /= norm;
    basis.push_back(v);
  }
  return basis;
}

}  // namespace oracle
