#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgd/harmonic.hpp"

namespace sgd {

// Energy measure of the cell K_w for the harmonic function with boundary
// values u: 2 * scale^|w| * q0(A_w u).
Rat cell_energy(const HarmonicContext& ctx, const VecQ& u, const Word& w);
double cell_energy_f(const HarmonicContext& ctx, const VecF& u, const Word& w);

// Kusuoka measure of K_w: the sum of the basis energy measures.
Rat kusuoka_cell(const HarmonicContext& ctx, const Word& w);
double kusuoka_cell_f(const HarmonicContext& ctx, const Word& w);

// Density proxy nu_h(K_w) / nu(K_w); the scale powers cancel, so this is
// q0(A_w u) / sum_k q0(A_w e_k).
Rat cell_ratio(const HarmonicContext& ctx, const VecQ& u, const Word& w);
double cell_ratio_f(const HarmonicContext& ctx, const VecF& u, const Word& w);

// Same ratio evaluated from an already-built word matrix (hot loops).
double ratio_from_matrix_f(const HarmonicContext& ctx, const MatF& aw,
                           const VecF& u);
Rat ratio_from_matrix(const HarmonicContext& ctx, const MatQ& aw,
                      const VecQ& u);

// Corner density limit at psi_w(p_i): the value the cell ratios along
// w i^n converge to, with its ingredients.
struct RatioLimit {
  Rat value;                 // (d_i, A_w u)^2 / |tA_w d_i|^2
  Rat numerator_pairing;     // (d_i, A_w u)
  Rat dual_norm_sq;          // |tA_w d_i|^2
  Rat scaled_energy_limit;   // (2/N) scale^|w| (d_i, A_w u)^2
  double value_f = 0;
};

RatioLimit corner_limit(const HarmonicContext& ctx, const VecQ& u,
                        const Word& w, int i);

// Float iteration along w i^n: scaled energies against the closed form
// and the projected-vector iterates against their limit.
struct ConvergenceReport {
  int n_max = 0;
  double closed_form = 0;          // limit of scale^n nu_h(K_{w i^n})
  double final_scaled_energy = 0;  // value at n_max
  double abs_err = 0;
  double vec_limit_err = 0;        // |scale^n P A_i^n u_w - (d_i,u_w) P v_i|
  double vec_error_ratio = 0;      // fitted per-step factor, expect 1/(N+1)
  double expected_vec_ratio = 0;
  double energy_error_ratio = 0;   // fitted per-step factor, expect 1/(N+1)^2
  double theta_inf = 0, theta_sup = 0;  // of scale^n nu(K_{w i^n})
  bool value_ok = false;
  bool ratio_ok = false;   // vec_error_ratio within 5% of 1/(N+1)
  bool theta_ok = false;   // 0 < theta_inf <= theta_sup < inf
};

ConvergenceReport convergence_rate_check(const HarmonicContext& ctx,
                                         const VecQ& u, const Word& w, int i,
                                         int n_max);

// Basis-independence of the Kusuoka measure: for any orthonormal basis,
// the summed energy measures of a cell reproduce kusuoka_cell.
struct OnbReport {
  double orthonormality_err = 0;
  double sum_vs_kusuoka_err = 0;
  bool basis_ok = false;
  bool sum_ok = false;
};

OnbReport onb_decomposition_check(const HarmonicContext& ctx,
                                  const std::vector<VecF>& basis,
                                  const Word& w, double tol);

// Ratios along w i j^n when (A_w u)_i = (A_w u)_j; the log-slope of the
// ratios is -2 log(N+1) and of the energies -log((N+1)(N+3)).
struct SymmetricTailReport {
  std::vector<double> ratios;
  std::vector<double> energies;
  double ratio_slope = 0, ratio_slope_expected = 0;
  double energy_slope = 0, energy_slope_expected = 0;
  bool slopes_ok = false;  // both within 5%
};

SymmetricTailReport symmetric_tail_ratio(const HarmonicContext& ctx,
                                         const VecQ& u, const Word& w, int i,
                                         int j, int n_max);

// Searches for a subcell of K_w on which the energy density of u drops
// below eps: returns w'' with cell_ratio(u, w + w'') < eps. Follows the
// vanishing-infimum construction: equal boundary values give a direct
// tail descent; otherwise a small exact perturbation moves the edge
// maximum onto a dyadic point, manufacturing an equal pair on a subcell.
struct VanishResult {
  Word witness;          // relative to w
  Rat ratio;             // exact ratio at w + witness
  double ratio_f = 0;
  bool ok = false;
  int case_used = 0;     // 1 equal pair, 2 perturbation, 3 middle tail
  std::string note;
};

VanishResult find_vanishing_cell(const HarmonicContext& ctx, const VecQ& u,
                                 const Word& w, double eps,
                                 int depth_cap = 40, int dyadic_cap = 20);

// Least-squares slope of y against x (shared by the decay reports).
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sgd
