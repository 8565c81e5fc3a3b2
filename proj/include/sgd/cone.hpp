#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sgd/harmonic.hpp"
#include "sgd/word.hpp"

namespace sgd {

// Zero-mean compression of the extension matrices: T_k = P A_k P.
MatQ build_Tk(const HarmonicContext& ctx, int k);

// Simplicial cone inside the zero-mean subspace, invariant under T_i and
// T_j, with explicit generators (known for N = 2 and 3; other corner
// pairs arise by coordinate permutation of the (1,2) cone).
struct ConeFrame {
  int N = 0;
  int i = 1, j = 2;
  std::vector<VecQ> gens;   // a_1 ... a_N, zero-sum
  VecQ anchor;              // z = a_1 + ... + a_N
  MatQ Ti, Tj;              // exact compressed maps
  MatQ Ci, Cj;              // T_k a_l = sum_m C_k(l, m) a_m, entries > 0
  MatF Cif, Cjf;
  MatQ coord_inv;           // inverse of the generator matrix, one row dropped
  int coord_drop = -1;

  // Generator coordinates of a zero-mean vector (throws if x is outside
  // the generators' span, which for zero-mean x cannot happen).
  VecQ coords(const VecQ& x) const;

  // Coordinates in the interior basis u_1 = z, u_l = z + a_l (l >= 2).
  VecQ interior_coords(const VecQ& x) const;

  const MatQ& coeff(int symbol) const;
  const MatF& coeff_f(int symbol) const;
};

ConeFrame canonical_cone(const HarmonicContext& ctx, int i, int j);

// Projective (Hilbert) distance inside the cone, computed in generator
// coordinates; infinite when exactly one of the arguments vanishes in
// some coordinate, and rejected (negative coordinate) outside the cone.
double hilbert_metric(const ConeFrame& frame, const VecQ& x, const VecQ& y);
double hilbert_metric_coords(const VecF& cx, const VecF& cy);

// Birkhoff contraction data: image diameters, tanh(diam/4) ratios, the
// dual-side counterparts used by the iteration certificate, and an
// empirical sup of observed contraction factors on random pairs.
struct ContractionEstimate {
  double delta_i = 0, delta_j = 0;        // primal image diameters
  double tau_i = 0, tau_j = 0;            // tanh(delta/4)
  double tau_joint = 0;
  double delta_dual_i = 0, delta_dual_j = 0;
  double tau_dual_i = 0, tau_dual_j = 0;
  double tau_dual_joint = 0;
  double delta_dual_diameter = 0;         // both dual images together
  double empirical_sup_i = 0, empirical_sup_j = 0;
  bool empirical_ok = false;              // sup <= tau + 1e-9
};

ContractionEstimate contraction_estimate(const ConeFrame& frame,
                                         std::uint64_t seed = 0,
                                         int samples = 400);

// Normalized dual iterate along omega: psi_n = T*_{omega_1} ... T*_{omega_n}
// psi, scaled to value 1 at the anchor (sum of dual coordinates 1). The
// limit rho is the projective limit functional of the word's cells.
struct RhoResult {
  VecF rho_dual;            // rho(a_l), sums to 1
  int iters = 0;
  double last_diff = 0;     // final successive-difference
  double final_bound = 0;   // geometric certificate at the final step
  bool bound_majorizes = false;  // certificate >= observed diffs, all n
  bool converged = false;
  double exact_check_err = -1;   // vs closed form, eventually-constant only
};

RhoResult rho_limit(const ConeFrame& frame, const SymbolStream& omega,
                    double tol = 1e-10, int max_iter = 400);

// Density limit of u's energy measure along the shrinking cells
// K_{w [omega]_n}: (sum_l alpha_l lambda_l)^2 / sum_k (...)^2 with
// coordinates taken in the interior basis and lambda_l = rho(u_l)/rho(z).
struct EdgeDensityLimit {
  double value = 0;
  VecF alpha;
  VecF lambda;
  RhoResult rho;
};

EdgeDensityLimit density_along(const HarmonicContext& ctx,
                               const ConeFrame& frame, const EdgeAddress& edge,
                               const VecQ& u, const SymbolStream& omega,
                               double tol = 1e-10);

// Gap decay between limits that share a prefix of length m and then
// diverge to opposite corner tails, plus the dyadic-point quotient
// consistency delta(v i j^inf) = delta(v j i^inf).
struct ContinuityReport {
  std::vector<double> gaps;      // indexed by shared-prefix length
  double fitted_rate = 0;        // per-step factor from a log fit
  double tau_reference = 0;      // empirical contraction sup
  double quotient_err = 0;
  bool rate_ok = false;
  bool quotient_ok = false;
};

ContinuityReport continuity_modulus(const HarmonicContext& ctx,
                                    const ConeFrame& frame,
                                    const EdgeAddress& edge, const VecQ& u,
                                    int m_max, double tol = 1e-10);

}  // namespace sgd
