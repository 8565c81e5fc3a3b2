#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgd/energy.hpp"
#include "sgd/word.hpp"

namespace sgd {

// Density of the energy measure of u (against the Kusuoka measure) at
// the vertex psi_word(p_corner): (d_c, A_word u)^2 / |tA_word d_c|^2.
Rat vertex_density(const HarmonicContext& ctx, const VecQ& u,
                   const VertexRef& vertex);
double vertex_density_f(const HarmonicContext& ctx, const VecF& u,
                        const VertexRef& vertex);

// Density at psi_{w i}(p_j); i == j names the corner psi_w(p_i) (both
// readings agree through the eigenvalue relation).
Rat delta_at_vertex(const HarmonicContext& ctx, const VecQ& u, const Word& w,
                    int i, int j);

// Per-basis-index cross determinants at the word with matrix aw:
// (d_i, A u)(d_j, A e_k) - (d_i, A e_k)(d_j, A u).
VecQ cross_dets(const HarmonicContext& ctx, const VecQ& u, const MatQ& aw,
                int i, int j);

// Density gap between the (i, j) corners of K_w, via the factored
// difference-of-squares form.
Rat delta_gap(const HarmonicContext& ctx, const VecQ& u, const Word& w, int i,
              int j);

// Cross determinants rescale by ((N+1)/(N+3)^2)^|w'| along words over
// {i, j} appended to w.
bool det_identity_check(const HarmonicContext& ctx, const VecQ& u,
                        const Word& w, const Word& wprime, int i, int j);

// |tA_{w'} d_l|^2 >= (N+1) ((N+1)/(N+3))^{2n} N^{-n} for w' in {i,j}^n,
// l in {i, j}.
bool dual_norm_lower_bound_check(const HarmonicContext& ctx,
                                 const Word& wprime, int i, int j, int l);

// Appending a prefix loses at most (N+3)^{-2} per letter:
// |tA_{w w'} d_l|^2 >= (N+3)^{-2|w|} |tA_{w'} d_l|^2.
bool prefix_norm_floor_check(const HarmonicContext& ctx, const Word& w,
                             const Word& wprime, int l);

// (N+3)^2 A_k tA_k - I is positive semidefinite; its first two leading
// minors are N^2+6N+8 and N^3+8N^2+20N+12 and the rest vanish.
CheckReport psd_floor_check(const HarmonicContext& ctx, int k);

// Gap decay along {i,j}-words: |gap at w w'| <= (c/(N+1)) (N/(N+1))^|w'|
// with c = 2 (N+3)^{4|w|} |A_w u| sum_k |A_w e_k| |cross det at w|.
// The norms are bracketed rationally from below, so a PASS certifies the
// true inequality.
struct HolderBoundReport {
  double c_value = 0;       // float view of the constant
  Rat c_lower;              // rational lower bound used in comparisons
  int n_cap = 0;
  bool all_ok = false;
  double max_ratio = 0;     // max over words of |gap| / bound
  Word worst;
};

HolderBoundReport holder_bound_check(const HarmonicContext& ctx, const VecQ& u,
                                     const Word& w, int i, int j, int n_cap);

// Density profile along an edge at dyadic resolution 2^-depth.
struct EdgeDensitySample {
  std::uint64_t t_num = 0;
  std::uint64_t t_den = 1;
  double t = 0;
  double density = 0;
  std::string density_exact;  // "p/q", exact mode only
};

std::vector<EdgeDensitySample> edge_profile(const HarmonicContext& ctx,
                                            const VecQ& u,
                                            const EdgeAddress& edge, int depth,
                                            const NumericPolicy& policy);

// Empirical Hoelder quotient sup |f(t)-f(t')| / |t-t'|^theta over all
// sample pairs; theta_H = log2(1 + 1/N) is the critical exponent.
struct HolderReport {
  double theta = 0;
  double sup_quotient = 0;
  double t1 = 0, t2 = 0;  // a pair attaining the sup
};

HolderReport empirical_holder(const std::vector<EdgeDensitySample>& profile,
                              double theta);

double holder_exponent(int N);

}  // namespace sgd
