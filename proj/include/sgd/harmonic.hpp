#pragma once

#include <map>
#include <string>
#include <vector>

#include "sgd/linalg.hpp"
#include "sgd/word.hpp"

namespace sgd {

// Fixed data of the N-dimensional gasket's harmonic structure.
//
// Conventions that everything downstream leans on:
//  * Symbols are 1-based; index k-1 addresses matrix/vector slots.
//  * A[k-1] maps boundary values u on V_0 to the boundary values of the
//    harmonic extension on the subcell K_k, i.e. h|_{psi_k(V_0)}.
//  * For a word w = w_1 ... w_m the subcell pullback composes in REVERSE:
//    A_w = A_{w_m} * ... * A_{w_1}, because psi_w = psi_{w_1} o ... o
//    psi_{w_m} pulls back one outer map at a time. word_matrix is the
//    only place allowed to build these products.
//  * q0(u, v) = sum over vertex pairs of differences = (u, -D v).
struct HarmonicContext {
  int N = 0;

  MatQ D;                 // graph Laplacian on V_0: -N diagonal, 1 off
  std::vector<MatQ> A;    // harmonic extension matrices A_1..A_{N+1}
  std::vector<VecQ> d;    // d_k = k-th column of D
  std::vector<VecQ> v;    // v_k = (1 - e_k)/N
  Rat scale;              // energy renormalization (N+3)/(N+1)

  // Float mirrors of the same data.
  MatF Df;
  std::vector<MatF> Af;
  std::vector<VecF> df;
  std::vector<VecF> vf;
  double scalef = 0;

  std::size_t size() const { return static_cast<std::size_t>(N) + 1; }
};

HarmonicContext build_context(int N);

// A_w = A_{w_m} ... A_{w_1}; A of the empty word is the identity.
// The exact path asserts that every entry's denominator divides
// (N+3)^|w|.
MatQ word_matrix(const HarmonicContext& ctx, const Word& w);
MatF word_matrix_float(const HarmonicContext& ctx, const Word& w);

// Quadratic form on V_0: q0(u, v) = (u, -D v); q0(u) = q0(u, u) >= 0.
Rat q0(const HarmonicContext& ctx, const VecQ& u, const VecQ& v);
Rat q0(const HarmonicContext& ctx, const VecQ& u);
double q0f(const HarmonicContext& ctx, const VecF& u, const VecF& v);
double q0f(const HarmonicContext& ctx, const VecF& u);

// Projection onto zero-mean vectors: u - mean(u) * 1.
VecQ project_P(const VecQ& u);
VecF project_P(const VecF& u);

VecQ basis_e(const HarmonicContext& ctx, int k);

struct CheckLine {
  std::string name;
  bool pass = false;
  int N = 0;
  int k = 0;  // 0 when not tied to a symbol
  std::string detail;

  std::string format() const;
};

struct CheckReport {
  std::vector<CheckLine> lines;

  bool all_pass() const;
  std::string format() const;
};

// Exact verification of the spectral data of every A_k and tA_k:
// eigenvalues 1, (N+1)/(N+3), 1/(N+3) on the documented eigenvectors,
// row sums 1, the d-vector transition relations, and the antisymmetry
// tA_i d_j = -tA_j d_i.
CheckReport eigen_check(const HarmonicContext& ctx);

// Values of the harmonic extension of u on all of V_m, keyed by
// canonical vertex name. Construction cross-checks that overlapping
// cell representations glue to equal values.
std::map<VertexRef, Rat> harmonic_values(const HarmonicContext& ctx,
                                         const VecQ& u, int m);

// Level-m graph energy Q_m = sum over cells of q0 of the pulled-back
// boundary values; scale^m * Q_m is constant in m for harmonic data.
Rat level_energy(const HarmonicContext& ctx, const VecQ& u, int m);

}  // namespace sgd
