#pragma once

#include <optional>
#include <vector>

#include "sgd/harmonic.hpp"
#include "sgd/word.hpp"

namespace sgd {

// --- Edge restriction of a harmonic function -------------------------------
//
// On an edge with endpoint values (a_i, a_j) inside a cell whose boundary
// mean is s, the midpoint value is ((N+1)s + a_i + a_j)/(N+3) and the two
// half-edges live in subcells with means ((N+1)s + 2a)/(N+3).

enum class EdgeShapeKind {
  constant,
  strictly_increasing,
  strictly_decreasing,
  interior_max,
  interior_min,
};

struct EdgeShape {
  EdgeShapeKind kind = EdgeShapeKind::constant;
  // Interior extremum location in [0,1] (dyadic-resolution approximation);
  // exactly 1/2 when the endpoint values coincide.
  double extremum_t = 0;
  bool extremum_at_half = false;
};

EdgeShape classify_edge(int N, const Rat& a_i, const Rat& a_j, const Rat& s);

// Exact values at all dyadics m/2^depth along the edge.
std::vector<Rat> edge_values(int N, const Rat& a_i, const Rat& a_j,
                             const Rat& s, int depth);
std::vector<double> edge_values_f(int N, double a_i, double a_j, double s,
                                  int depth);

// Grid argmax at the given depth; ties broken toward smaller t.
struct GridMax {
  std::uint64_t num = 0;
  unsigned exp = 0;
  double t = 0;
  double value = 0;
};

GridMax brute_max_location(int N, double a_i, double a_j, double s, int depth);

// --- The edge-maximum self-similarity --------------------------------------
//
// L is the fixed point of (Xi F)(t) = f_1(F(g_1(t))) on [0,1/2] and
// f_2(F(g_2(t))) on [1/2,1], with f_1(y) = 1 - y/2, f_2(y) = 1/2 + y/2,
// g_1(t) = (1-2t)/((N-1)t+1), g_2(t) = (2t-1)/((N-1)(1-t)+1).
// L_eval expands the equation n_iter times starting from F_0(t) = t, so
// the result is the exact n_iter-th iterate with error <= 2^-n_iter.

double L_eval(int N, double t, int n_iter = 40);

// Snapshot of an iterate on the dyadic grid of the given depth.
struct DeRhamState {
  int N = 0;
  int depth = 0;
  int n_iter = 0;
  std::vector<double> values;  // 2^depth + 1 samples of Xi^n_iter F_0
  double error_bound = 0;      // 2^-n_iter
  bool monotone = false;       // nondecreasing along the grid
};

DeRhamState derham_grid(int N, int depth, int n_iter);

// Itinerary coding of the same function: symbols omega_n = 1 or 2 by
// which half G^n(t) falls in; the value is the nested image of the f's.
// Exact rational orbits detect hits of 1/2 (tail 1 1 2^inf, exact dyadic
// value) and the absorbing endpoint fixed points.
struct Itinerary {
  std::vector<int> symbols;      // recorded prefix
  bool exact = false;            // closed-form tail reached
  std::optional<Rat> value_exact;
  double value = 0;              // chi of the (possibly truncated) coding
};

Itinerary itinerary_eval(int N, const Rat& t, int max_steps = 60);

// Closed-form derivative bounds of the two-fold inverse-branch
// compositions, their endpoint identities, and agreement with central
// finite differences.
CheckReport inverse_branch_contraction_check(int N);

// --- Maximum location map ---------------------------------------------------
//
// M(s) for endpoint values 0 > ... normalized so that the edge has values
// (-1, 0) and cell mean s; M(s) = 1 for s <= 0, else L(1/((N+1)s+1)).

double M_eval(int N, double s, int n_iter = 40);

// General endpoint values a_i != a_j (cell mean s): position in [0,1] of
// the edge restriction's maximum.
double M_general(int N, double s, double a_i, double a_j, int n_iter = 40);

// Preimage of a target in (1/2, 1); s-bracket bisection driven by M_eval,
// terminating when the image bracket is below 2^-24.
double M_inverse(int N, double target, int n_iter = 44);

}  // namespace sgd
