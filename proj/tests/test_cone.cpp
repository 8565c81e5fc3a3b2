#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sgd/cone.hpp>
#include <sgd/edge_density.hpp>

#include "oracles.hpp"

using namespace sgd;

TEST_CASE("compressed maps act on the zero-mean subspace") {
  for (int N : {2, 3}) {
    HarmonicContext ctx = build_context(N);
    std::mt19937_64 rng{87};
    for (int k = 1; k <= N + 1; ++k) {
      MatQ T = build_Tk(ctx, k);
      VecQ u = oracle::random_rat_vec(rng, N + 1);
      // T u = P A (P u) by construction.
      VecQ want = project_P(mat_vec(ctx.A[k - 1], project_P(u)));
      CHECK(mat_vec(T, u) == want);
      // Outputs always have zero mean.
      VecQ out = mat_vec(T, u);
      Rat sum(0);
      for (const Rat& x : out) sum += x;
      CHECK(sum == 0);
    }
  }
}

TEST_CASE("invariant-cone coefficients, 3-corner case") {
  HarmonicContext ctx = build_context(2);
  ConeFrame frame = canonical_cone(ctx, 1, 2);
  REQUIRE(frame.gens.size() == 2);
  CHECK(frame.gens[0] == VecQ{Rat(1), Rat(-3), Rat(2)});
  CHECK(frame.gens[1] == VecQ{Rat(3), Rat(-1), Rat(-2)});
  // T_1 a_1 = (9 a_1 + 5 a_2)/40, T_1 a_2 = (3 a_1 + 23 a_2)/40.
  CHECK(frame.Ci(0, 0) == rat(9, 40));
  CHECK(frame.Ci(0, 1) == rat(5, 40));
  CHECK(frame.Ci(1, 0) == rat(3, 40));
  CHECK(frame.Ci(1, 1) == rat(23, 40));
  // T_2 a_1 = (23 a_1 + 3 a_2)/40, T_2 a_2 = (5 a_1 + 9 a_2)/40.
  CHECK(frame.Cj(0, 0) == rat(23, 40));
  CHECK(frame.Cj(0, 1) == rat(3, 40));
  CHECK(frame.Cj(1, 0) == rat(5, 40));
  CHECK(frame.Cj(1, 1) == rat(9, 40));
  // Ambient images written out.
  VecQ t1a1 = mat_vec(frame.Ti, frame.gens[0]);
  CHECK(t1a1 == VecQ{rat(3, 5), rat(-4, 5), rat(1, 5)});
  VecQ t1a2 = mat_vec(frame.Ti, frame.gens[1]);
  CHECK(t1a2 == VecQ{rat(9, 5), rat(-4, 5), rat(-5, 5)});
  VecQ t2a1 = mat_vec(frame.Tj, frame.gens[0]);
  CHECK(t2a1 == VecQ{rat(4, 5), rat(-9, 5), rat(5, 5)});
  VecQ t2a2 = mat_vec(frame.Tj, frame.gens[1]);
  CHECK(t2a2 == VecQ{rat(4, 5), rat(-3, 5), rat(-1, 5)});
}

TEST_CASE("invariant-cone coefficients, 4-corner case") {
  HarmonicContext ctx = build_context(3);
  ConeFrame frame = canonical_cone(ctx, 1, 2);
  REQUIRE(frame.gens.size() == 3);
  CHECK(frame.gens[0] == VecQ{Rat(-7), Rat(2), Rat(2), Rat(3)});
  CHECK(frame.gens[1] == VecQ{Rat(-1), Rat(4), Rat(-2), Rat(-1)});
  CHECK(frame.gens[2] == VecQ{Rat(-3), Rat(3), Rat(4), Rat(-4)});
  long ti[3][3] = {{445, 7, 42}, {47, 117, 6}, {141, 3, 134}};
  long tj[3][3] = {{118, 158, 20}, {4, 432, 40}, {3, 237, 146}};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      CHECK(frame.Ci(r, c) == rat(ti[r][c], 696));
      CHECK(frame.Cj(r, c) == rat(tj[r][c], 696));
    }
}

TEST_CASE("coefficient rows expand the images exactly") {
  for (int N : {2, 3}) {
    HarmonicContext ctx = build_context(N);
    ConeFrame frame = canonical_cone(ctx, 1, 2);
    for (int which : {1, 2}) {
      const MatQ& T = which == 1 ? frame.Ti : frame.Tj;
      const MatQ& C = which == 1 ? frame.Ci : frame.Cj;
      for (int l = 0; l < N; ++l) {
        VecQ img = mat_vec(T, frame.gens[l]);
        VecQ rebuilt(ctx.size(), Rat(0));
        for (int m = 0; m < N; ++m)
          rebuilt = vec_add(rebuilt, vec_scale(C(l, m), frame.gens[m]));
        CHECK(img == rebuilt);
        // Strict positivity keeps the cone invariant with room to spare.
        for (int m = 0; m < N; ++m) CHECK(C(l, m) > 0);
      }
    }
  }
}

TEST_CASE("cone frames for other corner pairs permute coherently") {
  HarmonicContext ctx = build_context(2);
  for (auto [i, j] : std::vector<std::pair<int, int>>{{1, 3}, {2, 3}, {2, 1}}) {
    ConeFrame frame = canonical_cone(ctx, i, j);
    std::mt19937_64 rng{91};
    for (int rep = 0; rep < 3; ++rep) {
      VecQ u = project_P(oracle::random_rat_vec(rng, 3));
      VecQ c = frame.coords(u);
      // coords invert the generator expansion.
      VecQ rebuilt(ctx.size(), Rat(0));
      for (std::size_t l = 0; l < frame.gens.size(); ++l)
        rebuilt = vec_add(rebuilt, vec_scale(c[l], frame.gens[l]));
      CHECK(rebuilt == u);
    }
    // The images under both compressed maps stay in the cone.
    for (int which : {0, 1}) {
      const MatQ& C = which == 0 ? frame.Ci : frame.Cj;
      for (std::size_t r = 0; r < C.rows(); ++r)
        for (std::size_t cc = 0; cc < C.cols(); ++cc) CHECK(C(r, cc) > 0);
    }
  }
  CHECK_THROWS_AS(canonical_cone(build_context(4), 1, 2), std::domain_error);
}

TEST_CASE("projective metric basics") {
  HarmonicContext ctx = build_context(2);
  ConeFrame frame = canonical_cone(ctx, 1, 2);
  VecQ x = vec_add(frame.gens[0], frame.gens[1]);     // coords (1, 1)
  VecQ y = vec_add(vec_scale(Rat(2), frame.gens[0]),  // coords (2, 1)
                   frame.gens[1]);
  CHECK(hilbert_metric(frame, x, x) == doctest::Approx(0.0));
  CHECK(hilbert_metric(frame, x, y) == doctest::Approx(std::log(2.0)));
  // Scale invariance.
  CHECK(hilbert_metric(frame, x, vec_scale(Rat(7), y)) ==
        doctest::Approx(std::log(2.0)));
  // Boundary: one vanishing coordinate gives infinite distance.
  CHECK(hilbert_metric(frame, x, frame.gens[0]) ==
        std::numeric_limits<double>::infinity());
  // Points outside the cone are rejected.
  VecQ outside = vec_sub(frame.gens[0], frame.gens[1]);
  CHECK_THROWS_AS(hilbert_metric(frame, x, outside), std::domain_error);
}

TEST_CASE("contraction certificate against sampled reality") {
  for (int N : {2, 3}) {
    HarmonicContext ctx = build_context(N);
    ConeFrame frame = canonical_cone(ctx, 1, 2);
    ContractionEstimate est = contraction_estimate(frame, 7, 400);
    CHECK(est.tau_joint < 1);
    CHECK(est.tau_dual_joint < 1);
    CHECK(est.empirical_ok);
    CHECK(est.empirical_sup_i <= est.tau_i + 1e-9);
    CHECK(est.empirical_sup_j <= est.tau_j + 1e-9);
    if (N == 2) {
      // Image diameter log(207/15) and its tanh, written out.
      double delta = std::log(207.0 / 15.0);
      CHECK(est.delta_i == doctest::Approx(delta).epsilon(1e-12));
      CHECK(est.delta_j == doctest::Approx(delta).epsilon(1e-12));
      CHECK(est.tau_i == doctest::Approx(std::tanh(delta / 4)).epsilon(1e-12));
    }
  }
}

TEST_CASE("pairwise generator distances bound the image diameter") {
  // Direct recomputation of the image diameter from the coefficient
  // rows: the diameter of the image cone is the max pairwise distance of
  // the generator images.
  HarmonicContext ctx = build_context(2);
  ConeFrame frame = canonical_cone(ctx, 1, 2);
  ContractionEstimate est = contraction_estimate(frame, 0, 0);
  std::vector<VecQ> imgs;
  for (int l = 0; l < 2; ++l) imgs.push_back(mat_vec(frame.Ti, frame.gens[l]));
  double want = hilbert_metric(frame, imgs[0], imgs[1]);
  CHECK(est.delta_i == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("dual iteration on constant tails hits the eigen direction") {
  for (int N : {2, 3}) {
    HarmonicContext ctx = build_context(N);
    ConeFrame frame = canonical_cone(ctx, 1, 2);
    // omega = i^infty: the limit functional is the d_i pairing, and the
    // iteration must agree with the closed form it reports.
    SymbolStream omega = SymbolStream::eventually(Word{}, 1);
    RhoResult rho = rho_limit(frame, omega, 1e-10);
    CHECK(rho.converged);
    CHECK(rho.bound_majorizes);
    CHECK(rho.exact_check_err >= 0);
    CHECK(rho.exact_check_err < 1e-10);
    double sum = 0;
    for (double x : rho.rho_dual) sum += x;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("dual iteration closed form for eventually-constant words") {
  HarmonicContext ctx = build_context(2);
  ConeFrame frame = canonical_cone(ctx, 1, 2);
  std::mt19937_64 rng{95};
  for (int rep = 0; rep < 10; ++rep) {
    int len = rep % 4;
    Word head;
    for (int k = 0; k < len; ++k) head.push(1 + (rng() % 2));
    int tail = 1 + (rng() % 2);
    SymbolStream omega = SymbolStream::eventually(head, tail);
    RhoResult rho = rho_limit(frame, omega, 1e-10);
    CHECK(rho.converged);
    CHECK(rho.exact_check_err < 1e-9);
  }
}

TEST_CASE("density limits match vertex values on constant tails") {
  std::mt19937_64 rng{97};
  for (int N : {2, 3}) {
    HarmonicContext ctx = build_context(N);
    for (auto [i, j] : std::vector<std::pair<int, int>>{{1, 2}, {2, 3}}) {
      ConeFrame frame = canonical_cone(ctx, i, j);
      for (int rep = 0; rep < 12; ++rep) {
        VecQ u = oracle::random_rat_vec(rng, N + 1);
        Word prefix = oracle::random_word(rng, N, rep % 3);
        EdgeAddress edge(prefix, i, j);
        int len = rep % 5;
        Word head;
        for (int k = 0; k < len; ++k) head.push(rng() % 2 ? i : j);
        int tail = rng() % 2 ? i : j;
        SymbolStream omega = SymbolStream::eventually(head, tail);
        EdgeDensityLimit lim = density_along(ctx, frame, edge, u, omega, 1e-12);
        Rat want = vertex_density(
            ctx, u, VertexRef{concat(prefix, head), tail});
        CHECK(lim.value == doctest::Approx(to_double(want)).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("limits at shared dyadic points agree from both sides") {
  std::mt19937_64 rng{101};
  for (int N : {2, 3}) {
    HarmonicContext ctx = build_context(N);
    ConeFrame frame = canonical_cone(ctx, 1, 2);
    for (int rep = 0; rep < 6; ++rep) {
      VecQ u = oracle::random_rat_vec(rng, N + 1);
      EdgeAddress edge(Word{}, 1, 2);
      Word v;
      for (int k = 0; k < rep; ++k) v.push(1 + (rng() % 2));
      Word head_a = v, head_b = v;
      head_a.push(1);
      head_b.push(2);
      EdgeDensityLimit a = density_along(
          ctx, frame, edge, u, SymbolStream::eventually(head_a, 2), 1e-12);
      EdgeDensityLimit b = density_along(
          ctx, frame, edge, u, SymbolStream::eventually(head_b, 1), 1e-12);
      CHECK(std::fabs(a.value - b.value) < 1e-9);
    }
  }
}

TEST_CASE("continuity gaps shrink geometrically") {
  std::mt19937_64 rng{103};
  for (int N : {2, 3}) {
    HarmonicContext ctx = build_context(N);
    ConeFrame frame = canonical_cone(ctx, 1, 2);
    VecQ u = oracle::random_rat_vec(rng, N + 1);
    EdgeAddress edge(Word{}, 1, 2);
    ContinuityReport rep = continuity_modulus(ctx, frame, edge, u, 14);
    CHECK(rep.rate_ok);
    CHECK(rep.fitted_rate < 1);
    CHECK(rep.fitted_rate > 0);
    CHECK(rep.quotient_ok);
    CHECK(rep.quotient_err < 1e-9);
  }
}

TEST_CASE("nonconstant streams still converge with certificates") {
  HarmonicContext ctx = build_context(2);
  ConeFrame frame = canonical_cone(ctx, 1, 2);
  SymbolStream alternating = SymbolStream::from_generator(
      [](std::size_t n) { return n % 2 == 0 ? 1 : 2; });
  RhoResult rho = rho_limit(frame, alternating, 1e-10);
  CHECK(rho.converged);
  CHECK(rho.bound_majorizes);
  CHECK(rho.last_diff < 1e-10);
  // No closed form for a non-eventually-constant stream.
  CHECK(rho.exact_check_err == -1);
}
