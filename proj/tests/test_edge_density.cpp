#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sgd/edge_density.hpp>

#include "oracles.hpp"

using namespace sgd;

namespace {

std::vector<Word> words_over(int i, int j, int n) {
  std::vector<Word> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    Word w;
    for (int b = 0; b < n; ++b) w.push((mask >> b & 1) ? j : i);
    out.push_back(w);
  }
  return out;
}

}  // namespace

TEST_CASE("vertex densities at the corners and midpoints") {
  HarmonicContext ctx = build_context(2);
  VecQ e1 = basis_e(ctx, 1);
  // Corner of the whole set: 2/3. Opposite corners: 1/6 each.
  CHECK(vertex_density(ctx, e1, canonical_vertex(Word{}, 1)) == rat(2, 3));
  CHECK(vertex_density(ctx, e1, canonical_vertex(Word{}, 2)) == rat(1, 6));
  // Edge midpoint between corners 1 and 2: 1/2.
  CHECK(delta_at_vertex(ctx, e1, Word{}, 1, 2) == rat(1, 2));
  // Both gluing representations give the same value.
  auto reps = vertex_representations(Word{}, 1, 2);
  CHECK(vertex_density(ctx, e1, reps[0]) == vertex_density(ctx, e1, reps[1]));
  // i == j reads the corner itself.
  CHECK(delta_at_vertex(ctx, e1, Word{}, 1, 1) == rat(2, 3));
}

TEST_CASE("density gap equals the difference of corner limits") {
  std::mt19937_64 rng{43};
  for (int N : {2, 3}) {
    HarmonicContext ctx = build_context(N);
    HarmonicContext& cx = ctx;
    for (int len : {0, 1, 3}) {
      VecQ u = oracle::random_rat_vec(rng, N + 1);
      Word w = oracle::random_word(rng, N, len);
      Rat direct = corner_limit(cx, u, w, 1).value -
                   corner_limit(cx, u, w, 2).value;
      CHECK(delta_gap(cx, u, w, 1, 2) == direct);
    }
  }
  HarmonicContext c2 = build_context(2);
  CHECK(delta_gap(c2, basis_e(c2, 1), Word{}, 1, 2) == rat(1, 2));
}

TEST_CASE("cross determinants rescale along edge words") {
  std::mt19937_64 rng{47};
  for (int N : {2, 3}) {
    HarmonicContext ctx = build_context(N);
    VecQ u = oracle::random_rat_vec(rng, N + 1);
    Word base = oracle::random_word(rng, N, 2);
    int cap = N == 2 ? 10 : 8;
    for (int n = 0; n <= cap; ++n)
      for (const Word& wp : words_over(1, 2, n))
        CHECK(det_identity_check(ctx, u, base, wp, 1, 2));
    // The per-step factor is explicit: (N+1)/(N+3)^2.
    MatQ aw = word_matrix(ctx, base);
    VecQ before = cross_dets(ctx, u, aw, 1, 2);
    MatQ ext = mat_mul(ctx.A[0], aw);
    VecQ after = cross_dets(ctx, u, ext, 1, 2);
    Rat factor = Rat(N + 1) / Rat((N + 3) * (N + 3));
    for (std::size_t k = 0; k < ctx.size(); ++k)
      CHECK(after[k] == factor * before[k]);
  }
}

TEST_CASE("words leaving the edge pair are rejected") {
  HarmonicContext ctx = build_context(2);
  VecQ u = basis_e(ctx, 1);
  CHECK_THROWS_AS(det_identity_check(ctx, u, Word{}, Word({3}), 1, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(dual_norm_lower_bound_check(ctx, Word({3}), 1, 2, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(dual_norm_lower_bound_check(ctx, Word({1}), 1, 2, 3),
                  std::invalid_argument);
}

TEST_CASE("dual norms never drop below the floor (exhaustive)") {
  HarmonicContext c2 = build_context(2);
  for (int n = 0; n <= 12; ++n)
    for (const Word& wp : words_over(1, 2, n))
      for (int l : {1, 2}) CHECK(dual_norm_lower_bound_check(c2, wp, 1, 2, l));
  HarmonicContext c3 = build_context(3);
  for (int n = 0; n <= 10; ++n)
    for (const Word& wp : words_over(1, 2, n))
      for (int l : {1, 2}) CHECK(dual_norm_lower_bound_check(c3, wp, 1, 2, l));
}

TEST_CASE("prefix attachment loses at most the documented factor") {
  std::mt19937_64 rng{53};
  for (int N : {2, 3}) {
    HarmonicContext ctx = build_context(N);
    for (int rep = 0; rep < 3; ++rep) {
      Word w = oracle::random_word(rng, N, 1 + rep);
      for (int n = 0; n <= 4; ++n)
        for (const Word& wp : words_over(1, 2, n))
          for (int l : {1, 2})
            CHECK(prefix_norm_floor_check(ctx, w, wp, l));
    }
  }
}

TEST_CASE("positive-semidefinite floor minors") {
  for (int N = 2; N <= 6; ++N) {
    HarmonicContext ctx = build_context(N);
    for (int k = 1; k <= N + 1; ++k) {
      CheckReport rep = psd_floor_check(ctx, k);
      CHECK(rep.all_pass());
    }
  }
}

TEST_CASE("gap decay bound with the explicit constant") {
  HarmonicContext ctx = build_context(2);
  VecQ e1 = basis_e(ctx, 1);
  HolderBoundReport rep = holder_bound_check(ctx, e1, Word{}, 1, 2, 10);
  CHECK(rep.all_ok);
  // For this data the constant is 12 (terms 0, 3, 3 times the prefactor),
  // and the n = 0 gap 1/2 sits under bound c/(N+1) = 4.
  CHECK(rep.c_lower == Rat(12));
  CHECK(rep.max_ratio <= 1.0);
  CHECK(rep.max_ratio > 0);
}

TEST_CASE("gap decay bound on random data") {
  std::mt19937_64 rng{59};
  for (int N : {2, 3}) {
    HarmonicContext ctx = build_context(N);
    for (int rep = 0; rep < 3; ++rep) {
      VecQ u = oracle::random_rat_vec(rng, N + 1);
      Word w = oracle::random_word(rng, N, rep);
      HolderBoundReport r = holder_bound_check(ctx, u, w, 1, 2, 8);
      CHECK(r.all_ok);
    }
  }
}

TEST_CASE("edge profile endpoints, midpoint, and gluing") {
  HarmonicContext ctx = build_context(2);
  VecQ e1 = basis_e(ctx, 1);
  EdgeAddress edge(Word{}, 1, 2);
  auto prof = edge_profile(ctx, e1, edge, 1, NumericPolicy::exact());
  REQUIRE(prof.size() == 3);
  CHECK(prof[0].density_exact == "2/3");
  CHECK(prof[1].density_exact == "1/2");
  CHECK(prof[2].density_exact == "1/6");
  CHECK(prof[1].t == doctest::Approx(0.5));

  // Exact and float policies agree to rounding at moderate depth.
  auto pe = edge_profile(ctx, e1, edge, 6, NumericPolicy::exact());
  auto pf = edge_profile(ctx, e1, edge, 6, NumericPolicy::float64());
  REQUIRE(pe.size() == pf.size());
  for (std::size_t k = 0; k < pe.size(); ++k) {
    CHECK(pe[k].density == doctest::Approx(pf[k].density).epsilon(1e-12));
    CHECK(pf[k].density_exact.empty());
  }
}

TEST_CASE("profile samples equal vertex densities at their dyadics") {
  std::mt19937_64 rng{61};
  HarmonicContext ctx = build_context(3);
  VecQ u = oracle::random_rat_vec(rng, 4);
  EdgeAddress edge(Word({2}), 1, 4);
  auto prof = edge_profile(ctx, u, edge, 4, NumericPolicy::exact());
  for (std::size_t k = 0; k < prof.size(); ++k) {
    DyadicPoint p(prof[k].t_num, 4, edge);
    VertexRef v = dyadic_to_path(p);
    Rat want = vertex_density(ctx, u, v);
    CHECK(prof[k].density_exact == rat_to_string(want));
  }
}

TEST_CASE("profile respects depth caps") {
  HarmonicContext ctx = build_context(2);
  VecQ e1 = basis_e(ctx, 1);
  EdgeAddress edge(Word{}, 1, 2);
  CHECK_THROWS_AS(edge_profile(ctx, e1, edge, 13, NumericPolicy::exact()),
                  std::invalid_argument);
  CHECK_THROWS_AS(edge_profile(ctx, e1, edge, 21, NumericPolicy::float64()),
                  std::invalid_argument);
}

TEST_CASE("smoothness quotient stabilizes at the critical exponent") {
  HarmonicContext ctx = build_context(2);
  VecQ e1 = basis_e(ctx, 1);
  EdgeAddress edge(Word{}, 1, 2);
  double theta = holder_exponent(2);
  CHECK(theta == doctest::Approx(std::log2(1.5)));
  auto p10 = edge_profile(ctx, e1, edge, 10, NumericPolicy::float64());
  auto p12 = edge_profile(ctx, e1, edge, 12, NumericPolicy::float64());
  HolderReport h10 = empirical_holder(p10, theta);
  HolderReport h12 = empirical_holder(p12, theta);
  CHECK(h12.sup_quotient / h10.sup_quotient < 1.1);
  // At exponent 1 the quotient keeps growing with depth (the profile is
  // not Lipschitz). The growth locks onto the alternating address
  // t = 2/3, where the increment shrinks by 8/25 per two levels while the
  // spacing shrinks by 4, so the two-level growth factor is exactly 32/25.
  HolderReport l10 = empirical_holder(p10, 1.0);
  HolderReport l12 = empirical_holder(p12, 1.0);
  double growth = l12.sup_quotient / l10.sup_quotient;
  CHECK(growth > 1.2);
  CHECK(growth == doctest::Approx(32.0 / 25.0).epsilon(0.02));
  CHECK(l10.t1 == doctest::Approx(2.0 / 3.0).epsilon(0.01));
}

TEST_CASE("empirical quotient matches a direct quadratic scan") {
  HarmonicContext ctx = build_context(2);
  VecQ e1 = basis_e(ctx, 1);
  EdgeAddress edge(Word{}, 1, 2);
  auto prof = edge_profile(ctx, e1, edge, 7, NumericPolicy::float64());
  double theta = holder_exponent(2);
  HolderReport h = empirical_holder(prof, theta);
  CHECK(h.sup_quotient ==
        doctest::Approx(oracle::sup_quotient(prof, theta)).epsilon(1e-12));
  CHECK(h.t1 != h.t2);
}
