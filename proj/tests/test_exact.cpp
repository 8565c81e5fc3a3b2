#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sgd/linalg.hpp>
#include <sgd/rational.hpp>

#include "oracles.hpp"

using namespace sgd;

TEST_CASE("rational literals parse exactly") {
  CHECK(parse_rational("3/4") == rat(3, 4));
  CHECK(parse_rational("-6/8") == rat(-3, 4));
  CHECK(parse_rational("7") == rat(7));
  CHECK(parse_rational("0.125") == rat(1, 8));
  CHECK(parse_rational("-3.5e-2") == rat(-7, 200));
  CHECK(parse_rational("2e3") == rat(2000));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("rational printing is canonical") {
  CHECK(rat_to_string(rat(3, 4)) == "3/4");
  CHECK(rat_to_string(rat(-6, 8)) == "-3/4");
  CHECK(rat_to_string(rat(5)) == "5");
  CHECK(rat_to_string(Rat(0)) == "0");
  // Equal values print identically regardless of construction route.
  CHECK(rat_to_string(rat(2, 6)) == rat_to_string(rat(1, 3)));
}

TEST_CASE("rat helper canonicalizes") {
  CHECK(rat(2, 8) == rat(1, 4));
  CHECK(rat(2, 2) == Rat(1));
  CHECK(rat(0, 5) == Rat(0));
  CHECK(rat(3, -6) == rat(-1, 2));  // sign moves to the numerator
}

TEST_CASE("integer powers of rationals") {
  CHECK(rat_pow(rat(2, 3), 3) == rat(8, 27));
  CHECK(rat_pow(rat(2, 3), 0) == Rat(1));
  CHECK(rat_pow(rat(2, 3), -2) == rat(9, 4));
  CHECK(rat_pow(rat(-1, 2), 3) == rat(-1, 8));
  CHECK_THROWS_AS(rat_pow(Rat(0), -1), std::invalid_argument);
}

TEST_CASE("square-root brackets enclose tightly") {
  for (const Rat& x : {rat(2), rat(9, 4), rat(1, 3), rat(10000), Rat(0)}) {
    Rat lo = sqrt_lower(x, 64), hi = sqrt_upper(x, 64);
    CHECK(lo * lo <= x);
    CHECK(hi * hi >= x);
    CHECK(hi - lo <= rat_pow(rat(1, 2), 60));
    CHECK(lo >= 0);
  }
  CHECK(sqrt_lower(rat(9, 4), 64) == rat(3, 2));
  CHECK(sqrt_upper(rat(9, 4), 64) == rat(3, 2));
}

TEST_CASE("float conversion is correctly rounded for small values") {
  CHECK(to_double(rat(1, 2)) == 0.5);
  CHECK(to_double(rat(-3, 4)) == -0.75);
  // Values far below double-subtraction resolution survive conversion.
  Rat tiny = rat_pow(rat(1, 3), 60);
  CHECK(to_double(tiny) == doctest::Approx(std::pow(3.0, -60)).epsilon(1e-12));
}

TEST_CASE("matrix-vector plumbing in exact arithmetic") {
  MatQ m(2, 2);
  m(0, 0) = rat(1, 2);
  m(0, 1) = rat(1, 3);
  m(1, 0) = rat(1, 5);
  m(1, 1) = rat(1, 7);
  VecQ x{rat(2), rat(-3)};
  VecQ y = mat_vec(m, x);
  CHECK(y[0] == Rat(0));
  CHECK(y[1] == rat(2, 5) - rat(3, 7));

  MatQ t = transpose(m);
  CHECK(t(0, 1) == m(1, 0));
  CHECK(inner(x, x) == Rat(13));
  CHECK(quad_form(x, m, x) == (rat(1, 2) * 4 - rat(1, 3) * 6 - rat(1, 5) * 6 +
                               rat(1, 7) * 9));
}

TEST_CASE("matrix products compose and respect identity") {
  std::mt19937_64 rng{7};
  MatQ a(3, 3), b(3, 3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      a(r, c) = oracle::random_rat_vec(rng, 1)[0];
      b(r, c) = oracle::random_rat_vec(rng, 1)[0];
    }
  MatQ id = MatQ::identity(3);
  CHECK(mat_mul(a, id) == a);
  CHECK(mat_mul(id, a) == a);
  // (a b) x == a (b x)
  VecQ x = oracle::random_rat_vec(rng, 3);
  CHECK(mat_vec(mat_mul(a, b), x) == mat_vec(a, mat_vec(b, x)));
  // transpose reverses products
  CHECK(transpose(mat_mul(a, b)) == mat_mul(transpose(b), transpose(a)));
}

TEST_CASE("exact inverse and linear solves") {
  std::mt19937_64 rng{11};
  for (int rep = 0; rep < 5; ++rep) {
    MatQ a(3, 3);
    do {
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) a(r, c) = oracle::random_rat_vec(rng, 1)[0];
    } while (determinant(a) == 0);
    MatQ inv = mat_inverse(a);
    CHECK(mat_mul(a, inv) == MatQ::identity(3));
    CHECK(mat_mul(inv, a) == MatQ::identity(3));
    VecQ b = oracle::random_rat_vec(rng, 3);
    VecQ x = solve_linear(a, b);
    CHECK(mat_vec(a, x) == b);
  }
  MatQ sing(2, 2);
  sing(0, 0) = 1;
  sing(0, 1) = 2;
  sing(1, 0) = 2;
  sing(1, 1) = 4;
  CHECK(determinant(sing) == 0);
  CHECK_THROWS(mat_inverse(sing));
}

TEST_CASE("determinants multiply and leading minors slice") {
  std::mt19937_64 rng{13};
  MatQ a(3, 3), b(3, 3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      a(r, c) = oracle::random_rat_vec(rng, 1)[0];
      b(r, c) = oracle::random_rat_vec(rng, 1)[0];
    }
  CHECK(determinant(mat_mul(a, b)) == determinant(a) * determinant(b));
  CHECK(leading_minor(a, 1) == a(0, 0));
  CHECK(leading_minor(a, 2) == a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0));
  CHECK(leading_minor(a, 3) == determinant(a));
}

TEST_CASE("rank detects exact dependence") {
  MatQ m(3, 3);
  // Rows: r0, r1, r0 + r1.
  m(0, 0) = rat(1, 2);
  m(0, 1) = rat(2);
  m(0, 2) = rat(-1, 3);
  m(1, 0) = rat(1);
  m(1, 1) = rat(0);
  m(1, 2) = rat(5, 7);
  for (int c = 0; c < 3; ++c) m(2, c) = m(0, c) + m(1, c);
  CHECK(mat_rank(m) == 2);
  m(2, 2) += rat(1, 1000000);
  CHECK(mat_rank(m) == 3);
}

TEST_CASE("float mirrors track exact data") {
  MatQ m(2, 2);
  m(0, 0) = rat(1, 3);
  m(0, 1) = rat(-2, 7);
  m(1, 0) = rat(0);
  m(1, 1) = rat(22, 7);
  MatF f = to_float(m);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      CHECK(f(r, c) == doctest::Approx(to_double(m(r, c))).epsilon(1e-15));
}
