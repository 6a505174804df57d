#include <doctest.h>

#include "padyn/compose.hpp"
#include "padyn/errors.hpp"
#include "support.hpp"

using namespace padyn;
using testing_support::Gen;
using testing_support::poly;

TEST_CASE("multiplication examples") {
  CHECK(poly(1, 2, {{"1", {0}}, {"1", {1}}}) * poly(1, 2, {{"1", {0}}, {"-1", {1}}}) == poly(1, 2, {{"1", {0}}, {"-1", {2}}}));
  CHECK((poly(2, 1, {{"1", {1, 0}}}) * poly(2, 1, {{"1", {0, 1}}})).empty());
  auto s = poly(2, 2, {{"1", {1, 0}}, {"1", {0, 1}}});
  CHECK(s * s == poly(2, 2, {{"1", {2, 0}}, {"2", {1, 1}}, {"1", {0, 2}}}));
  CHECK_THROWS_AS(poly(1, 2, {{"1", {1}}}) * poly(2, 2, {{"1", {1, 0}}}), InputError);
}

TEST_CASE("mixing truncation degrees keeps the minimum") {
  auto a = poly(1, 5, {{"1", {1}}, {"1", {4}}});
  auto b = poly(1, 2, {{"1", {1}}});
  CHECK((a * b).trunc_degree() == 2);
  CHECK((a + b).trunc_degree() == 2);
  CHECK((a + b) == poly(1, 2, {{"2", {1}}}));
}

TEST_CASE("compose examples") {
  RationalTuple swap{poly(2, 3, {{"1", {0, 1}}}), poly(2, 3, {{"1", {1, 0}}})};
  CHECK(compose(poly(2, 3, {{"1", {1, 0}}}), swap) == poly(2, 3, {{"1", {0, 1}}}));

  RationalTuple g{poly(1, 4, {{"1", {1}}, {"1", {2}}})};
  CHECK(compose(poly(1, 4, {{"1", {2}}}), g) == poly(1, 4, {{"1", {2}}, {"2", {3}}, {"1", {4}}}));

  auto expm1 = poly(1, 3, {{"1", {1}}, {"1/2", {2}}, {"1/6", {3}}});
  RationalTuple twice{poly(1, 3, {{"2", {1}}})};
  CHECK(compose(expm1, twice) == poly(1, 3, {{"2", {1}}, {"2", {2}}, {"4/3", {3}}}));

  RationalTuple bad{poly(1, 3, {{"1", {0}}, {"1", {1}}})};
  CHECK_THROWS_AS(compose(expm1, bad), InputError);
}

TEST_CASE("invert_tuple examples") {
  RationalTuple lin{poly(1, 3, {{"2", {1}}})};
  CHECK(invert_tuple(lin)[0] == poly(1, 3, {{"1/2", {1}}}));
  RationalTuple g{poly(1, 3, {{"1", {1}}, {"1", {2}}})};
  CHECK(invert_tuple(g)[0] == poly(1, 3, {{"1", {1}}, {"-1", {2}}, {"2", {3}}}));
  RationalTuple sing{poly(2, 3, {{"1", {1, 0}}}), poly(2, 3, {{"1", {1, 0}}, {"1", {0, 2}}})};
  CHECK_THROWS(invert_tuple(sing));
}

TEST_CASE("gauss_norm examples") {
  CHECK(gauss_norm(RationalSeries(2, 3), 1, 2).zero);
  auto phi = poly(2, 3, {{"1", {1, 0}}, {"2", {0, 2}}});
  auto n1 = gauss_norm(phi, 1, 2);
  CHECK(n1.value == 1);
  CHECK(exponents_of(n1.witness, 2) == std::vector<int>{1, 0});
  auto n2 = gauss_norm(phi, BigRational(1, 2), 2);
  CHECK(n2.value == BigRational(1, 2));
  CHECK(exponents_of(n2.witness, 2) == std::vector<int>{1, 0});
  CHECK_THROWS_AS(gauss_norm(phi, 0, 2), InputError);
  CHECK_THROWS_AS(gauss_norm(phi, 1, 4), InputError);
}

TEST_CASE("in_subspace_Ar examples") {
  CHECK(in_subspace_Ar(poly(4, 3, {{"1", {0, 0, 1, 1}}}), 2));
  CHECK_FALSE(in_subspace_Ar(poly(4, 3, {{"1", {1, 0, 1, 0}}}), 2));
  CHECK(in_subspace_Ar(poly(2, 3, {{"1", {2, 0}}}), 0));
}

TEST_CASE("gauss norm is multiplicative and ultrametric") {
  Gen g(21);
  for (int i = 0; i < 300; ++i) {
    const long p = g.pick(std::vector<long>{2, 3, 5});
    const int n = static_cast<int>(g.integer(1, 3));
    auto a = g.series(n, 8, 0, 4, static_cast<int>(g.integer(1, 4)));
    auto b = g.series(n, 8, 0, 4, static_cast<int>(g.integer(1, 4)));
    const BigRational rho = g.pick(std::vector<BigRational>{BigRational(1), BigRational(1, 2), BigRational(3, 4), BigRational(2)});
    CHECK(gauss_norm(a * b, rho, p).value == gauss_norm(a, rho, p).value * gauss_norm(b, rho, p).value);
    auto s = a + b;
    if (!s.empty()) CHECK(gauss_norm(s, rho, p).value <= std::max(gauss_norm(a, rho, p).value, gauss_norm(b, rho, p).value));
  }
}

TEST_CASE("compose is associative") {
  Gen g(22);
  for (int i = 0; i < 40; ++i) {
    const int n = static_cast<int>(g.integer(1, 2));
    const int N = 6;
    auto tuple = [&] {
      RationalTuple t;
      for (int j = 0; j < n; ++j) t.push_back(g.series(n, N, 1, 3, 3));
      return t;
    };
    auto phi = g.series(n, N, 1, 3, 3);
    auto G = tuple(), K = tuple();
    CHECK(compose(phi, compose(G, K)) == compose(compose(phi, G), K));
  }
}

TEST_CASE("invert_tuple is an involution and a two-sided inverse") {
  Gen g(23);
  for (int i = 0; i < 40; ++i) {
    const int n = static_cast<int>(g.integer(1, 3));
    const int N = 6;
    RationalTuple t;
    for (int j = 0; j < n; ++j) {
      RationalSeries s = g.series(n, N, 2, 4, 3);
      s.add_term(variable_monomial(j), g.nonzero_rational());
      t.push_back(s);
    }
    auto inv = invert_tuple(t);
    CHECK(invert_tuple(inv) == t);
    CHECK(compose(t, inv) == identity_tuple(n, N, BigRational(1)));
    CHECK(compose(inv, t) == identity_tuple(n, N, BigRational(1)));
  }
}

TEST_CASE("A^(r) is an ideal") {
  Gen g(24);
  for (int i = 0; i < 200; ++i) {
    const int n = static_cast<int>(g.integer(2, 4));
    const int r = static_cast<int>(g.integer(0, n - 1));
    RationalSeries phi(n, 8);
    for (int t = 0; t < 3; ++t) {
      std::vector<int> e = g.exponents(n, static_cast<int>(g.integer(0, 2)));
      e[static_cast<std::size_t>(g.integer(r, n - 1))] += 1;
      e[static_cast<std::size_t>(g.integer(r, n - 1))] += 1;
      phi.add_term(e, g.nonzero_rational());
    }
    REQUIRE(in_subspace_Ar(phi, r));
    auto psi = g.series(n, 8, 0, 3, 3);
    CHECK(in_subspace_Ar(phi * psi, r));
  }
}

TEST_CASE("derivative and evaluation") {
  auto s = poly(2, 4, {{"3", {2, 1}}, {"1", {0, 3}}});
  CHECK(s.derivative(0) == poly(2, 3, {{"6", {1, 1}}}));
  CHECK(s.derivative(1) == poly(2, 3, {{"3", {2, 0}}, {"3", {0, 2}}}));
  CHECK(s.evaluate({BigRational(2), BigRational(1, 2)}, BigRational(0)) == BigRational(6) + BigRational(1, 8));
}
