#include <doctest.h>

#include <algorithm>

#include "padyn/eisenstein.hpp"
#include "padyn/errors.hpp"
#include "support.hpp"

using namespace padyn;
using testing_support::Gen;
using testing_support::poly;

namespace {

RationalSeries with_trunc(const RationalSeries& s, int N) {
  RationalSeries out(s.num_vars(), N);
  s.for_each([&](Monomial m, const BigRational& c) { out.add_term(m, c); });
  return out;
}

RationalSeries univariate(const std::vector<BigRational>& c) {
  RationalSeries s(1, static_cast<int>(c.size()) - 1);
  for (std::size_t k = 0; k < c.size(); ++k) s.add_term(std::vector<int>{static_cast<int>(k)}, c[k]);
  return s;
}

// x (1 + 3 sqrt(1 + 4x/9)) / 2, a root of X^2 - x X - 2x^2 - x^3.
std::vector<BigRational> ramified_oracle(int d) {
  auto b = testing_support::binomial_half(d);
  std::vector<BigRational> out(static_cast<std::size_t>(d) + 1, BigRational(0));
  for (int k = 0; k + 1 <= d; ++k) {
    BigRational coeff = 3 * b[static_cast<std::size_t>(k)] * rpow(BigRational(4, 9), k);
    if (k == 0) coeff += 1;
    out[static_cast<std::size_t>(k) + 1] = coeff / 2;
  }
  return out;
}

XPolynomial ramified_F(int n) {
  // u = x_1 + ... + x_n; F = X^2 - u X - 2u^2 - u^3
  RationalSeries u(n, 3);
  for (int i = 0; i < n; ++i) u.add_term(variable_monomial(i), 1);
  return {-(2 * (u * u) + u * u * u), -u, RationalSeries::constant(n, 3, 1)};
}

}  // namespace

TEST_CASE("detect_vanishing_order examples") {
  XPolynomial sqrt_F{poly(1, 4, {{"-1", {0}}, {"-1", {1}}}), RationalSeries(1, 4), poly(1, 4, {{"1", {0}}})};
  CHECK(detect_vanishing_order(sqrt_F, poly(1, 0, {{"1", {0}}})) == 0);

  XPolynomial ramified{poly(1, 4, {{"-1", {1}}}), RationalSeries(1, 4), poly(1, 4, {{"1", {0}}})};
  CHECK_THROWS_AS(detect_vanishing_order(ramified, RationalSeries(1, 0)), InputError);

  // (X - x)^2 - x^3: with X = x + Y the Newton polygon of Y^2 - x^3 has slope 3/2, so no root lies in Q[[x]]
  XPolynomial cusp{poly(1, 4, {{"1", {2}}, {"-1", {3}}}), poly(1, 4, {{"-2", {1}}}), poly(1, 4, {{"1", {0}}})};
  CHECK(BigRational(3, 2).get_den() != 1);
  CHECK_THROWS_AS(detect_vanishing_order(cusp, poly(1, 1, {{"1", {1}}})), InputError);
  CHECK_THROWS_AS(make_algebraic_spec(cusp, poly(1, 1, {{"1", {1}}})), InputError);

  XPolynomial F = ramified_F(1);
  CHECK(detect_vanishing_order(F, poly(1, 1, {{"2", {1}}})) == 1);
}

TEST_CASE("seeds that are not roots are rejected") {
  XPolynomial sqrt_F{poly(1, 4, {{"-1", {0}}, {"-1", {1}}}), RationalSeries(1, 4), poly(1, 4, {{"1", {0}}})};
  CHECK_THROWS_AS(make_algebraic_spec(sqrt_F, poly(1, 0, {{"2", {0}}})), InputError);
  CHECK_THROWS_AS(make_algebraic_spec(ramified_F(1), poly(1, 1, {{"3", {1}}})), InputError);
}

TEST_CASE("coefficients_up_to examples") {
  XPolynomial sqrt_F{poly(1, 4, {{"-1", {0}}, {"-1", {1}}}), RationalSeries(1, 4), poly(1, 4, {{"1", {0}}})};
  auto spec = make_algebraic_spec(sqrt_F, poly(1, 0, {{"1", {0}}}));
  CHECK(coefficients_up_to(spec, 4) == poly(1, 4, {{"1", {0}}, {"1/2", {1}}, {"-1/8", {2}}, {"1/16", {3}}, {"-5/128", {4}}}));
  CHECK(coefficients_up_to(spec, 4, true) == coefficients_up_to(spec, 4));

  auto g = poly(2, 5, {{"3", {0, 0}}, {"1", {1, 2}}, {"-2/7", {0, 3}}});
  XPolynomial linear{-g, RationalSeries::constant(2, 5, 1)};
  auto lspec = make_algebraic_spec(linear, poly(2, 0, {{"3", {0, 0}}}));
  CHECK(coefficients_up_to(lspec, 5) == g);

  XPolynomial two{poly(2, 2, {{"-1", {0, 0}}, {"-1", {1, 0}}, {"-1", {0, 1}}}), RationalSeries(2, 2), RationalSeries::constant(2, 2, 1)};
  auto tspec = make_algebraic_spec(two, poly(2, 0, {{"1", {0, 0}}}));
  auto u = poly(2, 2, {{"1", {1, 0}}, {"1", {0, 1}}});
  CHECK(coefficients_up_to(tspec, 2) == RationalSeries::constant(2, 2, 1) + BigRational(1, 2) * u - BigRational(1, 8) * (u * u));
}

TEST_CASE("recursion with positive vanishing order") {
  const int d = 12;
  auto spec = make_algebraic_spec(ramified_F(1), poly(1, 1, {{"2", {1}}}));
  CHECK(spec.s == 1);
  auto phi = coefficients_up_to(spec, d);
  CHECK(phi == univariate(ramified_oracle(d)));

  // two variables: substitute u = x1 + x2 into the univariate oracle
  auto spec2 = make_algebraic_spec(ramified_F(2), poly(2, 1, {{"2", {1, 0}}, {"2", {0, 1}}}));
  const int d2 = 7;
  auto phi2 = coefficients_up_to(spec2, d2);
  auto oracle = ramified_oracle(d2);
  RationalSeries u = poly(2, d2, {{"1", {1, 0}}, {"1", {0, 1}}});
  RationalSeries want(2, d2), upow = RationalSeries::constant(2, d2, 1);
  for (int k = 0; k <= d2; ++k) {
    want = want + oracle[static_cast<std::size_t>(k)] * upow;
    upow = upow * u;
  }
  CHECK(phi2 == want);
}

TEST_CASE("pivot division") {
  auto num = poly(2, 3, {{"1", {2, 1}}, {"1", {1, 2}}});
  auto den = poly(2, 3, {{"1", {1, 0}}, {"1", {0, 1}}});
  CHECK(divide_homogeneous(num, den) == poly(2, 3, {{"1", {1, 1}}}));
  CHECK_THROWS_AS(divide_homogeneous(poly(2, 3, {{"1", {1, 0}}}), poly(2, 3, {{"1", {0, 1}}})), ObstructionError);
  CHECK_THROWS_AS(divide_homogeneous(poly(2, 3, {{"1", {2, 0}}, {"1", {0, 2}}}), den), ObstructionError);
  CHECK(valuation_less(variable_monomial(0), variable_monomial(1), 2));
  CHECK(valuation_less(monomial_from({5, 0}), monomial_from({0, 1}), 2));
}

TEST_CASE("root identity, stability and agreement with Hensel lifting") {
  Gen g(51);
  for (int i = 0; i < 30; ++i) {
    const int n = static_cast<int>(g.integer(1, 2));
    const int d = static_cast<int>(g.integer(4, 7));
    // X^3 + X - (2 + c(x)) has the root 1 modulo the maximal ideal, with F'(1) = 4
    RationalSeries c = g.series(n, 3, 1, 3, 3);
    XPolynomial F{-(RationalSeries::constant(n, 3, 2) + c), RationalSeries::constant(n, 3, 1), RationalSeries(n, 3),
                  RationalSeries::constant(n, 3, 1)};
    auto spec = make_algebraic_spec(F, RationalSeries::constant(n, 0, 1));
    REQUIRE(spec.s == 0);
    auto phi = coefficients_up_to(spec, d);
    CHECK(evaluate_x_polynomial(F, phi).empty());
    CHECK(coefficients_up_to(spec, d, true) == phi);
    CHECK(coefficients_up_to(spec, d - 2) == phi.truncated(d - 2));
    auto small = denominator_support(coefficients_up_to(spec, d - 2)).primes;
    auto big = denominator_support(phi).primes;
    for (const auto& p : small) CHECK(std::find(big.begin(), big.end(), p) != big.end());
  }
  auto spec = make_algebraic_spec(ramified_F(2), poly(2, 1, {{"2", {1, 0}}, {"2", {0, 1}}}));
  for (int d : {3, 5, 6}) {
    auto phi = coefficients_up_to(spec, d);
    CHECK(evaluate_x_polynomial(spec.F, with_trunc(phi, d + spec.s)).empty());
  }
}

TEST_CASE("denominator_support examples") {
  XPolynomial sqrt_F{poly(1, 4, {{"-1", {0}}, {"-1", {1}}}), RationalSeries(1, 4), poly(1, 4, {{"1", {0}}})};
  auto spec = make_algebraic_spec(sqrt_F, poly(1, 0, {{"1", {0}}}));
  auto sup = denominator_support(coefficients_up_to(spec, 200));
  CHECK(sup.primes == std::vector<BigInt>{2});
  CHECK(sup.radical == 2);

  auto ints = denominator_support(poly(2, 3, {{"3", {1, 0}}, {"-7", {1, 2}}}));
  CHECK(ints.primes.empty());
  CHECK(ints.radical == 1);

  RationalSeries e(1, 10);
  for (int k = 1; k <= 10; ++k) e.add_term(std::vector<int>{k}, testing_support::factorial_inverse(k));
  auto fs = denominator_support(e);
  CHECK(fs.primes == std::vector<BigInt>{2, 3, 5, 7});
  CHECK(fs.radical == 210);
}
