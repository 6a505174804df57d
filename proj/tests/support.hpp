#pragma once

#include <random>
#include <string>
#include <vector>

#include "padyn/dynamics.hpp"
#include "padyn/series.hpp"

namespace testing_support {

using namespace padyn;

inline BigRational q(const char* s) { return parse_rational(s); }

/// Builds a series from (coefficient, exponents) pairs.
inline RationalSeries poly(int n, int N, std::initializer_list<std::pair<const char*, std::vector<int>>> terms) {
  RationalSeries s(n, N);
  for (const auto& [c, e] : terms) s.add_term(e, parse_rational(c));
  return s;
}

struct Fixture {
  std::string name;
  AnalyticMap map;
};

/// The map suite shared by the conjugacy and Newton checks, truncated at N.
inline std::vector<Fixture> fixture_suite(int N) {
  std::vector<Fixture> out;
  out.push_back({"2x+x^2", make_map({poly(1, N, {{"2", {1}}, {"1", {2}}})})});
  out.push_back({"(x1+x2^2, -2x2)", make_map({poly(2, N, {{"1", {1, 0}}, {"1", {0, 2}}}), poly(2, N, {{"-2", {0, 1}}})}, 1)});
  out.push_back({"diag(1,1,-2,-2) + A^(2) tail",
                 make_map({poly(4, N, {{"1", {1, 0, 0, 0}}, {"1", {0, 0, 1, 1}}}),
                           poly(4, N, {{"1", {0, 1, 0, 0}}, {"1", {0, 0, 2, 0}}, {"1", {1, 0, 0, 2}}}),
                           poly(4, N, {{"-2", {0, 0, 1, 0}}, {"1", {0, 0, 1, 1}}, {"1", {0, 1, 2, 0}}}),
                           poly(4, N, {{"-2", {0, 0, 0, 1}}, {"1", {0, 0, 0, 2}}, {"1", {1, 0, 1, 1}}})},
                          2)});
  out.push_back({"lambda=(2,3,5)", make_map({poly(3, N, {{"2", {1, 0, 0}}, {"1", {0, 2, 0}}}),
                                             poly(3, N, {{"3", {0, 1, 0}}, {"1", {1, 0, 1}}}),
                                             poly(3, N, {{"5", {0, 0, 1}}, {"1", {2, 0, 0}}, {"-1/2", {1, 1, 1}}})})});
  out.push_back({"(2x+y^2, 3y+x^2)", make_map({poly(2, N, {{"2", {1, 0}}, {"1", {0, 2}}}), poly(2, N, {{"3", {0, 1}}, {"1", {2, 0}}})})});
  out.push_back({"(x1+x2+x2^2, -2x2+x1x2^2)",
                 make_map({poly(2, N, {{"1", {1, 0}}, {"1", {0, 1}}, {"1", {0, 2}}}), poly(2, N, {{"-2", {0, 1}}, {"1", {1, 2}}})}, 1)});
  out.push_back({"tail block [[-2,x1],[0,-3]]", make_map({poly(3, N, {{"1", {1, 0, 0}}, {"1", {0, 1, 1}}}),
                                                         poly(3, N, {{"-2", {0, 1, 0}}, {"1", {1, 0, 1}}, {"1", {0, 0, 2}}}),
                                                         poly(3, N, {{"-3", {0, 0, 1}}, {"1", {0, 2, 0}}})},
                                                        1)});
  out.push_back({"lambda=(1/2,3)", make_map({poly(2, N, {{"1/2", {1, 0}}, {"1", {0, 2}}}), poly(2, N, {{"3", {0, 1}}, {"1", {1, 1}}})})});
  return out;
}

/// Seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[static_cast<std::size_t>(integer(0, static_cast<long>(v.size()) - 1))]; }

  BigRational rational(long num_bound = 20, long den_bound = 6) {
    long num = integer(-num_bound, num_bound);
    long den = integer(1, den_bound);
    return make_rational(num, den);
  }
  BigRational nonzero_rational(long num_bound = 20, long den_bound = 6) {
    BigRational r = 0;
    while (sgn(r) == 0) r = rational(num_bound, den_bound);
    return r;
  }
  /// Rational with denominator prime to p.
  BigRational integral_rational(long p, long bound = 20) {
    long den = 0;
    do den = integer(1, 9); while (den % p == 0);
    return make_rational(integer(-bound, bound), den);
  }

  std::vector<int> exponents(int n, int degree) {
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    for (int k = 0; k < degree; ++k) ++e[static_cast<std::size_t>(integer(0, n - 1))];
    return e;
  }

  /// Random nonzero polynomial with `terms` terms of degree in [lo, hi].
  RationalSeries series(int n, int N, int lo, int hi, int terms) {
    RationalSeries s(n, N);
    while (s.empty()) {
      for (int t = 0; t < terms; ++t) s.add_term(exponents(n, static_cast<int>(integer(lo, hi))), nonzero_rational());
    }
    return s;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Coefficients of (1+x)^(1/2) through degree d by the binomial recurrence.
inline std::vector<BigRational> binomial_half(int d) {
  std::vector<BigRational> c{BigRational(1)};
  for (int k = 0; k < d; ++k) c.push_back(c.back() * (BigRational(1, 2) - k) / (k + 1));
  return c;
}

inline BigRational factorial_inverse(int k) {
  BigInt f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return BigRational(BigInt(1), f);
}

}  // namespace testing_support
