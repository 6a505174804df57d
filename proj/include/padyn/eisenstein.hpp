#pragma once

#include <vector>

#include "padyn/series.hpp"

namespace padyn {

/// F(x; X) = sum_k F[k](x) X^k with polynomial coefficients in x_1..x_n.
using XPolynomial = std::vector<RationalSeries>;

struct AlgebraicSeriesSpec {
  XPolynomial F;
  RationalSeries seed;       ///< root known modulo degree seed.trunc_degree() + 1
  int s = 0;                 ///< order of F'(seed)
  Monomial pivot_monomial = 0;
  BigRational pivot = 0;     ///< coefficient of the v-minimal monomial of F'(seed)_(s)
  RationalSeries derivative_layer;  ///< F'(seed)_(s)
};

/// Order of F'(seed); throws InputError when F'(seed) vanishes through the seed's degree.
int detect_vanishing_order(const XPolynomial& F, const RationalSeries& seed);

/// Validates the seed (F(seed) vanishes through degree t + s, t the seed degree) and fixes the pivot.
AlgebraicSeriesSpec make_algebraic_spec(XPolynomial F, RationalSeries seed);

/// The root through degree d. s = 0 uses Hensel lifting unless force_recursion is set.
RationalSeries coefficients_up_to(const AlgebraicSeriesSpec& spec, int d, bool force_recursion = false);

/// F evaluated at a series, truncated at the series' degree.
RationalSeries evaluate_x_polynomial(const XPolynomial& F, const RationalSeries& phi);
XPolynomial derivative_in_X(const XPolynomial& F);

/// Exact division of homogeneous polynomials by repeatedly cancelling the
/// v-minimal monomial (x_n weighs more than x_{n-1}, and so on).
/// Throws ObstructionError when the division is not exact.
RationalSeries divide_homogeneous(const RationalSeries& numerator, const RationalSeries& divisor);

/// True when a precedes b in the valuation order used for pivots.
bool valuation_less(Monomial a, Monomial b, int n);

struct DenominatorSupport {
  std::vector<BigInt> primes;
  BigInt radical = 1;  ///< product of the primes
};

DenominatorSupport denominator_support(const RationalSeries& phi);

}  // namespace padyn
