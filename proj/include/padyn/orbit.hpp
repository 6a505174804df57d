#pragma once

#include <vector>

#include "padyn/dynamics.hpp"
#include "padyn/padic.hpp"

namespace padyn {

using PAdicPoint = std::vector<PAdicNumber>;
using RationalPoint = std::vector<BigRational>;

/// Points of (p^s Z_p)^n.
struct Neighbourhood {
  long p = 3;
  int s = 1;
  int n = 1;

  /// Throws PrecisionError when a coordinate is zero only to fewer than s digits.
  bool contains(const PAdicPoint& x) const;
};

struct OrbitResult {
  std::vector<PAdicPoint> points;   ///< x, f(x), ..., f^k(x)
  bool unit_jacobian = false;       ///< det Df(0) is a p-adic unit
  bool injective_on_samples = true; ///< isometry |f(x)-f(y)| = |x-y| on sampled pairs
  int sampled_pairs = 0;
};

/// Iterates f k times in Z/p^precision. Throws InputError for non-integral
/// coefficients or a start outside U, PrecisionError when membership cannot be decided.
OrbitResult iterate_in_neighbourhood(const AnalyticMap& f, const Neighbourhood& U, const PAdicPoint& x, int k,
                                     int precision = 32);

/// Finite sum sum_i a_i b_i^s with rational a_i != 0 and pairwise distinct rational units b_i.
struct VanishingSumInstance {
  std::vector<BigRational> a;
  std::vector<BigRational> b;
  long p = 5;
  int precision = 32;
};

struct SeparatingPolynomial {
  int level = 1;                       ///< s
  BigInt modulus = 1;                  ///< p^s
  std::vector<BigInt> coefficients;    ///< ascending; {1} for a single point
  std::vector<int> norm_valuations;    ///< v_p(P(b_i)), INT_MAX when P(b_i) = 0
  bool properties_hold = false;
};

/// Product of (x - c) over residues c mod p^s outside the class of b[target].
/// s starts at `level` and is raised until the b_i are pairwise distinct mod p^s.
SeparatingPolynomial separating_polynomial(const std::vector<BigRational>& b, long p, std::size_t target,
                                           int level = 1);

struct VanishingCertificate {
  int M = 1;                        ///< common stabilizing exponent
  std::vector<PAdicNumber> c;       ///< log(b_i^M)
  bool torsion_free = true;
  std::vector<int> leading_block;   ///< indices of the a_i of largest norm
  SeparatingPolynomial separation;  ///< separates the first leading index from the rest of the block
};

struct VanishingResult {
  std::vector<int> solutions;
  VanishingCertificate certificate;
};

/// Validates the instance and builds the certificate data (M, logs, torsion check, separation).
VanishingCertificate vanishing_certificate(const VanishingSumInstance& inst);

/// s in [1, S_max] with sum a_i b_i^s = 0: zero at working and doubled precision, confirmed exactly.
VanishingResult vanishing_exponents(const VanishingSumInstance& inst, int S_max);

/// sum a_i b_i^s as a p-adic number at the given precision.
PAdicNumber vanishing_sum(const VanishingSumInstance& inst, long s, int precision);

struct InterpolationResult {
  std::vector<PAdicNumber> values;  ///< m-th divided differences over consecutive windows of m + 1 samples
  PAdicNumber limit = PAdicNumber::zero(3, 1);  ///< sum a_i b_i^s0 (c_i / M)^m / m!
};

InterpolationResult interpolation_reduction(const VanishingSumInstance& inst, long s0, const std::vector<long>& samples,
                                            int m);

/// Kernel of the monomial evaluation matrix in degree <= d.
struct RelationProbe {
  int n = 0;
  int max_degree = 0;
  std::vector<Monomial> monomials;                 ///< column order
  std::vector<std::vector<BigRational>> kernel;
  bool underdetermined = false;                    ///< fewer points than monomials

  std::vector<RationalSeries> relations() const;
};

RelationProbe relation_probe(const std::vector<RationalPoint>& points, int d);

/// Same over Q_p; rank decisions are made at the points' precision.
std::vector<std::vector<PAdicNumber>> relation_probe_padic(const std::vector<PAdicPoint>& points, int d);

/// Monomials of degree <= d in n variables: ascending degree, x_1-heavy first within a degree.
std::vector<Monomial> monomials_up_to(int n, int d);

struct ClosureEstimate {
  int lower_bound = 0;                             ///< rank of the multiplier group
  int estimate = 0;                                ///< independent transformed coordinates found by the probe
  bool squared = false;                            ///< torsion forced passing to f^2
  std::vector<std::vector<BigInt>> exponents;      ///< monomial change y_t = x^{U_t}
  std::vector<BigRational> multipliers;            ///< lambda^{U_t}
  RelationProbe transformed_probe;
  RelationProbe orbit_probe;
};

ClosureEstimate closure_dimension_estimate(const std::vector<BigRational>& lambda, const RationalPoint& start,
                                           int samples, int d);

struct UnionComparison {
  bool equal = false;
  RelationProbe first;
  RelationProbe second;
};

/// Compares the degree <= d relations on the unions of f^i(Y) over S1 and S2.
/// Throws TorsionError when -1 lies in the multiplier group.
UnionComparison union_closure_compare(const AnalyticMap& f, const std::vector<RationalPoint>& Y,
                                      const std::vector<int>& S1, const std::vector<int>& S2, int d);

/// f^i(y) for i = 0..k in exact arithmetic.
std::vector<RationalPoint> rational_orbit(const AnalyticMap& f, const RationalPoint& y, int k);

}  // namespace padyn
