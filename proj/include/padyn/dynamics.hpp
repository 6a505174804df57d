#pragma once

#include <vector>

#include "padyn/matrix.hpp"
#include "padyn/series.hpp"

namespace padyn {

/// Germ of a self-map of affine n-space at the origin, given by n truncated
/// series. The first r coordinates parametrize the declared fixed locus
/// {x_{r+1} = ... = x_n = 0}.
struct AnalyticMap {
  int n = 0;
  int r = 0;
  RationalTuple components;

  int trunc_degree() const { return tuple_trunc_degree(components); }
};

/// Validates zero constant terms, 0 <= r <= n and that the declared locus is
/// pointwise fixed (f_i(x', 0) = x_i for i <= r, f_i(x', 0) = 0 otherwise).
AnalyticMap make_map(RationalTuple components, int r = 0);

/// Same map with every component truncated (or padded) to degree N.
AnalyticMap with_truncation(const AnalyticMap& f, int N);

RationalMatrix jacobian_at_origin(const AnalyticMap& f);

struct Resonance {
  std::vector<int> exponents;  ///< I, supported on the tail variables
  int component;               ///< j (0-based) with lambda^I = lambda_j
};

struct EigenData {
  std::vector<BigRational> eigenvalues;
  bool semisimple = false;
  std::vector<Resonance> resonances;
  std::vector<std::vector<BigInt>> relation_basis;
  int rank = 0;
  bool torsion_free = true;
};

/// Rational eigenvalues with multiplicity. Triangular matrices keep their
/// diagonal order; otherwise eigenvalues equal to 1 come first, the rest ascending.
/// Throws IrrationalEigenvalue when the characteristic polynomial does not split over Q.
EigenData rational_eigenvalues(const RationalMatrix& m);

/// All (I, j) with I supported on x_{r+1}..x_n, 2 <= |I| <= max_degree and
/// lambda^I = lambda_j, in graded order of I then j.
std::vector<Resonance> enumerate_resonances(const std::vector<BigRational>& lambda, int r, int max_degree);

struct RelationLattice {
  std::vector<BigInt> primes;                   ///< primes occurring in some lambda_i
  std::vector<std::vector<BigInt>> basis;       ///< Hermite normal form rows of {I : lambda^I = 1}
  int rank = 0;                                 ///< rank of the group H generated by the lambda_i
  bool torsion_free = true;                     ///< false iff -1 lies in H
  bool within_bound = true;                     ///< every basis entry is at most exponent_bound in size
  /// Unimodular U whose first `rank` rows give independent multipliers lambda^{U_t}
  /// and whose remaining rows satisfy lambda^{U_t} = +-1.
  std::vector<std::vector<BigInt>> unimodular;
};

RelationLattice relation_lattice(const std::vector<BigRational>& lambda, long exponent_bound = 64);

/// Rows in Hermite normal form (positive pivots, reduced above), zero rows dropped.
std::vector<std::vector<BigInt>> hermite_normal_form(std::vector<std::vector<BigInt>> rows);

struct SymplecticReport {
  bool scaling_holds = false;
  std::vector<std::pair<int, int>> pairs;        ///< matched eigen-directions (0-based)
  std::vector<std::pair<BigRational, BigRational>> eigenvalue_pairs;
  bool pairing_consistent = false;               ///< every pair multiplies to mu
};

/// Checks M^T sigma M = mu sigma exactly; on success with M semisimple over Q
/// reports a perfect matching of eigenvectors that sigma pairs nontrivially.
SymplecticReport symplectic_scaling_check(const RationalMatrix& m, const RationalMatrix& sigma, const BigRational& mu);

/// Standard form pairing e_i with e_{i+m} in dimension 2m.
RationalMatrix standard_symplectic_form(int two_m);

/// Smallest odd prime at which all eigenvalues are p-adic units and all
/// coefficients of the map are p-integral.
long default_prime(const AnalyticMap& f, const std::vector<BigRational>& eigenvalues);

}  // namespace padyn
