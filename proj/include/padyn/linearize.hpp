#pragma once

#include <optional>
#include <vector>

#include "padyn/compose.hpp"
#include "padyn/dynamics.hpp"

namespace padyn {

/// |lambda^I - lambda_j| >= C |I|^-beta for |I| >= 2.
struct DiophantineParams {
  BigRational C = 1;
  BigRational beta = 0;
};

/// The constant of the homological norm bound implied by the parameters:
/// max(1, ceil(beta)^ceil(beta)) / C.
BigRational derived_C1(const DiophantineParams& params);

/// coeff * base^exponent with positive rationals; exact comparison against rationals.
struct RationalPower {
  BigRational coeff = 0;
  BigRational base = 1;
  BigRational exponent = 0;

  bool at_most(const BigRational& bound) const;
  /// Exact value when the exponent is an integer.
  std::optional<BigRational> exact() const;
  std::string to_string() const;
};

struct ConjugacyResult {
  RationalTuple h;
  RationalTuple h_inverse;
  int verified_degree = 0;
  RationalTuple residual;  ///< f∘h - h∘Λ at the working truncation
  std::vector<BigInt> denominator_primes;
  std::vector<BigRational> eigenvalues;
  RationalTuple normalizing_change;  ///< T with h = T∘h_normal (identity when f was already normal)
};

struct NormBoundCertificate {
  bool passes = true;
  GaussNorm g_norm;         ///< ||g||_rho
  GaussNorm w_norm;         ///< ||w||_{rho-delta}
  GaussNorm dw_norm;        ///< ||Dw||_{rho-delta}
  GaussNorm dw_lambda_norm; ///< ||Dw∘Λ||_{rho-delta}
  RationalPower minimal_C1; ///< smallest C1 making all three inequalities hold
  BigRational C1;           ///< constant the instance was checked against
};

struct NewtonIteration {
  int index = 0;
  BigRational radius;            ///< rho_i
  int residual_order = 0;        ///< lowest degree of F_f(h_i)
  int delta_order = 0;           ///< lowest degree of Delta_i
  int vanishing_through = 0;     ///< F_f(h_{i+1}) vanishes through this degree
  GaussNorm residual_norm;       ///< ||F_f(h_i)||_{rho_i}
  GaussNorm delta_norm;          ///< ||Delta_i||_{rho_{i+1}}
  NormBoundCertificate bound;    ///< homological bound with delta = rho_i - rho_{i+1}
};

struct NewtonTrace {
  std::vector<NewtonIteration> iterations;
  DiophantineParams params;
  BigRational C1;
  long prime = 0;
  int rescale_exponent = 0;  ///< u = p^-k; the iteration runs on u f(u^-1 x)
  bool bound_violations = false;
};

struct NormalizedMap {
  AnalyticMap map;
  RationalTuple change;  ///< h with map = h^-1∘f∘h
};

/// Block normalization for r >= 1: h = (x' + a'(a'')^-1 x'', x'').
NormalizedMap normalize_mod_IF2(const AnalyticMap& f);

/// Makes the linear-in-x'' part diagonal with the given constant tail
/// eigenvalues using the projectors onto the eigenspaces of A(x').
NormalizedMap diagonalize_normal_part(const AnalyticMap& f, const std::vector<BigRational>& tail_eigenvalues);

/// Full normalization pipeline: returns g = T^-1∘f∘T with g - Λ in (A^(r))^n and the eigenvalues.
NormalizedMap normal_form(const AnalyticMap& f, std::vector<BigRational>* eigenvalues = nullptr);

/// w with w∘Λ - Λ∘w = g, coefficientwise g_{j,I} / (lambda^I - lambda_j).
RationalTuple solve_homological(const RationalTuple& g, const std::vector<BigRational>& lambda, int r);

ConjugacyResult linearize_order_by_order(const AnalyticMap& f, int N);

/// prime = 0 selects the default prime of the map.
std::pair<ConjugacyResult, NewtonTrace> linearize_newton(const AnalyticMap& f, int N, const DiophantineParams& params,
                                                        long prime = 0);

/// Exact check of the three homological norm inequalities for one instance.
/// C1 defaults to derived_C1(params).
NormBoundCertificate check_norm_bound(const RationalTuple& g, const RationalTuple& w,
                                      const std::vector<BigRational>& lambda, const BigRational& rho,
                                      const BigRational& delta, const DiophantineParams& params, const BigInt& p,
                                      std::optional<BigRational> C1 = std::nullopt);

/// Primes dividing some coefficient denominator.
std::vector<BigInt> denominator_primes(const RationalTuple& h);

/// f∘h - h∘Λ.
RationalTuple conjugacy_residual(const RationalTuple& f, const RationalTuple& h, const std::vector<BigRational>& lambda);

}  // namespace padyn
