#include "padyn/linearize.hpp"

#include <algorithm>
#include <set>

#include "padyn/errors.hpp"

namespace padyn {

namespace {

using Layer = RationalSeries::Layer;

// lambda^I from a table of powers lambda_i^k, k <= N.
class LambdaPowers {
 public:
  LambdaPowers(const std::vector<BigRational>& lambda, int N) : n_(static_cast<int>(lambda.size())) {
    table_.resize(lambda.size());
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      table_[i].push_back(1);
      for (int k = 1; k <= N; ++k) table_[i].push_back(table_[i].back() * lambda[i]);
    }
  }
  BigRational operator()(Monomial m) const {
    BigRational v = 1;
    for (int i = 0; i < n_; ++i) {
      int e = exponent(m, i);
      if (e > 0) v *= table_[i].at(static_cast<std::size_t>(e));
    }
    return v;
  }

 private:
  int n_;
  std::vector<std::vector<BigRational>> table_;
};

// Divides one homogeneous layer of component j by lambda^I - lambda_j.
Layer homological_layer(const Layer& g, int j, const std::vector<BigRational>& lambda, const LambdaPowers& pw, int n) {
  Layer out;
  out.reserve(g.size());
  for (const auto& [m, c] : g) {
    BigRational div = pw(m) - lambda[j];
    if (sgn(div) == 0) {
      throw ResonantMonomial(exponents_of(m, n), j,
                             "ResonantMonomial: lambda^I = lambda_" + std::to_string(j + 1) + " for I = " +
                                 monomial_to_string(m, n) + " with a nonzero coefficient to divide");
    }
    out.emplace_back(m, c / div);
  }
  return out;
}

RationalTuple solve_layers(const RationalTuple& g, const std::vector<BigRational>& lambda) {
  const int n = static_cast<int>(lambda.size());
  const int N = tuple_trunc_degree(g);
  LambdaPowers pw(lambda, N);
  RationalTuple w;
  for (int j = 0; j < static_cast<int>(g.size()); ++j) {
    RationalSeries s(g[j].num_vars(), g[j].trunc_degree());
    for (int d = 0; d <= g[j].trunc_degree(); ++d) {
      if (!g[j].layer(d).empty()) s.set_layer(d, homological_layer(g[j].layer(d), j, lambda, pw, n));
    }
    w.push_back(std::move(s));
  }
  return w;
}

RationalTuple diagonal_map(const std::vector<BigRational>& lambda, int N) {
  const int n = static_cast<int>(lambda.size());
  RationalTuple out;
  for (int i = 0; i < n; ++i) out.push_back(RationalSeries::variable(n, N, i, lambda[i]));
  return out;
}

bool is_identity_tuple(const RationalTuple& t) {
  const int n = static_cast<int>(t.size());
  for (int i = 0; i < n; ++i) {
    RationalSeries id = RationalSeries::variable(n, t[i].trunc_degree(), i, BigRational(1));
    if (t[i] != id) return false;
  }
  return true;
}

// A(x') entries: coefficient of x_{r+k} in component rows[i], as a series in x'.
SeriesMatrix<BigRational> linear_tail_block(const AnalyticMap& f, int row_begin, int row_end) {
  const int n = f.n, r = f.r, N = f.trunc_degree();
  const int t = n - r;
  SeriesMatrix<BigRational> a(static_cast<std::size_t>(row_end - row_begin),
                              std::vector<RationalSeries>(static_cast<std::size_t>(t), RationalSeries(n, N)));
  for (int i = row_begin; i < row_end; ++i) {
    f.components[i].for_each([&](Monomial m, const BigRational& c) {
      if (tail_degree(m, r, n) != 1) return;
      for (int k = 0; k < t; ++k) {
        if (exponent(m, r + k) == 1) {
          a[i - row_begin][k].add_term(m - variable_monomial(r + k), c);
          return;
        }
      }
    });
  }
  return a;
}

// T(y) = (y', P(y') y'').
RationalTuple tail_linear_change(const SeriesMatrix<BigRational>& P, int n, int r, int N) {
  RationalTuple T;
  for (int i = 0; i < r; ++i) T.push_back(RationalSeries::variable(n, N, i, BigRational(1)));
  const int t = n - r;
  for (int i = 0; i < t; ++i) {
    RationalSeries s(n, N);
    for (int k = 0; k < t; ++k) {
      RationalSeries y = RationalSeries::variable(n, N, r + k, BigRational(1));
      if (!P[i][k].empty()) s += P[i][k] * y;
    }
    T.push_back(std::move(s));
  }
  return T;
}

AnalyticMap conjugate(const AnalyticMap& f, const RationalTuple& T) {
  RationalTuple Tinv = invert_tuple(T);
  RationalTuple g = compose(Tinv, compose(f.components, T));
  return AnalyticMap{f.n, f.r, std::move(g)};
}

RationalTuple matrix_change(const RationalMatrix& S, int N) {
  const int n = static_cast<int>(S.size());
  RationalTuple T;
  for (int i = 0; i < n; ++i) {
    RationalSeries s(n, N);
    for (int j = 0; j < n; ++j) s.add_term(variable_monomial(j), S[i][j]);
    T.push_back(std::move(s));
  }
  return T;
}

// Columns are eigenvectors of m in the order of `eigenvalues` (m semisimple).
RationalMatrix eigenbasis(const RationalMatrix& m, const std::vector<BigRational>& eigenvalues) {
  const std::size_t n = m.size();
  RationalMatrix S(n, std::vector<BigRational>(n, BigRational(0)));
  std::size_t col = 0;
  std::vector<BigRational> done;
  for (const auto& x : eigenvalues) {
    if (std::find(done.begin(), done.end(), x) != done.end()) continue;
    done.push_back(x);
    RationalMatrix shifted = m;
    for (std::size_t i = 0; i < n; ++i) shifted[i][i] -= x;
    for (const auto& v : kernel(shifted, n)) {
      for (std::size_t i = 0; i < n; ++i) S[i][col] = v[i];
      ++col;
    }
  }
  return S;
}

bool is_diagonal(const RationalMatrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (i != j && sgn(m[i][j]) != 0) return false;
    }
  }
  return true;
}

bool is_normal(const AnalyticMap& f, const std::vector<BigRational>& lambda) {
  RationalTuple diff = f.components - diagonal_map(lambda, f.trunc_degree());
  return in_subspace_Ar(diff, f.r);
}

BigRational tuple_coefficient_scale(const BigRational& c, long p, int k, int degree) {
  // c * p^{k(|I|-1)}
  return c * rpow(BigRational(p), static_cast<long>(k) * (degree - 1));
}

RationalTuple rescale(const RationalTuple& t, long p, int k) {
  RationalTuple out;
  for (const auto& s : t) {
    RationalSeries r(s.num_vars(), s.trunc_degree());
    s.for_each([&](Monomial m, const BigRational& c) {
      r.add_term(m, tuple_coefficient_scale(c, p, k, monomial_degree(m)));
    });
    out.push_back(std::move(r));
  }
  return out;
}

// Jacobian entries re-truncated at N. Terms of degree N of the true Jacobian
// are unknown, so the result may only multiply series of order >= 2.
SeriesMatrix<BigRational> padded_jacobian(const RationalTuple& h, int N) {
  SeriesMatrix<BigRational> J = jacobian(h);
  for (auto& row : J) {
    for (auto& e : row) {
      RationalSeries s(e.num_vars(), N);
      e.for_each([&](Monomial m, const BigRational& c) { s.add_term(m, c); });
      e = std::move(s);
    }
  }
  return J;
}

GaussNorm matrix_norm(const SeriesMatrix<BigRational>& m, const BigRational& rho, const BigInt& p) {
  GaussNorm best;
  for (const auto& row : m) {
    for (const auto& e : row) {
      GaussNorm g = gauss_norm(e, rho, p);
      if (best < g) best = g;
    }
  }
  return best;
}

}  // namespace

BigRational derived_C1(const DiophantineParams& params) {
  if (sgn(params.C) <= 0) throw InputError("diophantine constant C must be positive");
  if (sgn(params.beta) < 0) throw InputError("diophantine exponent beta must be non-negative");
  BigInt b;
  mpz_cdiv_q(b.get_mpz_t(), params.beta.get_num_mpz_t(), params.beta.get_den_mpz_t());
  BigRational k = 1;
  if (b > 0) k = BigRational(ipow(b, b.get_ui()));
  return k / params.C;
}

bool RationalPower::at_most(const BigRational& bound) const {
  if (sgn(coeff) == 0) return sgn(bound) >= 0;
  if (sgn(bound) <= 0) return false;
  const BigInt q = exponent.get_den();
  const BigInt pnum = exponent.get_num();
  const unsigned long qq = q.get_ui();
  BigRational lhs = rpow(coeff, static_cast<long>(qq)) * rpow(base, pnum.get_si());
  BigRational rhs = rpow(bound, static_cast<long>(qq));
  return lhs <= rhs;
}

std::optional<BigRational> RationalPower::exact() const {
  if (exponent.get_den() != 1) return std::nullopt;
  return coeff * rpow(base, exponent.get_num().get_si());
}

std::string RationalPower::to_string() const {
  if (auto v = exact()) return padyn::to_string(*v);
  return padyn::to_string(coeff) + "*(" + padyn::to_string(base) + ")^(" + padyn::to_string(exponent) + ")";
}

RationalTuple conjugacy_residual(const RationalTuple& f, const RationalTuple& h, const std::vector<BigRational>& lambda) {
  return compose(f, h) - [&] {
    RationalTuple hl;
    for (const auto& s : h) hl.push_back(s.scale_variables(lambda));
    return hl;
  }();
}

std::vector<BigInt> denominator_primes(const RationalTuple& h) {
  BigInt l = 1;
  for (const auto& s : h) {
    s.for_each([&](Monomial, const BigRational& c) {
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    });
  }
  std::vector<BigInt> out;
  if (l > 1) {
    for (const auto& [p, e] : factor(l)) out.push_back(p);
  }
  return out;
}

RationalTuple solve_homological(const RationalTuple& g, const std::vector<BigRational>& lambda, int r) {
  const int n = static_cast<int>(lambda.size());
  if (static_cast<int>(g.size()) != n) throw InputError("solve_homological: tuple and eigenvalues differ in length");
  for (const auto& s : g) {
    if (s.num_vars() != n) throw InputError("solve_homological: wrong number of variables");
  }
  if (r < 0 || r > n) throw InputError("r must lie in 0..n");
  if (!in_subspace_Ar(g, r)) throw InputError("solve_homological: right-hand side is not in (A^(r))^n");
  for (int i = 0; i < r; ++i) {
    if (lambda[i] != 1) throw InputError("solve_homological: the first r eigenvalues must equal 1");
  }
  return solve_layers(g, lambda);
}

NormalizedMap normalize_mod_IF2(const AnalyticMap& f) {
  const int n = f.n, r = f.r, N = f.trunc_degree();
  if (r < 1) throw InputError("normalize_mod_IF2 needs a fixed locus of dimension r >= 1");
  if (r == n) return NormalizedMap{f, identity_tuple<BigRational>(n, N, 1)};
  const int t = n - r;
  // Blocks of f - id that are linear in x''.
  SeriesMatrix<BigRational> a1 = linear_tail_block(f, 0, r);
  SeriesMatrix<BigRational> a2 = linear_tail_block(f, r, n);
  for (int i = 0; i < t; ++i) a2[i][i] -= RationalSeries::constant(n, N, BigRational(1));
  RationalMatrix a2_0(static_cast<std::size_t>(t), std::vector<BigRational>(static_cast<std::size_t>(t), BigRational(0)));
  for (int i = 0; i < t; ++i) {
    for (int k = 0; k < t; ++k) {
      if (const BigRational* c = a2[i][k].find(Monomial{0})) a2_0[i][k] = *c;
    }
  }
  if (sgn(determinant(a2_0)) == 0) {
    throw ObstructionError("normalize_mod_IF2: a''(0) is singular; more than r eigenvalues equal 1");
  }
  bool a1_zero = true;
  for (const auto& row : a1) {
    for (const auto& e : row) {
      if (!e.empty()) a1_zero = false;
    }
  }
  if (a1_zero) return NormalizedMap{f, identity_tuple<BigRational>(n, N, 1)};

  SeriesMatrix<BigRational> B = series_matmul(a1, series_inverse(a2, BigRational(1)));
  RationalTuple h = identity_tuple<BigRational>(n, N, 1);
  for (int i = 0; i < r; ++i) {
    for (int k = 0; k < t; ++k) {
      if (B[i][k].empty()) continue;
      h[i] += B[i][k] * RationalSeries::variable(n, N, r + k, BigRational(1));
    }
  }
  return NormalizedMap{conjugate(f, h), h};
}

NormalizedMap diagonalize_normal_part(const AnalyticMap& f, const std::vector<BigRational>& tail_eigenvalues) {
  const int n = f.n, r = f.r, N = f.trunc_degree();
  const int t = n - r;
  if (static_cast<int>(tail_eigenvalues.size()) != t) throw InputError("diagonalize_normal_part: wrong number of tail eigenvalues");
  if (t == 0) return NormalizedMap{f, identity_tuple<BigRational>(n, N, 1)};
  SeriesMatrix<BigRational> A = linear_tail_block(f, r, n);

  // Constant eigenvalues: the power sums tr(A^k) must be the constants sum lambda^k.
  SeriesMatrix<BigRational> Ak = A;
  for (int k = 1; k <= t; ++k) {
    if (k > 1) Ak = series_matmul(Ak, A);
    RationalSeries tr(n, N);
    for (int i = 0; i < t; ++i) tr += Ak[i][i];
    BigRational expected = 0;
    for (const auto& l : tail_eigenvalues) expected += rpow(l, k);
    if (tr != RationalSeries::constant(n, N, expected)) {
      throw EigenvaluesVary("EigenvaluesVary: the eigenvalues of the normal part change along the fixed locus");
    }
  }
  std::vector<BigRational> distinct;
  for (const auto& l : tail_eigenvalues) {
    if (std::find(distinct.begin(), distinct.end(), l) == distinct.end()) distinct.push_back(l);
  }
  auto shifted = [&](const BigRational& mu) {
    SeriesMatrix<BigRational> s = A;
    for (int i = 0; i < t; ++i) s[i][i] -= RationalSeries::constant(n, N, mu);
    return s;
  };
  SeriesMatrix<BigRational> prod = series_identity<BigRational>(t, n, N, 1);
  for (const auto& mu : distinct) prod = series_matmul(prod, shifted(mu));
  for (const auto& row : prod) {
    for (const auto& e : row) {
      if (!e.empty()) throw NotSemisimple("NotSemisimple: the normal part is not semisimple along the fixed locus");
    }
  }
  if (distinct.size() == 1) return NormalizedMap{f, identity_tuple<BigRational>(n, N, 1)};

  // p_mu = prod_{nu != mu} (A - nu) / (mu - nu); column k of P is p_{lambda_k} e_k.
  SeriesMatrix<BigRational> P(static_cast<std::size_t>(t), std::vector<RationalSeries>(static_cast<std::size_t>(t), RationalSeries(n, N)));
  for (const auto& mu : distinct) {
    SeriesMatrix<BigRational> proj = series_identity<BigRational>(t, n, N, 1);
    for (const auto& nu : distinct) {
      if (nu == mu) continue;
      SeriesMatrix<BigRational> factor = shifted(nu);
      for (auto& row : factor) {
        for (auto& e : row) e = BigRational(1 / (mu - nu)) * e;
      }
      proj = series_matmul(proj, factor);
    }
    for (int k = 0; k < t; ++k) {
      if (tail_eigenvalues[k] != mu) continue;
      for (int i = 0; i < t; ++i) P[i][k] = proj[i][k];
    }
  }
  RationalTuple T = tail_linear_change(P, n, r, N);
  if (is_identity_tuple(T)) return NormalizedMap{f, T};
  return NormalizedMap{conjugate(f, T), T};
}

NormalizedMap normal_form(const AnalyticMap& f, std::vector<BigRational>* eigenvalues_out) {
  const int n = f.n, r = f.r, N = f.trunc_degree();
  RationalMatrix J = jacobian_at_origin(f);
  std::vector<BigRational> lambda(static_cast<std::size_t>(r), BigRational(1));
  RationalMatrix tail(static_cast<std::size_t>(n - r), std::vector<BigRational>(static_cast<std::size_t>(n - r)));
  for (int i = r; i < n; ++i) {
    for (int j = r; j < n; ++j) tail[i - r][j - r] = J[i][j];
  }
  std::vector<BigRational> tail_lambda;
  if (n > r) {
    EigenData eig = rational_eigenvalues(tail);
    if (!eig.semisimple) throw NotSemisimple("NotSemisimple: the linear part is not diagonalizable");
    if (r > 0 && std::find(eig.eigenvalues.begin(), eig.eigenvalues.end(), BigRational(1)) != eig.eigenvalues.end()) {
      throw ObstructionError("more than r eigenvalues equal 1 at the fixed point");
    }
    tail_lambda = eig.eigenvalues;
  }
  lambda.insert(lambda.end(), tail_lambda.begin(), tail_lambda.end());
  if (eigenvalues_out) *eigenvalues_out = lambda;

  RationalTuple T = identity_tuple<BigRational>(n, N, 1);
  AnalyticMap g = f;
  if (is_diagonal(J) && is_normal(f, lambda)) return NormalizedMap{g, T};

  if (n > r && !is_diagonal(tail)) {
    RationalMatrix S = identity_matrix<BigRational>(n, 1);
    RationalMatrix St = eigenbasis(tail, tail_lambda);
    for (int i = r; i < n; ++i) {
      for (int j = r; j < n; ++j) S[i][j] = St[i - r][j - r];
    }
    T = matrix_change(S, N);
    g = conjugate(g, T);
  }
  if (r > 0) {
    NormalizedMap step = normalize_mod_IF2(g);
    T = compose(T, step.change);
    g = step.map;
    step = diagonalize_normal_part(g, tail_lambda);
    T = compose(T, step.change);
    g = step.map;
  }
  if (!is_normal(g, lambda)) {
    throw ObstructionError("normalization failed to bring f - Λ into (A^(r))^n");
  }
  return NormalizedMap{g, T};
}

namespace {

// u with u∘Λ - Λ∘u = q∘(x + u), built one degree at a time.
RationalTuple order_by_order_core(const AnalyticMap& g, const std::vector<BigRational>& lambda, int N) {
  const int n = g.n;
  RationalTuple q = g.components - diagonal_map(lambda, N);
  LambdaPowers pw(lambda, N);
  ComposeEngine<BigRational> engine(q, N);
  RationalTuple h = identity_tuple<BigRational>(n, N, 1);
  for (int d = 1; d <= N; ++d) {
    std::vector<Layer> nl = engine.nonlinear_layer(d);
    std::vector<Layer> layer(static_cast<std::size_t>(n));
    if (d == 1) {
      for (int i = 0; i < n; ++i) layer[i] = Layer{{variable_monomial(i), BigRational(1)}};
    } else {
      for (int j = 0; j < n; ++j) {
        layer[j] = homological_layer(nl[j], j, lambda, pw, n);
        h[j].set_layer(d, layer[j]);
      }
    }
    engine.push_inner(d, std::move(layer));
  }
  return h;
}

ConjugacyResult finish(const AnalyticMap& f, const RationalTuple& T, RationalTuple h_normal,
                       const std::vector<BigRational>& lambda, int N) {
  ConjugacyResult out;
  out.eigenvalues = lambda;
  out.normalizing_change = T;
  out.h = is_identity_tuple(T) ? std::move(h_normal) : compose(T, h_normal);
  out.h_inverse = invert_tuple(out.h);
  out.residual = conjugacy_residual(f.components, out.h, lambda);
  if (!tuple_empty(out.residual)) {
    throw ObstructionError("internal: conjugacy residual does not vanish through degree " + std::to_string(N));
  }
  out.verified_degree = N;
  out.denominator_primes = denominator_primes(out.h);
  return out;
}

}  // namespace

ConjugacyResult linearize_order_by_order(const AnalyticMap& f_in, int N) {
  if (N < 2) throw InputError("linearization degree must be at least 2");
  AnalyticMap f = with_truncation(f_in, N);
  if (f.r == f.n) {
    ConjugacyResult out;
    out.h = out.h_inverse = out.normalizing_change = identity_tuple<BigRational>(f.n, N, 1);
    out.residual = f.components - out.h;
    out.verified_degree = N;
    out.eigenvalues.assign(static_cast<std::size_t>(f.n), BigRational(1));
    return out;
  }
  std::vector<BigRational> lambda;
  NormalizedMap nf = normal_form(f, &lambda);
  RationalTuple h = order_by_order_core(nf.map, lambda, N);
  return finish(f, nf.change, std::move(h), lambda, N);
}

NormBoundCertificate check_norm_bound(const RationalTuple& g, const RationalTuple& w, const std::vector<BigRational>& lambda,
                                      const BigRational& rho, const BigRational& delta, const DiophantineParams& params,
                                      const BigInt& p, std::optional<BigRational> C1) {
  if (sgn(delta) <= 0) throw InputError("check_norm_bound: delta must be positive");
  if (delta >= rho) throw InputError("check_norm_bound: delta must be smaller than rho");
  NormBoundCertificate cert;
  cert.C1 = C1 ? *C1 : derived_C1(params);
  const BigRational inner = rho - delta;
  cert.g_norm = gauss_norm(g, rho, p);
  cert.w_norm = gauss_norm(w, inner, p);
  SeriesMatrix<BigRational> Dw;
  SeriesMatrix<BigRational> DwL;
  for (const auto& s : w) {
    std::vector<RationalSeries> row, rowL;
    for (int j = 0; j < s.num_vars(); ++j) {
      RationalSeries d = s.derivative(j);
      rowL.push_back(d.scale_variables(lambda));
      row.push_back(std::move(d));
    }
    Dw.push_back(std::move(row));
    DwL.push_back(std::move(rowL));
  }
  cert.dw_norm = matrix_norm(Dw, inner, p);
  cert.dw_lambda_norm = matrix_norm(DwL, inner, p);
  cert.minimal_C1 = RationalPower{0, delta / rho, params.beta};
  if (cert.g_norm.zero) {
    cert.passes = cert.w_norm.zero;
    return cert;
  }
  const BigRational& K = cert.g_norm.value;
  BigRational m = cert.w_norm.zero ? BigRational(0) : cert.w_norm.value / K;
  if (!cert.dw_norm.zero) m = std::max(m, BigRational(cert.dw_norm.value * inner / K));
  if (!cert.dw_lambda_norm.zero) m = std::max(m, BigRational(cert.dw_lambda_norm.value * inner / K));
  cert.minimal_C1.coeff = m;
  cert.passes = cert.minimal_C1.at_most(cert.C1);
  return cert;
}

std::pair<ConjugacyResult, NewtonTrace> linearize_newton(const AnalyticMap& f_in, int N, const DiophantineParams& params,
                                                        long prime) {
  if (N < 2) throw InputError("linearization degree must be at least 2");
  AnalyticMap f = with_truncation(f_in, N);
  NewtonTrace trace;
  trace.params = params;
  trace.C1 = derived_C1(params);
  if (f.r == f.n) {
    ConjugacyResult out = linearize_order_by_order(f, N);
    trace.prime = prime ? prime : 3;
    return {out, trace};
  }
  std::vector<BigRational> lambda;
  NormalizedMap nf = normal_form(f, &lambda);
  const int n = f.n;
  trace.prime = prime ? prime : default_prime(f, lambda);
  require_odd_prime(trace.prime);
  const BigInt p(trace.prime);

  // Smallest k >= 0 with ||u g(u^-1 x) - Λ||_1 <= |p| for u = p^-k.
  RationalTuple q = nf.map.components - diagonal_map(lambda, N);
  int k = 0;
  for (const auto& s : q) {
    s.for_each([&](Monomial m, const BigRational& c) {
      int d = monomial_degree(m);
      int v = valuation(c, p);
      if (d < 2 || v >= 1) return;
      int need = (1 - v + d - 2) / (d - 1);  // ceil((1 - v) / (d - 1))
      k = std::max(k, need);
    });
  }
  trace.rescale_exponent = k;
  RationalTuple g = rescale(nf.map.components, trace.prime, k);

  RationalTuple h = identity_tuple<BigRational>(n, N, 1);
  auto rho = [](int i) -> BigRational { return BigRational(1, 2) + rpow(BigRational(1, 2), i + 1); };
  RationalTuple F = conjugacy_residual(g, h, lambda);
  for (int i = 0; !tuple_empty(F); ++i) {
    if (i > 2 * N) throw ObstructionError("internal: Newton iteration did not converge");
    NewtonIteration it;
    it.index = i;
    it.radius = rho(i);
    it.residual_order = tuple_order(F);
    it.residual_norm = gauss_norm(F, rho(i), p);

    SeriesMatrix<BigRational> Dh = padded_jacobian(h, N);
    SeriesMatrix<BigRational> DhL = Dh;
    for (auto& row : DhL) {
      for (auto& e : row) e = e.scale_variables(lambda);
    }
    RationalTuple G = series_solve(DhL, F, BigRational(1));
    RationalTuple E = solve_layers(G, lambda);
    RationalTuple Delta = series_matvec(Dh, E);
    it.delta_order = tuple_order(Delta);
    it.delta_norm = gauss_norm(Delta, rho(i + 1), p);
    it.bound = check_norm_bound(G, E, lambda, rho(i), rho(i) - rho(i + 1), params, p);
    if (!it.bound.passes) trace.bound_violations = true;

    h = h + Delta;
    F = conjugacy_residual(g, h, lambda);
    it.vanishing_through = std::min(tuple_order(F), N + 1) - 1;
    trace.iterations.push_back(std::move(it));
  }
  // Undo the rescaling: h_f(x) = u^-1 h_g(u x).
  RationalTuple h_normal = rescale(h, trace.prime, -k);
  return {finish(f, nf.change, std::move(h_normal), lambda, N), trace};
}

}  // namespace padyn
