#include "padyn/eisenstein.hpp"

#include <algorithm>
#include <map>

#include "padyn/errors.hpp"

namespace padyn {

namespace {

RationalSeries resized(const RationalSeries& s, int n, int N) {
  RationalSeries out(n, N);
  s.for_each([&](Monomial m, const BigRational& c) { out.add_term(m, c); });
  return out;
}

// 1/a for a series with invertible constant term, layer by layer.
RationalSeries reciprocal(const RationalSeries& a) {
  const BigRational* a0 = a.find(Monomial{0});
  if (!a0) throw ObstructionError("reciprocal of a series without constant term");
  const int n = a.num_vars(), N = a.trunc_degree();
  const BigRational inv0 = 1 / *a0;
  RationalSeries b(n, N);
  b.add_term(Monomial{0}, inv0);
  for (int d = 1; d <= N; ++d) {
    std::unordered_map<Monomial, BigRational> acc;
    for (int k = 1; k <= d; ++k) RationalSeries::accumulate_product(acc, a.layer(k), b.layer(d - k));
    RationalSeries::Layer L = RationalSeries::drain(acc);
    for (auto& t : L) t.second = -inv0 * t.second;
    b.set_layer(d, std::move(L));
  }
  return b;
}

void check_F(const XPolynomial& F, int n) {
  if (F.size() < 2) throw InputError("F must have positive degree in X");
  for (const auto& c : F) {
    if (c.num_vars() != n) throw InputError("coefficients of F must use the seed's variables");
  }
}

}  // namespace

bool valuation_less(Monomial a, Monomial b, int n) {
  for (int i = n - 1; i >= 0; --i) {
    int ea = exponent(a, i), eb = exponent(b, i);
    if (ea != eb) return ea < eb;
  }
  return false;
}

XPolynomial derivative_in_X(const XPolynomial& F) {
  XPolynomial out;
  for (std::size_t k = 1; k < F.size(); ++k) out.push_back(BigRational(static_cast<long>(k)) * F[k]);
  if (out.empty()) out.push_back(RationalSeries(F.front().num_vars(), F.front().trunc_degree()));
  return out;
}

RationalSeries evaluate_x_polynomial(const XPolynomial& F, const RationalSeries& phi) {
  const int n = phi.num_vars(), N = phi.trunc_degree();
  RationalSeries acc = resized(F.back(), n, N);
  for (std::size_t k = F.size() - 1; k-- > 0;) acc = acc * phi + resized(F[k], n, N);
  return acc;
}

int detect_vanishing_order(const XPolynomial& F, const RationalSeries& seed) {
  check_F(F, seed.num_vars());
  RationalSeries d = evaluate_x_polynomial(derivative_in_X(F), seed);
  if (d.empty()) {
    throw InputError("F'(seed) vanishes through degree " + std::to_string(seed.trunc_degree()) +
                     ": the seed is too short or F is not squarefree at this root");
  }
  return d.order();
}

AlgebraicSeriesSpec make_algebraic_spec(XPolynomial F, RationalSeries seed) {
  AlgebraicSeriesSpec spec;
  spec.s = detect_vanishing_order(F, seed);
  const int n = seed.num_vars(), t = seed.trunc_degree();
  RationalSeries check = evaluate_x_polynomial(F, resized(seed, n, t + spec.s));
  if (!check.empty()) {
    throw InputError("seed is not a root: F(seed) has a term of degree " + std::to_string(check.order()) +
                     " but must vanish through degree " + std::to_string(t + spec.s));
  }
  spec.derivative_layer = evaluate_x_polynomial(derivative_in_X(F), seed).homogeneous_part(spec.s);
  const auto& L = spec.derivative_layer.layer(spec.s);
  auto it = std::min_element(L.begin(), L.end(), [n](const auto& a, const auto& b) { return valuation_less(a.first, b.first, n); });
  spec.pivot_monomial = it->first;
  spec.pivot = it->second;
  spec.F = std::move(F);
  spec.seed = std::move(seed);
  return spec;
}

RationalSeries divide_homogeneous(const RationalSeries& numerator, const RationalSeries& divisor) {
  const int n = numerator.num_vars();
  if (divisor.empty()) throw InputError("division by the zero polynomial");
  const int ds = divisor.order();
  if (divisor.max_degree() != ds) throw InputError("divisor must be homogeneous");
  const auto& D = divisor.layer(ds);
  auto piv = std::min_element(D.begin(), D.end(), [n](const auto& a, const auto& b) { return valuation_less(a.first, b.first, n); });
  const Monomial pm = piv->first;
  const BigRational pc = piv->second;

  auto cmp = [n](Monomial a, Monomial b) { return valuation_less(a, b, n); };
  std::map<Monomial, BigRational, decltype(cmp)> rem(cmp);
  int dn = -1;
  numerator.for_each([&](Monomial m, const BigRational& c) {
    int d = monomial_degree(m);
    if (dn >= 0 && d != dn) throw InputError("numerator must be homogeneous");
    dn = d;
    rem.emplace(m, c);
  });
  RationalSeries q(n, std::max(numerator.trunc_degree(), 0));
  if (rem.empty()) return q;
  if (dn < ds) throw ObstructionError("pivot division failed: numerator degree below divisor degree");
  while (!rem.empty()) {
    auto [m, c] = *rem.begin();
    if (!divides(pm, m)) {
      throw ObstructionError("pivot division failed at monomial " + monomial_to_string(m, n) +
                             "; the vanishing order or the seed is wrong");
    }
    const Monomial qm = m - pm;
    const BigRational qc = c / pc;
    q.add_term(qm, qc);
    for (const auto& [dm, dc] : D) {
      auto [it, inserted] = rem.try_emplace(qm + dm, -qc * dc);
      if (!inserted) {
        it->second -= qc * dc;
        if (sgn(it->second) == 0) rem.erase(it);
      }
    }
  }
  return q;
}

RationalSeries coefficients_up_to(const AlgebraicSeriesSpec& spec, int d, bool force_recursion) {
  const int n = spec.seed.num_vars();
  const int t = spec.seed.trunc_degree();
  if (d < 0 || d > kMaxTruncation) throw InputError("degree out of range");
  if (d <= t) return spec.seed.truncated(d);

  if (spec.s == 0 && !force_recursion) {
    // Newton: X <- X - F(X)/F'(X) doubles the number of correct degrees.
    const XPolynomial dF = derivative_in_X(spec.F);
    RationalSeries phi = resized(spec.seed, n, t);
    int known = t;
    while (known < d) {
      const int next = std::min(2 * known + 1, d);
      RationalSeries x = resized(phi, n, next);
      RationalSeries value = evaluate_x_polynomial(spec.F, x);
      RationalSeries slope = evaluate_x_polynomial(dF, x);
      phi = x - value * reciprocal(slope);
      known = next;
    }
    return phi;
  }

  const int s = spec.s;
  RationalSeries phi = resized(spec.seed, n, d);
  for (int k = t + 1; k <= d; ++k) {
    RationalSeries value = evaluate_x_polynomial(spec.F, resized(phi.truncated(k - 1), n, k + s));
    RationalSeries numer = -value.homogeneous_part(k + s);
    RationalSeries layer = divide_homogeneous(numer, spec.derivative_layer);
    layer.for_each([&](Monomial m, const BigRational& c) { phi.add_term(m, c); });
  }
  return phi;
}

DenominatorSupport denominator_support(const RationalSeries& phi) {
  BigInt l = 1;
  phi.for_each([&](Monomial, const BigRational& c) { mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t()); });
  DenominatorSupport out;
  if (l > 1) {
    for (const auto& [p, e] : factor(l)) {
      out.primes.push_back(p);
      out.radical *= p;
    }
  }
  return out;
}

}  // namespace padyn
