#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "padyn/errors.hpp"
#include "padyn/padic.hpp"
#include "padyn/rational.hpp"

namespace padyn {

// A monomial packs up to 8 exponents of at most 255 into one 64-bit key, x1 in
// the most significant byte. Multiplying monomials is adding keys, and within a
// fixed degree the integer order of keys is the lexicographic order.
using Monomial = std::uint64_t;

inline constexpr int kMaxVariables = 8;
inline constexpr int kMaxTruncation = 255;

inline int exponent(Monomial m, int i) { return static_cast<int>((m >> (8 * (7 - i))) & 0xFFu); }

inline Monomial variable_monomial(int i) { return Monomial{1} << (8 * (7 - i)); }

inline int monomial_degree(Monomial m) {
  int d = 0;
  for (int i = 0; i < kMaxVariables; ++i) d += exponent(m, i);
  return d;
}

Monomial monomial_from(const std::vector<int>& exponents);
std::vector<int> exponents_of(Monomial m, int n);
/// Total degree in the variables x_{r+1}..x_n (0-based indices r..n-1).
int tail_degree(Monomial m, int r, int n);
/// True when every exponent of a is at most the matching exponent of b.
bool divides(Monomial a, Monomial b);
std::string monomial_to_string(Monomial m, int n);

inline void check_dimensions(int n, int trunc_degree) {
  if (n < 1 || n > kMaxVariables) {
    throw InputError("number of variables must be in 1.." + std::to_string(kMaxVariables));
  }
  if (trunc_degree < 0 || trunc_degree > kMaxTruncation) {
    throw InputError("truncation degree must be in 0.." + std::to_string(kMaxTruncation));
  }
}

// Ring helpers, overloaded for the two coefficient types.
inline BigRational times_integer(const BigRational& c, long k) { return c * k; }
inline PAdicNumber times_integer(const PAdicNumber& c, long k) {
  return c * PAdicNumber::from_integer(BigInt(k), c.prime(), std::max(c.precision(), 1));
}
inline BigRational power(const BigRational& c, unsigned long e) { return rpow(c, static_cast<long>(e)); }
inline PAdicNumber power(const PAdicNumber& c, unsigned long e) { return c.pow(e); }
inline BigRational one_like(const BigRational&) { return 1; }
inline PAdicNumber one_like(const PAdicNumber& c) {
  return PAdicNumber::one(c.prime(), std::max(c.precision(), 1));
}
/// Pivot preference for elimination: lower is better. Rationals have no preference.
inline int pivot_rank(const BigRational&) { return 0; }
inline int pivot_rank(const PAdicNumber& c) { return c.valuation(); }

/// Truncated power series in n variables: every monomial of degree above
/// trunc_degree is discarded. Terms are stored by degree, sorted by key, and no
/// stored coefficient is zero.
template <class C>
class MultiSeries {
 public:
  using Term = std::pair<Monomial, C>;
  using Layer = std::vector<Term>;

  MultiSeries() : MultiSeries(1, 0) {}
  MultiSeries(int n, int trunc_degree) : n_(n), trunc_(trunc_degree) {
    check_dimensions(n, trunc_degree);
    layers_.resize(static_cast<std::size_t>(trunc_degree) + 1);
  }

  static MultiSeries constant(int n, int trunc_degree, const C& c) {
    MultiSeries s(n, trunc_degree);
    s.add_term(0, c);
    return s;
  }
  static MultiSeries variable(int n, int trunc_degree, int i, const C& one) {
    MultiSeries s(n, trunc_degree);
    s.add_term(variable_monomial(i), one);
    return s;
  }

  int num_vars() const { return n_; }
  int trunc_degree() const { return trunc_; }

  const Layer& layer(int d) const { return layers_.at(static_cast<std::size_t>(d)); }
  /// Replaces degree layer d; the terms must all have degree d.
  void set_layer(int d, Layer terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    terms.erase(std::remove_if(terms.begin(), terms.end(), [](const Term& t) { return is_zero(t.second); }),
                terms.end());
    layers_.at(static_cast<std::size_t>(d)) = std::move(terms);
  }

  /// Adds c x^m to the series (no-op beyond the truncation degree).
  void add_term(Monomial m, const C& c) {
    int d = monomial_degree(m);
    if (d > trunc_ || is_zero(c)) return;
    Layer& L = layers_[static_cast<std::size_t>(d)];
    auto it = std::lower_bound(L.begin(), L.end(), m, [](const Term& t, Monomial k) { return t.first < k; });
    if (it != L.end() && it->first == m) {
      it->second += c;
      if (is_zero(it->second)) L.erase(it);
    } else {
      L.insert(it, Term{m, c});
    }
  }
  void add_term(const std::vector<int>& exps, const C& c) { add_term(checked_monomial(exps), c); }

  const C* find(Monomial m) const {
    int d = monomial_degree(m);
    if (d > trunc_) return nullptr;
    const Layer& L = layers_[static_cast<std::size_t>(d)];
    auto it = std::lower_bound(L.begin(), L.end(), m, [](const Term& t, Monomial k) { return t.first < k; });
    return (it != L.end() && it->first == m) ? &it->second : nullptr;
  }
  const C* find(const std::vector<int>& exps) const { return find(checked_monomial(exps)); }

  std::size_t size() const {
    std::size_t k = 0;
    for (const auto& L : layers_) k += L.size();
    return k;
  }
  bool empty() const {
    return std::all_of(layers_.begin(), layers_.end(), [](const Layer& L) { return L.empty(); });
  }
  /// Lowest degree carrying a term, or trunc_degree + 1 for the zero series.
  int order() const {
    for (int d = 0; d <= trunc_; ++d) {
      if (!layers_[static_cast<std::size_t>(d)].empty()) return d;
    }
    return trunc_ + 1;
  }
  /// Highest degree carrying a term, or -1 for the zero series.
  int max_degree() const {
    for (int d = trunc_; d >= 0; --d) {
      if (!layers_[static_cast<std::size_t>(d)].empty()) return d;
    }
    return -1;
  }

  /// All terms in graded order (degree first, then key).
  std::vector<Term> terms() const {
    std::vector<Term> out;
    for (const auto& L : layers_) out.insert(out.end(), L.begin(), L.end());
    return out;
  }
  template <class F>
  void for_each(F&& f) const {
    for (const auto& L : layers_) {
      for (const auto& t : L) f(t.first, t.second);
    }
  }

  MultiSeries truncated(int trunc_degree) const {
    MultiSeries out(n_, trunc_degree);
    for (int d = 0; d <= std::min(trunc_, trunc_degree); ++d) out.layers_[d] = layers_[d];
    return out;
  }
  MultiSeries homogeneous_part(int d) const {
    MultiSeries out(n_, trunc_);
    if (d >= 0 && d <= trunc_) out.layers_[d] = layers_[d];
    return out;
  }
  /// Terms of degree >= d.
  MultiSeries tail_from(int d) const {
    MultiSeries out(n_, trunc_);
    for (int k = std::max(d, 0); k <= trunc_; ++k) out.layers_[k] = layers_[k];
    return out;
  }

  template <class F>
  auto map_coefficients(F&& f) const -> MultiSeries<decltype(f(std::declval<const C&>()))> {
    MultiSeries<decltype(f(std::declval<const C&>()))> out(n_, trunc_);
    for_each([&](Monomial m, const C& c) { out.add_term(m, f(c)); });
    return out;
  }

  MultiSeries operator-() const {
    MultiSeries out = *this;
    for (auto& L : out.layers_) {
      for (auto& t : L) t.second = -t.second;
    }
    return out;
  }
  friend MultiSeries operator+(const MultiSeries& a, const MultiSeries& b) { return combine(a, b, false); }
  friend MultiSeries operator-(const MultiSeries& a, const MultiSeries& b) { return combine(a, b, true); }
  MultiSeries& operator+=(const MultiSeries& b) { return *this = *this + b; }
  MultiSeries& operator-=(const MultiSeries& b) { return *this = *this - b; }

  friend MultiSeries operator*(const MultiSeries& a, const MultiSeries& b) {
    a.check_compatible(b);
    const int N = std::min(a.trunc_, b.trunc_);
    MultiSeries out(a.n_, N);
    for (int d = 0; d <= N; ++d) {
      std::unordered_map<Monomial, C> acc;
      for (int i = 0; i <= d; ++i) {
        if (i > a.trunc_ || d - i > b.trunc_) continue;
        accumulate_product(acc, a.layers_[i], b.layers_[d - i]);
      }
      out.layers_[d] = drain(acc);
    }
    return out;
  }
  MultiSeries& operator*=(const MultiSeries& b) { return *this = *this * b; }

  friend MultiSeries operator*(const C& c, const MultiSeries& a) {
    if (is_zero(c)) return MultiSeries(a.n_, a.trunc_);
    MultiSeries out = a;
    for (auto& L : out.layers_) {
      for (auto& t : L) t.second = c * t.second;
      L.erase(std::remove_if(L.begin(), L.end(), [](const Term& t) { return is_zero(t.second); }), L.end());
    }
    return out;
  }

  /// Same terms and same truncation degree.
  friend bool operator==(const MultiSeries& a, const MultiSeries& b) {
    if (a.n_ != b.n_ || a.trunc_ != b.trunc_) return false;
    return (a - b).empty();
  }
  friend bool operator!=(const MultiSeries& a, const MultiSeries& b) { return !(a == b); }
  /// Agreement of all terms through degree d (truncation degrees may differ).
  bool agrees_through(const MultiSeries& b, int d) const {
    const int D = std::min({d, trunc_, b.trunc_});
    return (truncated(D) - b.truncated(D)).empty();
  }

  MultiSeries derivative(int i) const {
    if (i < 0 || i >= n_) throw InputError("derivative variable out of range");
    MultiSeries out(n_, trunc_ > 0 ? trunc_ - 1 : 0);
    const Monomial e = variable_monomial(i);
    for_each([&](Monomial m, const C& c) {
      int k = exponent(m, i);
      if (k > 0) out.add_term(m - e, times_integer(c, k));
    });
    return out;
  }

  /// phi(l_1 x_1, ..., l_n x_n).
  MultiSeries scale_variables(const std::vector<C>& lambda) const {
    if (static_cast<int>(lambda.size()) != n_) throw InputError("scaling vector has wrong length");
    MultiSeries out(n_, trunc_);
    for (int d = 0; d <= trunc_; ++d) {
      Layer L;
      L.reserve(layers_[d].size());
      for (const auto& [m, c] : layers_[d]) {
        C v = c;
        for (int i = 0; i < n_; ++i) {
          int k = exponent(m, i);
          if (k > 0) v = v * power(lambda[i], static_cast<unsigned long>(k));
        }
        if (!is_zero(v)) L.emplace_back(m, std::move(v));
      }
      out.layers_[d] = std::move(L);
    }
    return out;
  }

  /// Drops every monomial involving one of the variables x_{r+1}..x_n.
  MultiSeries restrict_to_head(int r) const {
    MultiSeries out(n_, trunc_);
    for (int d = 0; d <= trunc_; ++d) {
      for (const auto& t : layers_[d]) {
        if (tail_degree(t.first, r, n_) == 0) out.layers_[d].push_back(t);
      }
    }
    return out;
  }

  /// Evaluates the polynomial at a point; `zero` seeds the accumulator.
  C evaluate(const std::vector<C>& point, const C& zero) const {
    if (static_cast<int>(point.size()) != n_) throw InputError("evaluation point has wrong dimension");
    C acc = zero;
    for_each([&](Monomial m, const C& c) {
      C term = c;
      for (int i = 0; i < n_; ++i) {
        int k = exponent(m, i);
        if (k > 0) term = term * power(point[i], static_cast<unsigned long>(k));
      }
      acc = acc + term;
    });
    return acc;
  }

  static void accumulate_product(std::unordered_map<Monomial, C>& acc, const Layer& a, const Layer& b) {
    if (a.empty() || b.empty()) return;
    acc.reserve(acc.size() + a.size() * b.size() / 2 + 1);
    for (const auto& [ma, ca] : a) {
      for (const auto& [mb, cb] : b) {
        auto [it, inserted] = acc.try_emplace(ma + mb, ca * cb);
        if (!inserted) it->second += ca * cb;
      }
    }
  }
  static Layer drain(std::unordered_map<Monomial, C>& acc) {
    Layer out;
    out.reserve(acc.size());
    for (auto& [m, c] : acc) {
      if (!is_zero(c)) out.emplace_back(m, std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
    acc.clear();
    return out;
  }

  void check_compatible(const MultiSeries& b) const {
    if (n_ != b.n_) throw InputError("series have different numbers of variables");
  }

 private:
  Monomial checked_monomial(const std::vector<int>& exps) const {
    if (static_cast<int>(exps.size()) != n_) throw InputError("exponent vector has wrong length");
    return monomial_from(exps);
  }

  static MultiSeries combine(const MultiSeries& a, const MultiSeries& b, bool subtract) {
    a.check_compatible(b);
    const int N = std::min(a.trunc_, b.trunc_);
    MultiSeries out(a.n_, N);
    for (int d = 0; d <= N; ++d) {
      const Layer& x = a.layers_[d];
      const Layer& y = b.layers_[d];
      Layer& z = out.layers_[d];
      z.reserve(x.size() + y.size());
      std::size_t i = 0, j = 0;
      while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
          z.push_back(x[i++]);
        } else if (i == x.size() || y[j].first < x[i].first) {
          z.emplace_back(y[j].first, subtract ? C(-y[j].second) : y[j].second);
          ++j;
        } else {
          C c = subtract ? C(x[i].second - y[j].second) : C(x[i].second + y[j].second);
          if (!is_zero(c)) z.emplace_back(x[i].first, std::move(c));
          ++i;
          ++j;
        }
      }
    }
    return out;
  }

  int n_;
  int trunc_;
  std::vector<Layer> layers_;
};

template <class C>
using SeriesTuple = std::vector<MultiSeries<C>>;

using RationalSeries = MultiSeries<BigRational>;
using RationalTuple = SeriesTuple<BigRational>;

template <class C>
SeriesTuple<C> identity_tuple(int n, int trunc_degree, const C& one) {
  SeriesTuple<C> out;
  for (int i = 0; i < n; ++i) out.push_back(MultiSeries<C>::variable(n, trunc_degree, i, one));
  return out;
}

template <class C>
int tuple_trunc_degree(const SeriesTuple<C>& g) {
  if (g.empty()) throw InputError("empty series tuple");
  int N = g.front().trunc_degree();
  for (const auto& s : g) N = std::min(N, s.trunc_degree());
  return N;
}

template <class C>
SeriesTuple<C> operator+(const SeriesTuple<C>& a, const SeriesTuple<C>& b) {
  if (a.size() != b.size()) throw InputError("tuple length mismatch");
  SeriesTuple<C> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
  return out;
}
template <class C>
SeriesTuple<C> operator-(const SeriesTuple<C>& a, const SeriesTuple<C>& b) {
  if (a.size() != b.size()) throw InputError("tuple length mismatch");
  SeriesTuple<C> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
  return out;
}
template <class C>
bool tuple_empty(const SeriesTuple<C>& a) {
  return std::all_of(a.begin(), a.end(), [](const MultiSeries<C>& s) { return s.empty(); });
}
template <class C>
SeriesTuple<C> truncate_tuple(const SeriesTuple<C>& a, int N) {
  SeriesTuple<C> out;
  for (const auto& s : a) out.push_back(s.truncated(N));
  return out;
}
/// Lowest degree over all components (trunc + 1 when the tuple vanishes).
template <class C>
int tuple_order(const SeriesTuple<C>& a) {
  int o = kMaxTruncation + 1;
  for (const auto& s : a) o = std::min(o, s.empty() ? s.trunc_degree() + 1 : s.order());
  return o;
}

/// True iff every monomial has total degree >= 2 in x_{r+1}..x_n.
template <class C>
bool in_subspace_Ar(const MultiSeries<C>& phi, int r) {
  const int n = phi.num_vars();
  if (r < 0 || r > n) throw InputError("r must lie in 0..n");
  bool ok = true;
  phi.for_each([&](Monomial m, const C&) {
    if (tail_degree(m, r, n) < 2) ok = false;
  });
  return ok;
}
template <class C>
bool in_subspace_Ar(const SeriesTuple<C>& g, int r) {
  return std::all_of(g.begin(), g.end(), [r](const MultiSeries<C>& s) { return in_subspace_Ar(s, r); });
}

/// Exact Gauss norm p^-v * rho^|I| of the dominant term.
struct GaussNorm {
  bool zero = true;
  BigRational value = 0;
  int valuation = 0;       ///< p-adic valuation of the dominant coefficient
  int degree = 0;          ///< |I| of the witness
  Monomial witness = 0;

  friend bool operator<(const GaussNorm& a, const GaussNorm& b) {
    if (a.zero) return !b.zero;
    if (b.zero) return false;
    return a.value < b.value;
  }
};

inline int coefficient_valuation(const BigRational& c, const BigInt& p) { return valuation(c, p); }
inline int coefficient_valuation(const PAdicNumber& c, const BigInt&) { return c.valuation(); }

/// sup over terms of |a_I|_p rho^|I|; ties keep the graded-first witness.
template <class C>
GaussNorm gauss_norm(const MultiSeries<C>& phi, const BigRational& rho, const BigInt& p) {
  if (sgn(rho) <= 0) throw InputError("gauss_norm radius must be positive");
  if (p < 2 || !is_prime(p)) throw InputError("gauss_norm needs a prime");
  GaussNorm best;
  phi.for_each([&](Monomial m, const C& c) {
    int v = coefficient_valuation(c, p);
    int d = monomial_degree(m);
    BigRational value = rpow(BigRational(p), -v) * rpow(rho, d);
    if (best.zero || value > best.value) {
      best.zero = false;
      best.value = value;
      best.valuation = v;
      best.degree = d;
      best.witness = m;
    }
  });
  return best;
}
inline GaussNorm gauss_norm(const MultiSeries<PAdicNumber>& phi, const BigRational& rho) {
  if (phi.empty()) return gauss_norm(phi, rho, BigInt(3));
  return gauss_norm(phi, rho, BigInt(phi.terms().front().second.prime()));
}
template <class C>
GaussNorm gauss_norm(const SeriesTuple<C>& g, const BigRational& rho, const BigInt& p) {
  GaussNorm best;
  for (const auto& s : g) {
    GaussNorm n = gauss_norm(s, rho, p);
    if (best < n) best = n;
  }
  return best;
}

}  // namespace padyn
