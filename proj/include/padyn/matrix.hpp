#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "padyn/errors.hpp"
#include "padyn/padic.hpp"
#include "padyn/rational.hpp"
#include "padyn/series.hpp"

namespace padyn {

template <class C>
using Matrix = std::vector<std::vector<C>>;

using RationalMatrix = Matrix<BigRational>;
using IntMatrix = std::vector<std::vector<BigInt>>;

template <class C>
Matrix<C> identity_matrix(int n, const C& one) {
  C zero = one - one;
  Matrix<C> m(static_cast<std::size_t>(n), std::vector<C>(static_cast<std::size_t>(n), zero));
  for (int i = 0; i < n; ++i) m[i][i] = one;
  return m;
}

template <class C>
Matrix<C> matmul(const Matrix<C>& a, const Matrix<C>& b) {
  if (a.empty() || b.empty() || a[0].size() != b.size()) throw InputError("matrix shape mismatch");
  const std::size_t n = a.size(), k = b.size(), m = b[0].size();
  Matrix<C> out(n, std::vector<C>(m, a[0][0] - a[0][0]));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      C acc = out[i][j];
      for (std::size_t t = 0; t < k; ++t) acc = acc + a[i][t] * b[t][j];
      out[i][j] = acc;
    }
  }
  return out;
}

template <class C>
Matrix<C> transpose(const Matrix<C>& a) {
  if (a.empty()) return a;
  Matrix<C> t(a[0].size(), std::vector<C>(a.size(), a[0][0]));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  }
  return t;
}

/// Gauss-Jordan inverse; nullopt when singular. Pivots prefer low pivot_rank.
template <class C>
std::optional<Matrix<C>> inverse(const Matrix<C>& a) {
  const std::size_t n = a.size();
  if (n == 0) return a;
  for (const auto& row : a) {
    if (row.size() != n) throw InputError("inverse of a non-square matrix");
  }
  Matrix<C> m = a;
  C one = a[0][0];
  bool found_one = false;
  for (const auto& row : a) {
    for (const auto& x : row) {
      if (!is_zero(x)) {
        one = one_like(x);
        found_one = true;
        break;
      }
    }
    if (found_one) break;
  }
  if (!found_one) return std::nullopt;
  Matrix<C> inv = identity_matrix<C>(static_cast<int>(n), one);
  for (std::size_t col = 0; col < n; ++col) {
    std::optional<std::size_t> piv;
    for (std::size_t r = col; r < n; ++r) {
      if (is_zero(m[r][col])) continue;
      if (!piv || pivot_rank(m[r][col]) < pivot_rank(m[*piv][col])) piv = r;
    }
    if (!piv) return std::nullopt;
    std::swap(m[col], m[*piv]);
    std::swap(inv[col], inv[*piv]);
    C p = m[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      m[col][j] = m[col][j] / p;
      inv[col][j] = inv[col][j] / p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || is_zero(m[r][col])) continue;
      C factor = m[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        m[r][j] = m[r][j] - factor * m[col][j];
        inv[r][j] = inv[r][j] - factor * inv[col][j];
      }
    }
  }
  return inv;
}

BigRational determinant(RationalMatrix a);
int rank(RationalMatrix a);
/// Basis of {v : a v = 0} from the reduced row echelon form, one vector per free column.
std::vector<std::vector<BigRational>> kernel(const RationalMatrix& a, std::size_t columns);
/// Coefficients c_0..c_n of det(x I - a), c_n = 1 (Faddeev-LeVerrier).
std::vector<BigRational> characteristic_polynomial(const RationalMatrix& a);
/// Rational roots of a nonzero polynomial (ascending coefficients) with multiplicities.
std::vector<std::pair<BigRational, int>> rational_roots(std::vector<BigRational> coeffs);
/// Remaining factor after dividing out the given roots (ascending coefficients).
std::vector<BigRational> deflate(std::vector<BigRational> coeffs, const BigRational& root);

/// Matrix with series entries; rows x columns.
template <class C>
using SeriesMatrix = std::vector<std::vector<MultiSeries<C>>>;

template <class C>
SeriesMatrix<C> series_matmul(const SeriesMatrix<C>& a, const SeriesMatrix<C>& b) {
  if (a.empty() || b.empty() || a[0].size() != b.size()) throw InputError("series matrix shape mismatch");
  const auto& proto = a[0][0];
  SeriesMatrix<C> out(a.size(), std::vector<MultiSeries<C>>(b[0].size(), MultiSeries<C>(proto.num_vars(), proto.trunc_degree())));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b[0].size(); ++j) {
      MultiSeries<C> acc(proto.num_vars(), std::min(proto.trunc_degree(), b[0][0].trunc_degree()));
      for (std::size_t t = 0; t < b.size(); ++t) {
        if (a[i][t].empty() || b[t][j].empty()) continue;
        acc += a[i][t] * b[t][j];
      }
      out[i][j] = std::move(acc);
    }
  }
  return out;
}

template <class C>
SeriesTuple<C> series_matvec(const SeriesMatrix<C>& a, const SeriesTuple<C>& v) {
  if (a.empty() || a[0].size() != v.size()) throw InputError("series matrix-vector shape mismatch");
  SeriesTuple<C> out;
  for (const auto& row : a) {
    MultiSeries<C> acc(v[0].num_vars(), std::min(row[0].trunc_degree(), v[0].trunc_degree()));
    for (std::size_t t = 0; t < v.size(); ++t) {
      if (row[t].empty() || v[t].empty()) continue;
      acc += row[t] * v[t];
    }
    out.push_back(std::move(acc));
  }
  return out;
}

template <class C>
SeriesMatrix<C> series_identity(int size, int n, int N, const C& one) {
  SeriesMatrix<C> out(static_cast<std::size_t>(size), std::vector<MultiSeries<C>>(static_cast<std::size_t>(size), MultiSeries<C>(n, N)));
  for (int i = 0; i < size; ++i) out[i][i] = MultiSeries<C>::constant(n, N, one);
  return out;
}

/// Inverse of a series matrix whose constant term is invertible, via the
/// Neumann series a^-1 = sum_k (-a0^-1 (a - a0))^k a0^-1 up to the truncation.
template <class C>
SeriesMatrix<C> series_inverse(const SeriesMatrix<C>& a, const C& one) {
  const std::size_t m = a.size();
  const int n = a[0][0].num_vars();
  const int N = a[0][0].trunc_degree();
  Matrix<C> a0(m, std::vector<C>(m, one - one));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (const C* c = a[i][j].find(Monomial{0})) a0[i][j] = *c;
    }
  }
  auto inv0 = inverse(a0);
  if (!inv0) throw ObstructionError("series matrix has a singular constant term");
  SeriesMatrix<C> inv0s(m, std::vector<MultiSeries<C>>(m, MultiSeries<C>(n, N)));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) inv0s[i][j] = MultiSeries<C>::constant(n, N, (*inv0)[i][j]);
  }
  SeriesMatrix<C> nil(m, std::vector<MultiSeries<C>>(m, MultiSeries<C>(n, N)));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) nil[i][j] = a[i][j].tail_from(1);
  }
  // t = -a0^-1 (a - a0) has order >= 1, so N+1 terms suffice.
  SeriesMatrix<C> t = series_matmul(inv0s, nil);
  for (auto& row : t) {
    for (auto& e : row) e = -e;
  }
  SeriesMatrix<C> sum = series_identity<C>(static_cast<int>(m), n, N, one);
  SeriesMatrix<C> term = sum;
  for (int k = 1; k <= N; ++k) {
    term = series_matmul(term, t);
    bool all_zero = true;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        sum[i][j] += term[i][j];
        if (!term[i][j].empty()) all_zero = false;
      }
    }
    if (all_zero) break;
  }
  return series_matmul(sum, inv0s);
}

/// X with A X = F, solved degree by degree:
/// X_d = A0^-1 (F_d - sum_{a >= 1} A_a X_{d-a}).
template <class C>
SeriesTuple<C> series_solve(const SeriesMatrix<C>& a, const SeriesTuple<C>& f, const C& one) {
  const std::size_t m = a.size();
  if (m == 0 || f.size() != m) throw InputError("series_solve: shape mismatch");
  const int n = f[0].num_vars();
  int N = tuple_trunc_degree(f);
  using Layer = typename MultiSeries<C>::Layer;
  Matrix<C> a0(m, std::vector<C>(m, one - one));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (const C* c = a[i][j].find(Monomial{0})) a0[i][j] = *c;
    }
  }
  auto inv0 = inverse(a0);
  if (!inv0) throw ObstructionError("series matrix has a singular constant term");
  SeriesTuple<C> x(m, MultiSeries<C>(n, N));
  for (int d = 0; d <= N; ++d) {
    std::vector<std::unordered_map<Monomial, C>> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (const auto& [mono, c] : f[i].layer(d)) rhs[i].emplace(mono, c);
      std::unordered_map<Monomial, C> prod;
      for (std::size_t j = 0; j < m; ++j) {
        for (int s = 1; s <= d; ++s) {
          if (s > a[i][j].trunc_degree()) break;
          MultiSeries<C>::accumulate_product(prod, a[i][j].layer(s), x[j].layer(d - s));
        }
      }
      for (auto& [mono, c] : prod) {
        auto [it, inserted] = rhs[i].try_emplace(mono, -c);
        if (!inserted) it->second -= c;
      }
    }
    std::vector<Layer> rl;
    for (auto& r : rhs) rl.push_back(MultiSeries<C>::drain(r));
    for (std::size_t i = 0; i < m; ++i) {
      std::unordered_map<Monomial, C> acc;
      for (std::size_t j = 0; j < m; ++j) {
        if (is_zero((*inv0)[i][j])) continue;
        for (const auto& [mono, c] : rl[j]) {
          auto [it, inserted] = acc.try_emplace(mono, (*inv0)[i][j] * c);
          if (!inserted) it->second += (*inv0)[i][j] * c;
        }
      }
      x[i].set_layer(d, MultiSeries<C>::drain(acc));
    }
  }
  return x;
}

}  // namespace padyn
