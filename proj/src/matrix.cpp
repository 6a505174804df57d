#include "padyn/matrix.hpp"

#include <algorithm>
#include <set>

namespace padyn {

namespace {

// In-place reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(RationalMatrix& a, std::size_t columns) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < columns && row < a.size(); ++col) {
    std::size_t piv = row;
    while (piv < a.size() && sgn(a[piv][col]) == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[row], a[piv]);
    BigRational p = a[row][col];
    for (std::size_t j = col; j < columns; ++j) a[row][j] /= p;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || sgn(a[r][col]) == 0) continue;
      BigRational f = a[r][col];
      for (std::size_t j = col; j < columns; ++j) a[r][j] -= f * a[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::vector<BigInt> divisors(const BigInt& n) {
  std::vector<BigInt> ds{1};
  for (const auto& [p, e] : factor(n)) {
    std::size_t base = ds.size();
    BigInt pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) ds.push_back(ds[i] * pk);
    }
  }
  return ds;
}

BigRational horner(const std::vector<BigRational>& c, const BigRational& x) {
  BigRational acc = 0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

}  // namespace

BigRational determinant(RationalMatrix a) {
  const std::size_t n = a.size();
  BigRational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && sgn(a[piv][col]) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (sgn(a[r][col]) == 0) continue;
      BigRational f = a[r][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) a[r][j] -= f * a[col][j];
    }
  }
  return det;
}

int rank(RationalMatrix a) {
  if (a.empty()) return 0;
  return static_cast<int>(rref(a, a[0].size()).size());
}

std::vector<std::vector<BigRational>> kernel(const RationalMatrix& a, std::size_t columns) {
  RationalMatrix m = a;
  std::vector<std::size_t> pivots = rref(m, columns);
  std::vector<bool> is_pivot(columns, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<BigRational>> basis;
  for (std::size_t free = 0; free < columns; ++free) {
    if (is_pivot[free]) continue;
    std::vector<BigRational> v(columns, BigRational(0));
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<BigRational> characteristic_polynomial(const RationalMatrix& a) {
  const std::size_t n = a.size();
  std::vector<BigRational> c(n + 1, BigRational(0));
  c[n] = 1;
  RationalMatrix m(n, std::vector<BigRational>(n, BigRational(0)));
  for (std::size_t k = 1; k <= n; ++k) {
    RationalMatrix am = n ? matmul(a, m) : m;
    for (std::size_t i = 0; i < n; ++i) am[i][i] += c[n - k + 1];
    m = am;
    RationalMatrix prod = matmul(a, m);
    BigRational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += prod[i][i];
    c[n - k] = -tr / static_cast<long>(k);
  }
  return c;
}

std::vector<BigRational> deflate(std::vector<BigRational> coeffs, const BigRational& root) {
  // Synthetic division by (x - root).
  const std::size_t n = coeffs.size();
  if (n < 2) throw InputError("cannot deflate a constant");
  std::vector<BigRational> q(n - 1);
  BigRational carry = 0;
  for (std::size_t i = n; i-- > 1;) {
    carry = coeffs[i] + carry * root;
    q[i - 1] = carry;
  }
  return q;
}

std::vector<std::pair<BigRational, int>> rational_roots(std::vector<BigRational> coeffs) {
  while (!coeffs.empty() && sgn(coeffs.back()) == 0) coeffs.pop_back();
  if (coeffs.empty()) throw InputError("rational_roots of the zero polynomial");
  std::vector<std::pair<BigRational, int>> roots;
  int zero_mult = 0;
  while (coeffs.size() > 1 && sgn(coeffs.front()) == 0) {
    coeffs.erase(coeffs.begin());
    ++zero_mult;
  }
  if (zero_mult) roots.emplace_back(BigRational(0), zero_mult);
  if (coeffs.size() == 1) return roots;

  BigInt lcm_den = 1;
  for (const auto& c : coeffs) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.get_den_mpz_t());
  std::vector<BigInt> ints;
  for (const auto& c : coeffs) ints.push_back(BigInt(c * lcm_den));
  std::vector<BigInt> num_divs = divisors(abs(ints.front()));
  std::vector<BigInt> den_divs = divisors(abs(ints.back()));
  std::set<BigRational> candidates;
  for (const auto& p : num_divs) {
    for (const auto& q : den_divs) {
      candidates.insert(make_rational(p, q));
      candidates.insert(make_rational(-p, q));
    }
  }
  for (const auto& x : candidates) {
    int mult = 0;
    while (coeffs.size() > 1 && sgn(horner(coeffs, x)) == 0) {
      coeffs = deflate(coeffs, x);
      ++mult;
    }
    if (mult) roots.emplace_back(x, mult);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace padyn
