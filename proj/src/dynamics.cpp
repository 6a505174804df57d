#include "padyn/dynamics.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "padyn/compose.hpp"
#include "padyn/errors.hpp"

namespace padyn {

AnalyticMap make_map(RationalTuple components, int r) {
  const int n = static_cast<int>(components.size());
  if (n == 0) throw InputError("map has no components");
  if (r < 0 || r > n) throw InputError("fixed locus dimension must lie in 0..n");
  for (int i = 0; i < n; ++i) {
    const auto& c = components[i];
    if (c.num_vars() != n) {
      throw InputError("component " + std::to_string(i + 1) + " has " + std::to_string(c.num_vars()) +
                       " variables, expected " + std::to_string(n));
    }
    if (c.find(Monomial{0}) != nullptr) {
      throw InputError("component " + std::to_string(i + 1) + " has a nonzero constant term; the origin is not fixed");
    }
  }
  if (r > 0) {
    for (int i = 0; i < n; ++i) {
      RationalSeries on_locus = components[i].restrict_to_head(r);
      RationalSeries expected(n, components[i].trunc_degree());
      if (i < r) expected.add_term(variable_monomial(i), BigRational(1));
      if (on_locus != expected) {
        throw InputError("declared fixed locus is not fixed: component " + std::to_string(i + 1) +
                         " does not restrict correctly to {x_" + std::to_string(r + 1) + " = ... = 0}");
      }
    }
  }
  return AnalyticMap{n, r, std::move(components)};
}

AnalyticMap with_truncation(const AnalyticMap& f, int N) {
  RationalTuple comps;
  for (const auto& c : f.components) {
    RationalSeries s(f.n, N);
    c.for_each([&](Monomial m, const BigRational& v) { s.add_term(m, v); });
    comps.push_back(std::move(s));
  }
  return AnalyticMap{f.n, f.r, std::move(comps)};
}

RationalMatrix jacobian_at_origin(const AnalyticMap& f) { return linear_part(f.components, BigRational(0)); }

namespace {

bool is_triangular(const RationalMatrix& m) {
  const std::size_t n = m.size();
  bool upper = true, lower = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(m[i][j]) == 0) continue;
      if (i > j) upper = false;
      if (i < j) lower = false;
    }
  }
  return upper || lower;
}

}  // namespace

EigenData rational_eigenvalues(const RationalMatrix& m) {
  const std::size_t n = m.size();
  for (const auto& row : m) {
    if (row.size() != n) throw InputError("eigenvalues of a non-square matrix");
  }
  EigenData out;
  if (n == 0) return out;
  auto roots = rational_roots(characteristic_polynomial(m));
  std::size_t total = 0;
  for (const auto& [x, k] : roots) total += static_cast<std::size_t>(k);
  if (total < n) {
    throw IrrationalEigenvalue("IrrationalEigenvalue: the characteristic polynomial has " + std::to_string(n - total) +
                               " roots outside Q; present the map in coordinates with rational eigenvalues");
  }
  if (is_triangular(m)) {
    for (std::size_t i = 0; i < n; ++i) out.eigenvalues.push_back(m[i][i]);
  } else {
    for (const auto& [x, k] : roots) {
      if (x == 1) out.eigenvalues.insert(out.eigenvalues.begin(), static_cast<std::size_t>(k), x);
    }
    for (const auto& [x, k] : roots) {
      if (x != 1) out.eigenvalues.insert(out.eigenvalues.end(), static_cast<std::size_t>(k), x);
    }
  }
  // Semisimple iff the product of (m - lambda) over distinct eigenvalues vanishes.
  RationalMatrix prod = identity_matrix<BigRational>(static_cast<int>(n), 1);
  for (const auto& [x, k] : roots) {
    RationalMatrix shifted = m;
    for (std::size_t i = 0; i < n; ++i) shifted[i][i] -= x;
    prod = matmul(prod, shifted);
  }
  out.semisimple = true;
  for (const auto& row : prod) {
    for (const auto& v : row) {
      if (sgn(v) != 0) out.semisimple = false;
    }
  }
  return out;
}

std::vector<Resonance> enumerate_resonances(const std::vector<BigRational>& lambda, int r, int max_degree) {
  const int n = static_cast<int>(lambda.size());
  if (r < 0 || r > n) throw InputError("r must lie in 0..n");
  for (const auto& l : lambda) {
    if (sgn(l) == 0) throw InputError("eigenvalues must be nonzero");
  }
  std::vector<Resonance> out;
  const int t = n - r;
  if (t == 0 || max_degree < 2) return out;
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  // Depth-first over tail exponents; degrees visited in increasing order.
  for (int deg = 2; deg <= max_degree; ++deg) {
    std::function<void(int, int, BigRational)> rec = [&](int idx, int remaining, BigRational value) {
      if (idx == n - 1) {
        e[idx] = remaining;
        BigRational v = value * rpow(lambda[idx], remaining);
        for (int j = 0; j < n; ++j) {
          if (v == lambda[j]) out.push_back(Resonance{e, j});
        }
        e[idx] = 0;
        return;
      }
      for (int k = remaining; k >= 0; --k) {
        e[idx] = k;
        rec(idx + 1, remaining - k, value * rpow(lambda[idx], k));
      }
      e[idx] = 0;
    };
    rec(r, deg, BigRational(1));
  }
  return out;
}

namespace {

// Row-style Hermite reduction on the first `cols` columns; returns the number of pivots.
int hermite_in_place(std::vector<std::vector<BigInt>>& a, std::size_t cols) {
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    while (true) {
      std::optional<std::size_t> best;
      for (std::size_t r = row; r < a.size(); ++r) {
        if (a[r][col] == 0) continue;
        if (!best || abs(a[r][col]) < abs(a[*best][col])) best = r;
      }
      if (!best) break;
      std::swap(a[row], a[*best]);
      bool done = true;
      for (std::size_t r = row + 1; r < a.size(); ++r) {
        if (a[r][col] == 0) continue;
        BigInt q;
        mpz_fdiv_q(q.get_mpz_t(), a[r][col].get_mpz_t(), a[row][col].get_mpz_t());
        for (std::size_t j = 0; j < a[r].size(); ++j) a[r][j] -= q * a[row][j];
        if (a[r][col] != 0) done = false;
      }
      if (done) break;
    }
    if (a[row][col] == 0) continue;
    if (a[row][col] < 0) {
      for (auto& x : a[row]) x = -x;
    }
    for (std::size_t r = 0; r < row; ++r) {
      BigInt q;
      mpz_fdiv_q(q.get_mpz_t(), a[r][col].get_mpz_t(), a[row][col].get_mpz_t());
      if (q == 0) continue;
      for (std::size_t j = 0; j < a[r].size(); ++j) a[r][j] -= q * a[row][j];
    }
    ++row;
  }
  return static_cast<int>(row);
}

}  // namespace

std::vector<std::vector<BigInt>> hermite_normal_form(std::vector<std::vector<BigInt>> rows) {
  if (rows.empty()) return rows;
  int k = hermite_in_place(rows, rows[0].size());
  rows.resize(static_cast<std::size_t>(k));
  return rows;
}

RelationLattice relation_lattice(const std::vector<BigRational>& lambda, long exponent_bound) {
  const std::size_t n = lambda.size();
  RelationLattice out;
  std::map<BigInt, std::vector<int>> exps;  // prime -> exponent in each lambda_i
  std::vector<int> negative(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(lambda[i]) == 0) throw InputError("relation_lattice needs nonzero values");
    negative[i] = sgn(lambda[i]) < 0 ? 1 : 0;
    for (int part = 0; part < 2; ++part) {
      BigInt v = part == 0 ? BigInt(lambda[i].get_num()) : BigInt(lambda[i].get_den());
      if (abs(v) == 1) continue;
      for (const auto& [p, e] : factor(v)) {
        auto& col = exps[p];
        col.resize(n, 0);
        col[i] += part == 0 ? e : -e;
      }
    }
  }
  const std::size_t P = exps.size();
  for (const auto& [p, col] : exps) out.primes.push_back(p);

  // Rows [exponents of lambda_i | e_i]; Hermite reduction on the exponent block.
  std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(P + n, BigInt(0)));
  std::size_t c = 0;
  for (const auto& [p, col] : exps) {
    for (std::size_t i = 0; i < n; ++i) a[i][c] = col[i];
    ++c;
  }
  for (std::size_t i = 0; i < n; ++i) a[i][P + i] = 1;
  int rk = hermite_in_place(a, P);
  out.rank = rk;
  for (const auto& row : a) out.unimodular.emplace_back(row.begin() + static_cast<long>(P), row.end());

  std::vector<std::vector<BigInt>> kernel_rows(out.unimodular.begin() + rk, out.unimodular.end());
  // -1 lies in H iff some kernel vector has odd sign parity; the relation
  // lattice proper is the even-parity sublattice.
  auto parity = [&](const std::vector<BigInt>& v) {
    BigInt s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (negative[i]) s += v[i];
    }
    return mpz_odd_p(s.get_mpz_t()) != 0;
  };
  std::optional<std::size_t> odd;
  for (std::size_t t = 0; t < kernel_rows.size(); ++t) {
    if (parity(kernel_rows[t])) {
      odd = t;
      break;
    }
  }
  if (odd) {
    out.torsion_free = false;
    const auto pivot = kernel_rows[*odd];
    for (std::size_t t = 0; t < kernel_rows.size(); ++t) {
      if (t == *odd) {
        for (auto& x : kernel_rows[t]) x *= 2;
      } else if (parity(kernel_rows[t])) {
        for (std::size_t i = 0; i < n; ++i) kernel_rows[t][i] -= pivot[i];
      }
    }
  }
  out.basis = hermite_normal_form(kernel_rows);
  for (const auto& v : out.basis) {
    for (const auto& x : v) {
      if (abs(x) > exponent_bound) out.within_bound = false;
    }
  }
  return out;
}

RationalMatrix standard_symplectic_form(int two_m) {
  if (two_m <= 0 || two_m % 2 != 0) throw InputError("symplectic form needs even positive dimension");
  const int m = two_m / 2;
  RationalMatrix s(static_cast<std::size_t>(two_m), std::vector<BigRational>(static_cast<std::size_t>(two_m), BigRational(0)));
  for (int i = 0; i < m; ++i) {
    s[i][i + m] = 1;
    s[i + m][i] = -1;
  }
  return s;
}

SymplecticReport symplectic_scaling_check(const RationalMatrix& m, const RationalMatrix& sigma, const BigRational& mu) {
  const std::size_t n = sigma.size();
  if (n == 0 || n % 2 != 0) throw InputError("symplectic form must have even positive dimension");
  if (m.size() != n) throw InputError("matrix and form dimensions differ");
  for (std::size_t i = 0; i < n; ++i) {
    if (sigma[i].size() != n || m[i].size() != n) throw InputError("matrix and form must be square");
    for (std::size_t j = 0; j < n; ++j) {
      if (sigma[i][j] != -sigma[j][i]) throw InputError("symplectic form is not antisymmetric");
    }
  }
  if (sgn(determinant(sigma)) == 0) throw InputError("symplectic form is degenerate");

  SymplecticReport rep;
  RationalMatrix lhs = matmul(matmul(transpose(m), sigma), m);
  rep.scaling_holds = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (lhs[i][j] != mu * sigma[i][j]) rep.scaling_holds = false;
    }
  }
  if (!rep.scaling_holds) return rep;

  EigenData eig;
  try {
    eig = rational_eigenvalues(m);
  } catch (const IrrationalEigenvalue&) {
    return rep;
  }
  if (!eig.semisimple) return rep;
  // Eigenvector basis V, grouped by distinct eigenvalue.
  std::vector<std::vector<BigRational>> vecs;
  std::vector<BigRational> vals;
  std::vector<BigRational> distinct;
  for (const auto& x : eig.eigenvalues) {
    if (std::find(distinct.begin(), distinct.end(), x) == distinct.end()) distinct.push_back(x);
  }
  for (const auto& x : distinct) {
    RationalMatrix shifted = m;
    for (std::size_t i = 0; i < n; ++i) shifted[i][i] -= x;
    for (auto& v : kernel(shifted, n)) {
      vecs.push_back(std::move(v));
      vals.push_back(x);
    }
  }
  // Gram matrix of sigma in the eigenbasis, then a perfect matching on its support.
  RationalMatrix gram(n, std::vector<BigRational>(n, BigRational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      BigRational acc = 0;
      for (std::size_t a = 0; a < n; ++a) {
        if (sgn(vecs[i][a]) == 0) continue;
        for (std::size_t b = 0; b < n; ++b) acc += vecs[i][a] * sigma[a][b] * vecs[j][b];
      }
      gram[i][j] = acc;
    }
  }
  std::vector<int> mate(n, -1);
  std::function<bool()> match = [&]() -> bool {
    std::size_t i = 0;
    while (i < n && mate[i] >= 0) ++i;
    if (i == n) return true;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (mate[j] >= 0 || sgn(gram[i][j]) == 0) continue;
      mate[i] = static_cast<int>(j);
      mate[j] = static_cast<int>(i);
      if (match()) return true;
      mate[i] = mate[j] = -1;
    }
    return false;
  };
  if (!match()) return rep;
  rep.pairing_consistent = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (mate[i] < static_cast<int>(i)) continue;
    rep.pairs.emplace_back(static_cast<int>(i), mate[i]);
    rep.eigenvalue_pairs.emplace_back(vals[i], vals[mate[i]]);
    if (vals[i] * vals[mate[i]] != mu) rep.pairing_consistent = false;
  }
  return rep;
}

long default_prime(const AnalyticMap& f, const std::vector<BigRational>& eigenvalues) {
  BigInt bad = 1;
  for (const auto& l : eigenvalues) {
    if (sgn(l) == 0) throw InputError("no prime makes a zero eigenvalue a unit");
    bad *= l.get_num();
    bad *= l.get_den();
  }
  for (const auto& c : f.components) {
    c.for_each([&](Monomial, const BigRational& v) { bad *= v.get_den(); });
  }
  bad = abs(bad);
  for (long p = 3; p < 1000000; p += 2) {
    if (!is_prime(BigInt(p))) continue;
    if (!mpz_divisible_ui_p(bad.get_mpz_t(), static_cast<unsigned long>(p))) return p;
  }
  throw InputError("no suitable odd prime below 10^6");
}

}  // namespace padyn
