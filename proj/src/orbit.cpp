#include "padyn/orbit.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <numeric>

#include "padyn/errors.hpp"

namespace padyn {

namespace {

constexpr int kExactZeroPrecision = 1 << 20;
constexpr long kMaxSeparationModulus = 1024;
constexpr std::size_t kMaxExactBits = 1u << 22;

BigInt residue_of(const BigRational& x, const BigInt& q) {
  auto inv = inverse_mod(BigInt(x.get_den()), q);
  if (!inv) throw InputError("value is not a unit at p");
  BigInt r = (BigInt(x.get_num()) * *inv) % q;
  if (r < 0) r += q;
  return r;
}

bool separated(const std::vector<BigRational>& b, const BigInt& q) {
  std::vector<BigInt> r;
  for (const auto& x : b) r.push_back(residue_of(x, q));
  std::sort(r.begin(), r.end());
  return std::adjacent_find(r.begin(), r.end()) == r.end();
}

// Keeps the value modulo p^A.
PAdicNumber clamp(const PAdicNumber& x, int A) {
  if (x.is_zero()) return PAdicNumber::zero(x.prime(), std::min(x.precision(), A));
  if (x.valuation() >= A) return PAdicNumber::zero(x.prime(), A);
  if (x.absolute_precision() > A) return x.reduced(A - x.valuation());
  return x;
}

int point_valuation(const PAdicPoint& x, const PAdicPoint& y) {
  int v = INT_MAX;
  for (std::size_t i = 0; i < x.size(); ++i) {
    PAdicNumber d = x[i] - y[i];
    if (!d.is_zero()) v = std::min(v, d.valuation());
  }
  return v;
}

void check_points(const std::vector<RationalPoint>& points) {
  for (const auto& x : points) {
    if (x.size() != points.front().size()) throw InputError("points must share a dimension");
  }
}

BigRational monomial_value(Monomial m, const RationalPoint& x) {
  BigRational v = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    int k = exponent(m, static_cast<int>(i));
    if (k > 0) v *= rpow(x[i], k);
  }
  return v;
}

bool same_span(const std::vector<std::vector<BigRational>>& a, const std::vector<std::vector<BigRational>>& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  RationalMatrix stacked = a;
  stacked.insert(stacked.end(), b.begin(), b.end());
  return rank(stacked) == static_cast<int>(a.size());
}

PAdicNumber exact_zero(long p) { return PAdicNumber::zero(p, kExactZeroPrecision); }

}  // namespace

bool Neighbourhood::contains(const PAdicPoint& x) const {
  if (static_cast<int>(x.size()) != n) throw InputError("point has wrong dimension");
  for (const auto& c : x) {
    if (c.prime() != p) throw InputError("point lives over a different prime");
    if (c.is_zero()) {
      if (c.precision() < s) {
        throw PrecisionError("coordinate is zero only modulo p^" + std::to_string(c.precision()) +
                             ", membership needs p^" + std::to_string(s));
      }
    } else if (c.valuation() < s) {
      return false;
    }
  }
  return true;
}

OrbitResult iterate_in_neighbourhood(const AnalyticMap& f, const Neighbourhood& U, const PAdicPoint& x, int k,
                                     int precision) {
  require_odd_prime(U.p);
  if (U.s < 1) throw InputError("neighbourhood level must be at least 1");
  if (f.n != U.n) throw InputError("map and neighbourhood dimensions differ");
  if (k < 0) throw InputError("number of steps must be non-negative");
  if (precision < U.s) throw InputError("precision must be at least the neighbourhood level");
  const BigInt P(U.p);
  for (std::size_t j = 0; j < f.components.size(); ++j) {
    f.components[j].for_each([&](Monomial m, const BigRational& c) {
      if (valuation(c, P) < 0) {
        throw InputError("non-integral coefficient " + to_string(c) + " of " + monomial_to_string(m, f.n) +
                         " in component " + std::to_string(j + 1));
      }
    });
  }
  if (!U.contains(x)) throw InputError("start point is not in the neighbourhood");

  std::vector<MultiSeries<PAdicNumber>> g;
  for (const auto& comp : f.components) {
    g.push_back(comp.map_coefficients([&](const BigRational& c) { return PAdicNumber::from_rational(c, U.p, precision); }));
  }
  const BigInt q = ipow(P, static_cast<unsigned long>(U.s));
  auto residues = [&](const PAdicPoint& y) {
    std::vector<BigInt> r;
    for (const auto& c : y) r.push_back(c.is_zero() ? BigInt(0) : BigInt(c.residue() % q));
    return r;
  };

  OrbitResult out;
  PAdicPoint cur;
  for (const auto& c : x) cur.push_back(clamp(c, precision));
  const auto start_residues = residues(cur);
  out.points.push_back(cur);
  for (int step = 1; step <= k; ++step) {
    PAdicPoint next;
    for (const auto& comp : g) next.push_back(clamp(comp.evaluate(cur, exact_zero(U.p)), precision));
    if (!U.contains(next)) {
      throw std::logic_error("iterate " + std::to_string(step) + " left the neighbourhood");
    }
    if (residues(next) != start_residues) {
      throw std::logic_error("iterate " + std::to_string(step) + " changed its residue modulo p^s");
    }
    out.points.push_back(next);
    cur = std::move(next);
  }

  BigRational det = determinant(jacobian_at_origin(f));
  out.unit_jacobian = sgn(det) != 0 && valuation(det, P) == 0;
  if (out.unit_jacobian) {
    for (int j = 1; j < k; ++j) {
      for (int i : {0, j - 1}) {
        if (i >= j) continue;
        int before = point_valuation(out.points[i], out.points[j]);
        if (before == INT_MAX) continue;
        int after = point_valuation(out.points[i + 1], out.points[j + 1]);
        if (after >= precision && before >= precision) continue;
        ++out.sampled_pairs;
        if (after != before) out.injective_on_samples = false;
      }
    }
  }
  return out;
}

SeparatingPolynomial separating_polynomial(const std::vector<BigRational>& b, long p, std::size_t target, int level) {
  require_odd_prime(p);
  if (b.empty() || target >= b.size()) throw InputError("target index out of range");
  if (level < 1) throw InputError("level must be at least 1");
  const BigInt P(p);
  for (const auto& x : b) {
    if (sgn(x) == 0 || valuation(x, P) != 0) throw InputError("separating points must be p-adic units");
  }
  SeparatingPolynomial out;
  out.level = level;
  out.modulus = ipow(P, static_cast<unsigned long>(level));
  if (b.size() == 1) {
    out.coefficients = {1};
    out.norm_valuations = {0};
    out.properties_hold = true;
    return out;
  }
  {
    std::vector<BigRational> sorted = b;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw InputError("points must be distinct");
  }
  while (!separated(b, out.modulus)) {
    ++out.level;
    out.modulus *= P;
    if (out.modulus > kMaxSeparationModulus) throw InputError("separation needs a modulus above " + std::to_string(kMaxSeparationModulus));
  }
  const long q = out.modulus.get_si();
  const long r0 = residue_of(b[target], out.modulus).get_si();

  out.coefficients = {1};
  for (long c = 0; c < q; ++c) {
    if (c == r0) continue;
    std::vector<BigInt> next(out.coefficients.size() + 1, 0);
    for (std::size_t i = 0; i < out.coefficients.size(); ++i) {
      next[i + 1] += out.coefficients[i];
      next[i] -= c * out.coefficients[i];
    }
    out.coefficients = std::move(next);
  }

  // v_p(P(x)) = sum of v_p(x - c); INT_MAX when some factor vanishes.
  auto norm_valuation = [&](const BigRational& x) {
    int v = 0;
    for (long c = 0; c < q; ++c) {
      if (c == r0) continue;
      BigRational d = x - c;
      if (sgn(d) == 0) return INT_MAX;
      v += valuation(d, P);
    }
    return v;
  };
  const int target_v = norm_valuation(b[target]);
  auto property = [&](const BigRational& x, int v) {
    if (residue_of(x, out.modulus) == r0) return v == target_v;
    return v > target_v;
  };
  out.properties_hold = true;
  for (const auto& x : b) {
    int v = norm_valuation(x);
    out.norm_valuations.push_back(v);
    out.properties_hold = out.properties_hold && property(x, v);
  }
  for (long x = 0; x < q * p; ++x) {
    if (x % p == 0) continue;
    BigRational bx(x);
    out.properties_hold = out.properties_hold && property(bx, norm_valuation(bx));
  }
  return out;
}

VanishingCertificate vanishing_certificate(const VanishingSumInstance& inst) {
  require_odd_prime(inst.p);
  if (inst.a.empty() || inst.a.size() != inst.b.size()) throw InputError("a and b must be nonempty and of equal length");
  if (inst.precision < 2) throw InputError("precision must be at least 2");
  const BigInt P(inst.p);
  for (const auto& a : inst.a) {
    if (sgn(a) == 0) throw InputError("coefficients a_i must be nonzero");
  }
  for (const auto& b : inst.b) {
    if (sgn(b) == 0 || valuation(b, P) != 0) throw InputError("b_i must be p-adic units");
  }
  {
    std::vector<BigRational> sorted = inst.b;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw InputError("b_i must be pairwise distinct");
  }

  VanishingCertificate cert;
  RelationLattice lattice = relation_lattice(inst.b);
  cert.torsion_free = lattice.torsion_free;
  if (!cert.torsion_free) throw TorsionError("the b_i generate a group containing -1");

  cert.M = 1;
  for (const auto& b : inst.b) {
    int m = stabilizing_exponent(PAdicNumber::from_rational(b, inst.p, inst.precision));
    cert.M = std::lcm(cert.M, m);
  }
  for (const auto& b : inst.b) {
    cert.c.push_back(padic_log(PAdicNumber::from_rational(b, inst.p, inst.precision).pow(static_cast<unsigned long>(cert.M))));
  }
  for (std::size_t i = 0; i < cert.c.size(); ++i) {
    for (std::size_t j = i + 1; j < cert.c.size(); ++j) {
      if (cert.c[i] == cert.c[j]) throw PrecisionError("logarithms of b_i^M are not separated at this precision");
    }
  }

  int vmin = INT_MAX;
  for (const auto& a : inst.a) vmin = std::min(vmin, valuation(a, P));
  std::vector<BigRational> block;
  for (std::size_t i = 0; i < inst.a.size(); ++i) {
    if (valuation(inst.a[i], P) == vmin) {
      cert.leading_block.push_back(static_cast<int>(i));
      block.push_back(inst.b[i]);
    }
  }
  cert.separation = separating_polynomial(block, inst.p, 0);
  return cert;
}

PAdicNumber vanishing_sum(const VanishingSumInstance& inst, long s, int precision) {
  PAdicNumber acc = exact_zero(inst.p);
  for (std::size_t i = 0; i < inst.a.size(); ++i) {
    PAdicNumber a = PAdicNumber::from_rational(inst.a[i], inst.p, precision);
    PAdicNumber b = PAdicNumber::from_rational(inst.b[i], inst.p, precision);
    acc += a * b.pow(static_cast<unsigned long>(s));
  }
  return acc;
}

VanishingResult vanishing_exponents(const VanishingSumInstance& inst, int S_max) {
  if (S_max < 1) throw InputError("horizon must be at least 1");
  VanishingResult out;
  out.certificate = vanishing_certificate(inst);
  std::vector<BigRational> powers(inst.b.size(), BigRational(1));
  for (int s = 1; s <= S_max; ++s) {
    BigRational exact = 0;
    for (std::size_t i = 0; i < inst.b.size(); ++i) {
      powers[i] *= inst.b[i];
      exact += inst.a[i] * powers[i];
    }
    bool zero = vanishing_sum(inst, s, inst.precision).is_zero() && vanishing_sum(inst, s, 2 * inst.precision).is_zero();
    if (zero && sgn(exact) != 0) {
      throw PrecisionError("cannot separate the sum at s = " + std::to_string(s) + " from zero at precision " +
                           std::to_string(2 * inst.precision));
    }
    if (zero) out.solutions.push_back(s);
  }
  return out;
}

InterpolationResult interpolation_reduction(const VanishingSumInstance& inst, long s0, const std::vector<long>& samples,
                                            int m) {
  if (m < 0) throw InputError("derivative order must be non-negative");
  if (samples.size() < static_cast<std::size_t>(m) + 1) throw InputError("need at least m + 1 samples");
  VanishingCertificate cert = vanishing_certificate(inst);
  const long M = cert.M;
  auto mod = [M](long x) { return ((x % M) + M) % M; };
  for (long j : samples) {
    if (j < 0) throw InputError("sample exponents must be non-negative");
    if (mod(j) != mod(s0)) throw InputError("samples must be congruent to s0 modulo M = " + std::to_string(M));
  }
  {
    std::vector<long> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw InputError("samples must be distinct");
  }
  const int prec = inst.precision;
  const BigInt P(inst.p);
  InterpolationResult out;
  for (std::size_t w = 0; w + static_cast<std::size_t>(m) < samples.size(); ++w) {
    PAdicNumber acc = exact_zero(inst.p);
    for (int l = 0; l <= m; ++l) {
      const long jl = samples[w + l];
      BigInt denom = 1;
      for (int k = 0; k <= m; ++k) {
        if (k != l) denom *= BigInt(jl - samples[w + k]);
      }
      if (valuation(denom, P) >= prec) {
        throw PrecisionError("divided-difference denominators exhaust the precision " + std::to_string(prec));
      }
      acc += vanishing_sum(inst, jl, prec) / PAdicNumber::from_integer(denom, inst.p, prec);
    }
    out.values.push_back(acc);
  }
  BigInt scale = 1;
  for (int k = 2; k <= m; ++k) scale *= k;
  scale *= ipow(BigInt(M), static_cast<unsigned long>(m));
  PAdicNumber limit = exact_zero(inst.p);
  for (std::size_t i = 0; i < inst.a.size(); ++i) {
    PAdicNumber term = PAdicNumber::from_rational(inst.a[i], inst.p, prec) *
                       PAdicNumber::from_rational(rpow(inst.b[i], s0), inst.p, prec);
    if (m > 0) term *= cert.c[i].pow(static_cast<unsigned long>(m));
    limit += term;
  }
  out.limit = limit / PAdicNumber::from_integer(scale, inst.p, prec);
  return out;
}

std::vector<Monomial> monomials_up_to(int n, int d) {
  check_dimensions(n, d);
  std::vector<Monomial> out;
  for (int deg = 0; deg <= d; ++deg) {
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    std::vector<Monomial> layer;
    // all exponent vectors of total degree deg
    std::function<void(int, int)> rec = [&](int i, int left) {
      if (i == n - 1) {
        e[static_cast<std::size_t>(i)] = left;
        layer.push_back(monomial_from(e));
        return;
      }
      for (int k = left; k >= 0; --k) {
        e[static_cast<std::size_t>(i)] = k;
        rec(i + 1, left - k);
      }
    };
    rec(0, deg);
    std::sort(layer.begin(), layer.end(), std::greater<>());
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

std::vector<RationalSeries> RelationProbe::relations() const {
  std::vector<RationalSeries> out;
  for (const auto& v : kernel) {
    RationalSeries s(n, max_degree);
    for (std::size_t i = 0; i < v.size(); ++i) s.add_term(monomials[i], v[i]);
    out.push_back(std::move(s));
  }
  return out;
}

RelationProbe relation_probe(const std::vector<RationalPoint>& points, int d) {
  if (points.empty()) throw InputError("relation probe needs at least one point");
  check_points(points);
  RelationProbe out;
  out.n = static_cast<int>(points.front().size());
  out.max_degree = d;
  out.monomials = monomials_up_to(out.n, d);
  out.underdetermined = points.size() < out.monomials.size();
  RationalMatrix A;
  for (const auto& x : points) {
    std::vector<BigRational> row;
    for (Monomial m : out.monomials) row.push_back(monomial_value(m, x));
    A.push_back(std::move(row));
  }
  out.kernel = kernel(A, out.monomials.size());
  for (const auto& v : out.kernel) {
    for (const auto& row : A) {
      BigRational acc = 0;
      for (std::size_t i = 0; i < v.size(); ++i) acc += row[i] * v[i];
      if (sgn(acc) != 0) throw std::logic_error("kernel vector does not annihilate a sample point");
    }
  }
  return out;
}

std::vector<std::vector<PAdicNumber>> relation_probe_padic(const std::vector<PAdicPoint>& points, int d) {
  if (points.empty()) throw InputError("relation probe needs at least one point");
  const std::size_t n = points.front().size();
  const long p = points.front().front().prime();
  const auto monomials = monomials_up_to(static_cast<int>(n), d);
  const std::size_t cols = monomials.size();
  std::vector<std::vector<PAdicNumber>> A;
  for (const auto& x : points) {
    if (x.size() != n) throw InputError("points must share a dimension");
    std::vector<PAdicNumber> row;
    for (Monomial m : monomials) {
      PAdicNumber v = PAdicNumber::one(p, kExactZeroPrecision);
      for (std::size_t i = 0; i < n; ++i) {
        int k = exponent(m, static_cast<int>(i));
        if (k > 0) v *= x[i].pow(static_cast<unsigned long>(k));
      }
      row.push_back(v);
    }
    A.push_back(std::move(row));
  }
  // Row reduction with the pivot of smallest valuation in each column.
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < A.size(); ++c) {
    std::size_t best = A.size();
    for (std::size_t i = r; i < A.size(); ++i) {
      if (A[i][c].is_zero()) continue;
      if (best == A.size() || A[i][c].valuation() < A[best][c].valuation()) best = i;
    }
    if (best == A.size()) continue;
    std::swap(A[r], A[best]);
    const PAdicNumber inv = PAdicNumber::one(p, kExactZeroPrecision) / A[r][c];
    for (auto& e : A[r]) e *= inv;
    for (std::size_t i = 0; i < A.size(); ++i) {
      if (i == r || A[i][c].is_zero()) continue;
      const PAdicNumber factor = A[i][c];
      for (std::size_t j = 0; j < cols; ++j) A[i][j] -= factor * A[r][j];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<std::vector<PAdicNumber>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (std::find(pivot_cols.begin(), pivot_cols.end(), free) != pivot_cols.end()) continue;
    std::vector<PAdicNumber> v(cols, exact_zero(p));
    v[free] = PAdicNumber::one(p, kExactZeroPrecision);
    for (std::size_t k = 0; k < pivot_cols.size(); ++k) v[pivot_cols[k]] = -A[k][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

ClosureEstimate closure_dimension_estimate(const std::vector<BigRational>& lambda, const RationalPoint& start,
                                           int samples, int d) {
  if (lambda.empty() || lambda.size() != start.size()) throw InputError("eigenvalues and start point must match");
  if (samples < 1) throw InputError("need at least one sample");
  for (const auto& x : start) {
    if (sgn(x) == 0) throw InputError("start point lies on a coordinate hyperplane");
  }
  for (const auto& l : lambda) {
    if (sgn(l) == 0) throw InputError("eigenvalues must be nonzero");
  }
  ClosureEstimate out;
  std::vector<BigRational> mult = lambda;
  RelationLattice lattice = relation_lattice(mult);
  if (!lattice.torsion_free) {
    out.squared = true;
    for (auto& l : mult) l *= l;
    lattice = relation_lattice(mult);
  }
  out.lower_bound = lattice.rank;
  const std::size_t n = lambda.size();
  for (int t = 0; t < lattice.rank; ++t) {
    out.exponents.push_back(lattice.unimodular[static_cast<std::size_t>(t)]);
    BigRational mu = 1;
    for (std::size_t j = 0; j < n; ++j) mu *= rpow(mult[j], out.exponents.back()[j].get_si());
    out.multipliers.push_back(mu);
  }

  std::vector<RationalPoint> orbit, transformed;
  RationalPoint x = start;
  for (int i = 0; i < samples; ++i) {
    orbit.push_back(x);
    RationalPoint y;
    for (const auto& e : out.exponents) {
      BigRational v = 1;
      for (std::size_t j = 0; j < n; ++j) v *= rpow(x[j], e[j].get_si());
      y.push_back(v);
    }
    transformed.push_back(std::move(y));
    for (std::size_t j = 0; j < n; ++j) x[j] *= mult[j];
  }
  out.orbit_probe = relation_probe(orbit, d);
  if (lattice.rank == 0) return out;
  out.transformed_probe = relation_probe(transformed, d);
  if (out.transformed_probe.kernel.empty()) {
    out.estimate = lattice.rank;
    return out;
  }
  // Largest subset of transformed coordinates without relations.
  const int r = lattice.rank;
  for (int size = r - 1; size >= 1 && out.estimate == 0; --size) {
    std::vector<bool> choose(static_cast<std::size_t>(r), false);
    std::fill(choose.begin(), choose.begin() + size, true);
    do {
      std::vector<RationalPoint> sub;
      for (const auto& y : transformed) {
        RationalPoint z;
        for (int t = 0; t < r; ++t) {
          if (choose[static_cast<std::size_t>(t)]) z.push_back(y[static_cast<std::size_t>(t)]);
        }
        sub.push_back(std::move(z));
      }
      if (relation_probe(sub, d).kernel.empty()) {
        out.estimate = size;
        break;
      }
    } while (std::prev_permutation(choose.begin(), choose.end()));
  }
  return out;
}

std::vector<RationalPoint> rational_orbit(const AnalyticMap& f, const RationalPoint& y, int k) {
  if (static_cast<int>(y.size()) != f.n) throw InputError("point has wrong dimension");
  std::vector<RationalPoint> out{y};
  for (int i = 1; i <= k; ++i) {
    RationalPoint next;
    std::size_t bits = 0;
    for (const auto& comp : f.components) {
      next.push_back(comp.evaluate(out.back(), BigRational(0)));
      bits += mpz_sizeinbase(next.back().get_num_mpz_t(), 2) + mpz_sizeinbase(next.back().get_den_mpz_t(), 2);
    }
    if (bits > kMaxExactBits) throw InputError("iterate " + std::to_string(i) + " is too large for exact arithmetic");
    out.push_back(std::move(next));
  }
  return out;
}

UnionComparison union_closure_compare(const AnalyticMap& f, const std::vector<RationalPoint>& Y,
                                      const std::vector<int>& S1, const std::vector<int>& S2, int d) {
  if (Y.empty() || S1.empty() || S2.empty()) throw InputError("sample set and index sets must be nonempty");
  EigenData eig = rational_eigenvalues(jacobian_at_origin(f));
  if (!relation_lattice(eig.eigenvalues).torsion_free) {
    throw TorsionError("the multiplier group contains -1; pass to the second iterate");
  }
  int top = 0;
  for (int i : S1) top = std::max(top, i);
  for (int i : S2) top = std::max(top, i);
  if (*std::min_element(S1.begin(), S1.end()) < 0 || *std::min_element(S2.begin(), S2.end()) < 0) {
    throw InputError("iterate indices must be non-negative");
  }
  std::vector<std::vector<RationalPoint>> orbits;
  for (const auto& y : Y) orbits.push_back(rational_orbit(f, y, top));
  auto union_points = [&](const std::vector<int>& S) {
    std::vector<RationalPoint> pts;
    for (const auto& orb : orbits) {
      for (int i : S) pts.push_back(orb[static_cast<std::size_t>(i)]);
    }
    return pts;
  };
  UnionComparison out;
  out.first = relation_probe(union_points(S1), d);
  out.second = relation_probe(union_points(S2), d);
  out.equal = same_span(out.first.kernel, out.second.kernel);
  return out;
}

}  // namespace padyn
